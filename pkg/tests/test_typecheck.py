from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gensyn.descriptions import Con, MetaB, MetaR, MetaS, Ty, ground_types, TySig
from gensyn.terms import ECon, EVar, Expr, Tag, TCon, Tm, TVar, untype
from gensyn.typecheck import (
    IllFormedType,
    TypeCheckError,
    UnifyError,
    UnifyState,
    check,
    infer,
    instantiate,
    unify,
    validate_typed,
)

from conftest import (
    BASE,
    BB,
    BOOL,
    CHURCH,
    CHURCH_BOOL,
    CHURCH_LETREC,
    CURRY,
    CURRY_BOOL,
    LETREC,
    SUGARED_CHURCH,
    SUGARED_CURRY,
    arrow,
    ex,
    generated,
    hand_enum,
    tm,
)

ARR = lambda a, b: Con("->", (a, b))  # noqa: E731
CBASE = Con("base")


def test_unify_examples():
    st0 = UnifyState().bind(MetaR(), ARR(CBASE, CBASE))
    st1 = unify(MetaR(), ARR(MetaB(0), MetaS(0)), st0)
    assert st1.resolve(MetaB(0)) == CBASE and st1.resolve(MetaS(0)) == CBASE
    with pytest.raises(UnifyError) as err:
        unify(MetaB(0), ARR(MetaB(0), CBASE))
    assert err.value.kind == "OccursCheck"
    with pytest.raises(UnifyError) as err:
        unify(Con("bool"), CBASE)
    assert err.value.kind == "Mismatch"


METAS = [MetaB(0), MetaS(0)]
SIG = TySig((("base", 0), ("->", 2)))
pats = st.recursive(
    st.sampled_from(METAS + [CBASE]),
    lambda inner: st.builds(ARR, inner, inner),
    max_leaves=4,
)
GROUND = ground_types(SIG, 3)


@given(pats, pats)
def test_unify_is_most_general(p1, p2):
    # brute force: every assignment of the two metas to ground types of depth <= 3
    sols = []
    for a, b in product(GROUND, repeat=2):
        assign = {METAS[0]: a, METAS[1]: b}
        if instantiate(p1, assign) == instantiate(p2, assign):
            sols.append(assign)
    try:
        st_ = unify(p1, p2)
    except UnifyError:
        assert sols == []
        return
    assert st_.resolve(p1) == st_.resolve(p2)
    for assign in sols:
        # each solution factors through the mgu: the mgu's bindings hold under it
        for m in METAS:
            assert instantiate(st_.resolve(m), assign) == assign[m]


def test_check_examples():
    got = check(CURRY, (), ex(CURRY, "(lam (var 0))"), BB)
    assert got == Tm((), TCon((Tag("lam"),), (BASE,), (TVar(0, BASE),), BB, None))
    with pytest.raises(TypeCheckError) as err:
        check(CURRY_BOOL, (), ex(CURRY_BOOL, "(lam (var 0))"), BOOL)
    assert err.value.kind == "Mismatch"
    with pytest.raises(TypeCheckError) as err:
        check(CURRY_BOOL, (), ex(CURRY_BOOL, "(if true (lam true) false)"), BOOL)
    assert err.value.kind in ("ConstraintUnsatisfied", "Mismatch")
    # the branch disagreement is on the branch equations
    e = ex(CHURCH_BOOL, "(if true false (lam {base} (var 0)))")
    with pytest.raises(TypeCheckError) as err:
        infer(CHURCH_BOOL, (), e)
    assert err.value.kind == "ConstraintUnsatisfied"
    assert err.value.info["eq_index"] == 2
    with pytest.raises(TypeCheckError) as err:
        check(CHURCH_BOOL, (), e, BOOL)
    assert err.value.kind == "ConstraintUnsatisfied" and err.value.info["eq_index"] == 2


def test_infer_examples():
    with pytest.raises(TypeCheckError) as err:
        infer(CURRY, (), ex(CURRY, "(lam (var 0))"))
    assert err.value.kind == "AnnotationRequired"
    got, ty = infer(CHURCH, (), ex(CHURCH, "(lam {base} (var 0))"))
    assert ty == BB and validate_typed(CHURCH, got) == []
    for lang in (CURRY, CHURCH_BOOL):
        assert infer(lang, (BB,), Expr(1, EVar(0))) == (Tm((BB,), TVar(0, BB)), BB)


def test_other_errors():
    with pytest.raises(TypeCheckError) as err:
        lam = ECon((Tag("lam"),), (EVar(4),), None)
        infer(CURRY, (BASE,), Expr(1, ECon((Tag("app"),), (lam, EVar(0)), None)))
    assert err.value.kind == "UnboundVar" and err.value.path == (0, 0)
    assert str(err.value.diagnostic()).startswith("/0/0: UnboundVar: ")
    with pytest.raises(TypeCheckError) as err:
        check(CURRY, (BASE,), Expr(1, EVar(0)), BB)
    assert err.value.kind == "Mismatch"
    with pytest.raises(TypeCheckError) as err:
        check(CURRY, (), Expr(1, EVar(0)), BB)
    assert err.value.kind == "ContextMismatch"
    with pytest.raises(IllFormedType):
        check(CURRY, (), ex(CURRY, "(lam (var 0))"), Ty("bool"))
    with pytest.raises(TypeCheckError) as err:
        infer(CURRY, (BASE,), ex(CURRY, "(app (var 0) (var 0))", 1))
    assert err.value.kind == "ConstraintUnsatisfied" and err.value.info["eq_index"] == 0


def test_occurs_check_on_self_application():
    # x x with x : ?  needs S0 = S1 -> R where S0 = S1 (the same variable)
    e = ex(CURRY, "(lam (app (var 0) (var 0)))")
    with pytest.raises(TypeCheckError) as err:
        check(CURRY, (), e, BB)
    assert err.value.kind in ("Mismatch", "ConstraintUnsatisfied", "OccursCheck")


def test_curry_application_needs_deferral():
    # the argument is checked first, which then fixes the lambda's binder type
    e = ex(SUGARED_CURRY, "(app (lam (var 0)) true)")
    got, ty = infer(SUGARED_CURRY, (), e)
    assert ty == BOOL and validate_typed(SUGARED_CURRY, got) == []


def test_letrec_typechecks():
    # Curry letrec: the binder type only flows from the definition, which needs it first
    with pytest.raises(TypeCheckError) as err:
        check(LETREC, (), ex(LETREC, "(letrec (lam (var 0)) (var 0))"), BB)
    assert err.value.kind == "AnnotationRequired"
    e = ex(CHURCH_LETREC, "(letrec {(-> bool bool)} (lam {bool} (app (var 1) (var 0))) (var 0))")
    got, ty = infer(CHURCH_LETREC, (), e)
    assert ty == arrow(BOOL, BOOL) and got.body.ts0 == (ty,)
    assert validate_typed(CHURCH_LETREC, got) == []


def test_validate_typed_examples():
    good = check(CURRY_BOOL, (), ex(CURRY_BOOL, "(lam (var 0))"), BB)
    assert validate_typed(CURRY_BOOL, good) == []
    bad = Tm((), TCon(good.body.path, (BOOL,), (TVar(0, BOOL),), BB, good.body.node))
    assert [d.kind for d in validate_typed(CURRY_BOOL, bad)] == ["ConstraintUnsatisfied"]
    oob = Tm((BASE,), TVar(2, BASE))
    assert [d.kind for d in validate_typed(CURRY_BOOL, oob)] == ["UnboundVar"]
    wrong = Tm((BASE,), TVar(0, BOOL))
    assert [d.kind for d in validate_typed(CURRY_BOOL, wrong)] == ["Mismatch"]
    ill = Tm((Ty("nat"),), TVar(0, Ty("nat")))
    assert "IllFormedType" in [d.kind for d in validate_typed(CURRY_BOOL, ill)]
    # diagnostics come out ordered by path
    two = tm(CURRY_BOOL, "(app (lam [base] (var 0)) (var 0))", [BASE])
    broken = Tm(two.ctx, TCon(two.body.path, (), (two.body.children[0], TVar(5, BASE)), BASE, two.body.node))
    paths = [d.path for d in validate_typed(CURRY_BOOL, broken)]
    assert paths == sorted(paths)


CHURCH_LANGS = [CHURCH, CHURCH_BOOL, SUGARED_CHURCH, CHURCH_LETREC]
CURRY_LANGS = [CURRY, CURRY_BOOL, SUGARED_CURRY, LETREC]


@given(st.sampled_from(CHURCH_LANGS), st.integers(0, 2**32))
def test_church_roundtrip(lang, seed):
    for e in generated(lang, seed, count=5, depth=5):
        assert check(lang, e.ctx, untype(e), e.ty) == e
        got, ty = infer(lang, e.ctx, untype(e))
        assert validate_typed(lang, got) == []
        assert untype(got) == untype(e)


@given(st.sampled_from(CURRY_LANGS), st.integers(0, 2**32))
def test_curry_check_is_sound(lang, seed):
    # erasure forgets unused binder types in Curry style, so only soundness holds
    for e in generated(lang, seed, count=5, depth=5):
        try:
            got = check(lang, e.ctx, untype(e), e.ty)
        except TypeCheckError as exc:
            assert exc.kind == "AnnotationRequired"
            continue
        assert validate_typed(lang, got) == []
        assert untype(got) == untype(e) and got.ty == e.ty


@given(st.sampled_from(CHURCH_LANGS + CURRY_LANGS), st.integers(0, 2**32))
def test_check_infer_agree(lang, seed):
    for e in generated(lang, seed, count=5, depth=5):
        x = untype(e)
        try:
            got, ty = infer(lang, e.ctx, x)
        except TypeCheckError:
            continue
        assert check(lang, e.ctx, x, ty) == got
        assert infer(lang, e.ctx, x) == (got, ty)


def test_curry_roundtrip_counterexample():
    # two distinct typed terms with the same erasure: the unused binder's type is lost
    a = tm(CURRY_BOOL, "(app (lam [(-> base base)] true) (lam [base] (var 0)))")
    b = tm(CURRY_BOOL, "(app (lam [(-> bool bool)] true) (lam [bool] (var 0)))")
    assert a != b and untype(a) == untype(b)
    with pytest.raises(TypeCheckError) as err:
        check(CURRY_BOOL, (), untype(a), BOOL)
    assert err.value.kind == "AnnotationRequired"


@pytest.mark.parametrize("size", range(1, 6))
def test_check_on_every_small_church_term(size):
    for ty in [BASE, BOOL, BB, arrow(BOOL, BOOL)]:
        for text in hand_enum((), ty, size, church=True):
            e = tm(CHURCH_BOOL, text)
            assert check(CHURCH_BOOL, (), untype(e), ty) == e
