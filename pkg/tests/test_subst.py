import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gensyn.descriptions import BOUND
from gensyn.errors import ContextMismatch
from gensyn.laws import generate_cases, run_laws
from gensyn.scope import Drop, Subst, refl_ope, refl_sub
from gensyn.subst import ren, sub, sub1
from gensyn.termgen import GenConfig, type_space
from gensyn.terms import FCon, FVar, Tm, TVar, descend, resolve, untype
from gensyn.typecheck import validate_typed

from conftest import BASE, BB, BOOL, CHURCH, CHURCH_BOOL, CURRY, CURRY_BOOL, LETREC, SUGARED_CURRY, name_expr, tm

ALL = [CURRY, CHURCH, CURRY_BOOL, CHURCH_BOOL, SUGARED_CURRY, LETREC]


def test_ren_examples():
    e = tm(CURRY, "(lam [base] (var 0))")
    assert ren(refl_ope(()), e) == e
    got = ren(Drop(refl_ope(()), BOOL), e)
    assert got == Tm((BOOL,), e.body)
    v = Tm((BASE,), TVar(0, BASE))
    assert ren(Drop(refl_ope((BASE,)), BOOL), v) == Tm((BASE, BOOL), TVar(1, BASE))
    with pytest.raises(ContextMismatch):
        ren(refl_ope((BOOL,)), v)


def test_sub_examples():
    e = tm(CURRY_BOOL, "(app (lam [base] (var 1)) (var 0))", [BOOL, BASE])
    assert sub(refl_sub(e.ctx), e) == e
    t = tm(CURRY_BOOL, "true")
    sigma = refl_sub(()).snoc(t)
    assert sub(sigma, Tm((BOOL,), TVar(0, BOOL))) == t
    lam = tm(CURRY_BOOL, "(lam [base] (var 1))", [BOOL])
    assert sub(sigma, lam) == tm(CURRY_BOOL, "(lam [base] true)")
    with pytest.raises(ContextMismatch):
        sub(refl_sub((BASE,)), lam)


def test_sub1_examples():
    e0 = tm(CURRY_BOOL, "(lam [base] (var 0))", [BASE])
    assert sub1(e0, Tm((BASE, BB), TVar(0, BB))) == e0
    assert sub1(e0, Tm((BASE, BB), TVar(1, BASE))) == Tm((BASE,), TVar(0, BASE))
    assert sub1(tm(CURRY_BOOL, "true"), Tm((BOOL,), TVar(0, BOOL))) == tm(CURRY_BOOL, "true")
    with pytest.raises(ContextMismatch):
        sub1(e0, Tm((BOOL,), TVar(0, BOOL)))


# ---------------------------------------------------------------------------
# Named capture-avoiding substitution oracle


def free_names(lang, f):
    if isinstance(f, FVar):
        return {f.name}
    nd, _ = descend(lang.root, f.path)
    out = set()
    for row, c in zip(nd.shape, f.children):
        bound = {b for flag, b in zip(row, f.binders) if flag is BOUND}
        out |= free_names(lang, c) - bound
    return out


def named_subst(lang, f, env: dict, fresh):
    """Simultaneous substitution on names, renaming any binder that would capture."""
    if isinstance(f, FVar):
        return env.get(f.name, f)
    nd, _ = descend(lang.root, f.path)
    danger = set().union(*(free_names(lang, v) for v in env.values())) if env else set()
    binders = list(f.binders)
    renames = {}
    for i, b in enumerate(binders):
        if b in danger:
            new = next(fresh)
            renames[b] = new
            binders[i] = new
    kids = []
    for row, c in zip(nd.shape, f.children):
        inner = dict(env)
        for flag, b in zip(row, f.binders):
            if flag is BOUND:
                inner.pop(b, None)
                if b in renames:
                    inner[b] = FVar(renames[b])
        kids.append(named_subst(lang, c, inner, fresh))
    return FCon(f.path, tuple(binders), tuple(kids))


def counter(prefix):
    return (f"{prefix}{i}" for i in itertools.count())


@given(st.sampled_from(ALL), st.integers(0, 2**32))
def test_sub_agrees_with_named_oracle(lang, seed):
    space = type_space(lang, 2)
    rng = random.Random(seed)
    delta = space.random_ctx(rng, 3)
    gamma = (BASE,) + space.random_ctx(rng, 2)
    ts = [t for t in space.types if space.inhabited(delta, t, 4)]
    if not ts:
        return
    e = Tm(delta, space.random_term(rng, delta, rng.choice(ts), 4))
    sigma = Subst(gamma, tuple(space.random_term(rng, gamma, t, 3) for t in delta))

    dnames = [f"d{i}" for i in range(len(delta))]
    gnames = [f"g{i}" for i in range(len(gamma))]
    # binders in e reuse the names free in sigma's entries, forcing renames
    fe = name_expr(untype(e), counter("g"), dnames)
    assert resolve(lang, dnames, fe) == untype(e)
    env = {}
    for v, entry in enumerate(sigma.entries):
        env[dnames[v]] = name_expr(untype(Tm(gamma, entry)), counter("b"), gnames)
    expected = named_subst(lang, fe, env, counter("fresh"))
    assert resolve(lang, gnames, expected) == untype(sub(sigma, e))


# ---------------------------------------------------------------------------
# Laws and preservation on generated cases


@given(st.sampled_from(ALL), st.integers(0, 2**32))
def test_laws_hold(lang, seed):
    cases = generate_cases(lang, GenConfig(seed=seed, max_depth=4, max_ctx=3, count=5))
    report = run_laws(lang, cases)
    assert report.ok, report.lines()


@given(st.sampled_from(ALL), st.integers(0, 2**32))
def test_preservation(lang, seed):
    for c in generate_cases(lang, GenConfig(seed=seed, max_depth=4, max_ctx=3, count=3)):
        for out, ctx in ((ren(c.rho1, c.e), c.sigma1.ctx), (sub(c.sigma1, c.e), c.sigma1.ctx)):
            assert out.ctx == ctx and out.ty == c.e.ty
            assert validate_typed(lang, out) == []


def test_law_failure_is_reported():
    # a deliberately wrong "composition" must be caught with a counterexample
    from gensyn import laws

    cases = generate_cases(CURRY_BOOL, GenConfig(seed=3, max_depth=4, max_ctx=3, count=30))
    saved = dict(laws.LAWS)
    try:
        laws.LAWS["ren-ren"] = lambda c: (ren(c.rho2, ren(c.rho1, c.e)), ren(c.rho1, c.e))
        report = run_laws(CURRY_BOOL, cases, preservation=False)
    finally:
        laws.LAWS.clear()
        laws.LAWS.update(saved)
    bad = [r for r in report.results if not r.ok]
    assert [r.name for r in bad] == ["ren-ren"]
    assert bad[0].counterexample
