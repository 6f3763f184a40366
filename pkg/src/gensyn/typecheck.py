"""Bidirectional typechecking of scoped terms against a description.

Each constructor node is solved on its own: its equations are unified over
the node's metavariables (binder types, subterm types, its own type and the
type payloads on its path).  Information crosses node boundaries only as
patterns handed down to children as expectations and as ground types handed
back up from them; unknown parts of an expectation become fresh holes local
to the child.

Children are visited left to right.  A child that cannot yet be typed for
lack of annotations is deferred and retried once its siblings have pinned
down more of the node's metavariables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .descriptions import (
    BOUND,
    Con,
    Diagnostic,
    LanguageDescription,
    MetaB,
    MetaP,
    MetaR,
    MetaS,
    Node,
    Ty,
    format_pattern,
    format_ty,
    pattern_of,
    ty_errors,
    visible_types,
)
from .errors import GensynError, PathError, format_term_path
from .terms import (
    Ctx,
    ECon,
    EVar,
    Expr,
    ExprNode,
    TCon,
    Tm,
    TmNode,
    TVar,
    ctx_extend,
    descend,
    var_type,
)


@dataclass(frozen=True)
class Hole:
    """An unknown inherited from an enclosing node's expectation."""

    k: int

    def __repr__(self) -> str:
        return f"?{self.k}"


_META_TYPES = (MetaB, MetaS, MetaR, MetaP, Hole)


def is_meta(p) -> bool:
    return isinstance(p, _META_TYPES)


class UnifyError(GensynError):
    def __init__(self, kind: str, lhs, rhs):
        super().__init__(f"{kind}: {format_pattern(lhs)} vs {format_pattern(rhs)}")
        self.kind = kind
        self.lhs = lhs
        self.rhs = rhs


@dataclass(frozen=True)
class UnifyState:
    bindings: Mapping = field(default_factory=dict)

    def walk(self, p):
        while is_meta(p) and p in self.bindings:
            p = self.bindings[p]
        return p

    def resolve(self, p):
        p = self.walk(p)
        if isinstance(p, Con):
            return Con(p.ctor, tuple(self.resolve(a) for a in p.args))
        return p

    def is_ground(self, p) -> bool:
        p = self.walk(p)
        if isinstance(p, Con):
            return all(self.is_ground(a) for a in p.args)
        return False

    def bind(self, m, p) -> UnifyState:
        new = dict(self.bindings)
        new[m] = p
        return UnifyState(new)


def _occurs(m, p, st: UnifyState) -> bool:
    p = st.walk(p)
    if p == m:
        return True
    if isinstance(p, Con):
        return any(_occurs(m, a, st) for a in p.args)
    return False


def unify(p1, p2, st: UnifyState | None = None) -> UnifyState:
    """Most general extension of ``st`` equating ``p1`` and ``p2``."""
    st = st if st is not None else UnifyState()
    a, b = st.walk(p1), st.walk(p2)
    if a == b:
        return st
    if is_meta(a):
        if _occurs(a, b, st):
            raise UnifyError("OccursCheck", a, st.resolve(b))
        return st.bind(a, b)
    if is_meta(b):
        return unify(b, a, st)
    if a.ctor != b.ctor or len(a.args) != len(b.args):
        raise UnifyError("Mismatch", st.resolve(a), st.resolve(b))
    for x, y in zip(a.args, b.args):
        st = unify(x, y, st)
    return st


def to_ty(p) -> Ty:
    if not isinstance(p, Con):
        raise ValueError(f"pattern {p!r} is not ground")
    return Ty(p.ctor, tuple(to_ty(a) for a in p.args))


def instantiate(p, assign: Mapping) -> Ty:
    if isinstance(p, Con):
        return Ty(p.ctor, tuple(instantiate(a, assign) for a in p.args))
    return assign[p]


# ---------------------------------------------------------------------------
# Errors


class IllFormedType(GensynError):
    pass


class TypeCheckError(GensynError):
    """kind is one of Mismatch, AnnotationRequired, UnboundVar, OccursCheck,
    ConstraintUnsatisfied, ContextMismatch."""

    def __init__(self, kind: str, detail: str, path: tuple[int, ...] = (), **info):
        super().__init__(f"{format_term_path(path)}: {kind}: {detail}")
        self.kind = kind
        self.detail = detail
        self.path = path
        self.info = info

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(format_term_path(self.path), self.kind, self.detail)


# ---------------------------------------------------------------------------
# check / infer


def check(lang: LanguageDescription, ctx: Ctx, e: Expr, t: Ty) -> Tm:
    ctx = tuple(ctx)
    _check_types(lang, list(ctx) + [t])
    _check_scope_matches(ctx, e)
    if isinstance(e.body, EVar):
        got = _var(ctx, e.body, ())
        if got.ty != t:
            raise TypeCheckError(
                "Mismatch", f"expected {format_ty(t)}, got {format_ty(got.ty)}", (), expected=t, got=got.ty
            )
        return Tm(ctx, got)
    body = _elab_con(lang, ctx, e.body, pattern_of(t), ())
    return Tm(ctx, body)


def infer(lang: LanguageDescription, ctx: Ctx, e: Expr) -> tuple[Tm, Ty]:
    ctx = tuple(ctx)
    _check_types(lang, ctx)
    _check_scope_matches(ctx, e)
    body = _elab(lang, ctx, e.body, None, ())
    return Tm(ctx, body), body.ty


def _check_types(lang, tys: Sequence[Ty]) -> None:
    for t in tys:
        errs = ty_errors(lang.tysig, t)
        if errs:
            raise IllFormedType(f"{format_ty(t)}: {errs[0]}")


def _check_scope_matches(ctx: Ctx, e: Expr) -> None:
    if e.scope != len(ctx):
        raise TypeCheckError("ContextMismatch", f"term has scope {e.scope}, context has {len(ctx)} entries")


def _var(ctx: Ctx, v: EVar, where) -> TVar:
    if not 0 <= v.index < len(ctx):
        raise TypeCheckError("UnboundVar", f"index {v.index} with {len(ctx)} variable(s) in scope", where)
    return TVar(v.index, var_type(ctx, v.index))


def _elab(lang, ctx: Ctx, e: ExprNode, hint, where) -> TmNode:
    if isinstance(e, EVar):
        return _var(ctx, e, where)
    return _elab_con(lang, ctx, e, hint, where)


def _as_hint(st: UnifyState, p):
    """Resolve ``p`` and rename its unsolved metavariables to fresh holes."""
    names: dict = {}

    def go(q):
        if isinstance(q, Con):
            return Con(q.ctor, tuple(go(a) for a in q.args))
        if q not in names:
            names[q] = Hole(len(names))
        return names[q]

    return go(st.resolve(p))


def _elab_con(lang, ctx: Ctx, e: ECon, hint, where) -> TCon:
    try:
        nd, payloads = descend(lang.root, e.path)
    except PathError as exc:
        raise TypeCheckError("Mismatch", f"bad constructor path: {exc}", where) from None
    if len(e.children) != nd.k:
        raise TypeCheckError("Mismatch", f"node takes {nd.k} children, got {len(e.children)}", where)
    _check_types(lang, list(payloads.values()))

    st = UnifyState()
    for name, t in payloads.items():
        st = st.bind(MetaP(name), pattern_of(t))
    if hint is not None:
        try:
            st = unify(MetaR(), hint, st)
        except UnifyError as exc:  # holes are fresh, so only a clash is possible here
            raise TypeCheckError("Mismatch", f"expected {format_pattern(hint)}", where) from exc
    for i, (lhs, rhs) in enumerate(nd.constraint):
        try:
            st = unify(lhs, rhs, st)
        except UnifyError as exc:
            if exc.kind == "OccursCheck":
                raise TypeCheckError("OccursCheck", f"equation {i}: {exc}", where, eq_index=i) from None
            expected = format_pattern(st.resolve(MetaR())) if hint is not None else None
            detail = f"equation {i}: cannot unify {format_pattern(exc.lhs)} with {format_pattern(exc.rhs)}"
            if expected is not None:
                detail += f" (expected type {expected})"
            raise TypeCheckError("Mismatch", detail, where, eq_index=i) from None

    children: list[TmNode | None] = [None] * nd.k
    pending = list(range(nd.k))
    tried: dict[int, tuple] = {}
    blocked: dict[int, TypeCheckError] = {}
    while pending:
        progress = False
        first_err: TypeCheckError | None = None
        for j in list(pending):
            row = nd.shape[j]
            unsolved = [i for i, b in enumerate(row) if b is BOUND and not st.is_ground(MetaB(i))]
            if unsolved:
                err = TypeCheckError(
                    "AnnotationRequired", f"binder type B{unsolved[0]} is undetermined", where, meta=MetaB(unsolved[0])
                )
                first_err = first_err or err
                continue
            binder_tys = tuple(to_ty(st.resolve(MetaB(i))) for i in range(nd.n) if row[i] is BOUND)
            child_hint = _as_hint(st, MetaS(j))
            key = (child_hint, binder_tys)
            if tried.get(j) == key:
                first_err = first_err or blocked[j]
                continue
            tried[j] = key
            child_ctx = ctx_extend(ctx, binder_tys)
            try:
                child = _elab(lang, child_ctx, e.children[j], child_hint, where + (j,))
            except TypeCheckError as exc:
                if exc.kind == "Mismatch" and exc.path == where + (j,):
                    # the child's own type clashes with what this node expects:
                    # report the violated equation here if the child infers
                    child = _try_infer(lang, child_ctx, e.children[j], where + (j,))
                    if child is None:
                        raise
                elif exc.kind == "AnnotationRequired":
                    blocked[j] = exc
                    first_err = first_err or exc
                    continue
                else:
                    raise
            try:
                st = unify(MetaS(j), pattern_of(child.ty), st)
            except UnifyError:
                idx = _violated_equation(nd, payloads, hint, children, j, child.ty)
                raise TypeCheckError(
                    "ConstraintUnsatisfied",
                    f"equation {idx} violated: subterm {j} has type {format_ty(child.ty)}",
                    where,
                    eq_index=idx,
                ) from None
            children[j] = child
            pending.remove(j)
            progress = True
        if not progress:
            assert first_err is not None
            raise first_err

    for i in range(nd.n):
        if not st.is_ground(MetaB(i)):
            raise TypeCheckError("AnnotationRequired", f"binder type B{i} is undetermined", where, meta=MetaB(i))
    if not st.is_ground(MetaR()):
        raise TypeCheckError("AnnotationRequired", "the node's own type is undetermined", where, meta=MetaR())
    ts0 = tuple(to_ty(st.resolve(MetaB(i))) for i in range(nd.n))
    ty = to_ty(st.resolve(MetaR()))
    result = TCon(e.path, ts0, tuple(children), ty, nd)
    bad = _node_violations(nd, payloads, result)
    if bad:
        raise TypeCheckError("ConstraintUnsatisfied", f"equation {bad[0]} violated", where, eq_index=bad[0])
    return result


def _try_infer(lang, ctx: Ctx, e: ExprNode, where) -> TmNode | None:
    try:
        return _elab(lang, ctx, e, None, where)
    except TypeCheckError:
        return None


def _violated_equation(nd: Node, payloads, hint, children, j: int, ty: Ty) -> int:
    st = UnifyState()
    for name, t in payloads.items():
        st = st.bind(MetaP(name), pattern_of(t))
    if hint is not None:
        st = unify(MetaR(), hint, st)
    for m, c in enumerate(children):
        if c is not None:
            st = unify(MetaS(m), pattern_of(c.ty), st)
    st = st.bind(MetaS(j), pattern_of(ty))
    for i, (lhs, rhs) in enumerate(nd.constraint):
        try:
            st = unify(lhs, rhs, st)
        except UnifyError:
            return i
    return -1


def _assignment(nd: Node, payloads: Mapping[str, Ty], t: TCon) -> dict:
    assign: dict = {MetaR(): t.ty}
    assign.update({MetaB(i): ty for i, ty in enumerate(t.ts0)})
    assign.update({MetaS(j): c.ty for j, c in enumerate(t.children)})
    assign.update({MetaP(name): ty for name, ty in payloads.items()})
    return assign


def _node_violations(nd: Node, payloads, t: TCon) -> list[int]:
    assign = _assignment(nd, payloads, t)
    return [i for i, (lhs, rhs) in enumerate(nd.constraint) if instantiate(lhs, assign) != instantiate(rhs, assign)]


# ---------------------------------------------------------------------------
# Validation of typed terms


def validate_typed(lang: LanguageDescription, e: Tm) -> list[Diagnostic]:
    found: list[tuple[tuple[int, ...], Diagnostic]] = []

    def report(where, kind, detail):
        found.append((where, Diagnostic(format_term_path(where), kind, detail)))

    for t in e.ctx:
        for msg in ty_errors(lang.tysig, t):
            report((), "IllFormedType", f"context: {msg}")

    def go(ctx: Ctx, t: TmNode, where) -> None:
        for msg in ty_errors(lang.tysig, t.ty):
            report(where, "IllFormedType", msg)
        if isinstance(t, TVar):
            if not 0 <= t.index < len(ctx):
                report(where, "UnboundVar", f"index {t.index} with {len(ctx)} variable(s) in scope")
            elif var_type(ctx, t.index) != t.ty:
                report(where, "Mismatch", f"expected {format_ty(var_type(ctx, t.index))}, got {format_ty(t.ty)}")
            return
        try:
            nd, payloads = descend(lang.root, t.path)
        except PathError as exc:
            report(where, "BadPath", str(exc))
            return
        if t.node != nd:
            report(where, "NodeMismatch", "stored node differs from the one its path selects")
        if len(t.ts0) != nd.n or len(t.children) != nd.k:
            report(where, "ArityMismatch", f"{len(t.ts0)} binder type(s) / {len(t.children)} children for n={nd.n}, k={nd.k}")
            return
        for ty in (*t.ts0, *payloads.values()):
            for msg in ty_errors(lang.tysig, ty):
                report(where, "IllFormedType", msg)
        for i in _node_violations(nd, payloads, t):
            lhs, rhs = nd.constraint.equations[i]
            report(where, "ConstraintUnsatisfied", f"equation {i}: {format_pattern(lhs)} = {format_pattern(rhs)}")
        for j, c in enumerate(t.children):
            go(ctx_extend(ctx, visible_types(nd.shape[j], t.ts0)), c, where + (j,))

    go(tuple(e.ctx), e.body, ())
    found.sort(key=lambda item: item[0])
    return [d for _, d in found]
