"""Order-preserving embeddings and simultaneous substitutions, as data.

An :class:`Ope` from ``Γ`` to ``Δ`` (written ``Γ ⊇ Δ``) is a snoc-spine of
``Drop``/``Keep`` steps ending in ``Done``; the outermost step talks about the
rightmost entry of ``Γ``.  A :class:`Subst` ``Γ ⊢* Δ`` holds one term in ``Γ``
for every entry of ``Δ``, in the same left-to-right order as ``Δ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .descriptions import Ty
from .errors import ContextMismatch
from .terms import Ctx, Tm, TmNode, TVar, var_type


@dataclass(frozen=True)
class Done:
    pass


@dataclass(frozen=True)
class Drop:
    rest: Ope
    t: Ty


@dataclass(frozen=True)
class Keep:
    rest: Ope
    t: Ty


Ope = Union[Done, Drop, Keep]

DONE = Done()


def _steps(ope: Ope) -> list[Drop | Keep]:
    """Steps innermost-first (leftmost context entry first)."""
    steps = []
    while not isinstance(ope, Done):
        steps.append(ope)
        ope = ope.rest
    steps.reverse()
    return steps


def _rebuild(steps: Sequence[Drop | Keep]) -> Ope:
    ope: Ope = DONE
    for s in steps:
        ope = type(s)(ope, s.t)
    return ope


def ope_source(ope: Ope) -> Ctx:
    return tuple(s.t for s in _steps(ope))


def ope_target(ope: Ope) -> Ctx:
    return tuple(s.t for s in _steps(ope) if isinstance(s, Keep))


def refl_ope(ctx: Ctx) -> Ope:
    ope: Ope = DONE
    for t in ctx:
        ope = Keep(ope, t)
    return ope


def keep_star(tys: Sequence[Ty], rho: Ope) -> Ope:
    for t in tys:
        rho = Keep(rho, t)
    return rho


def drop_star(tys: Sequence[Ty], rho: Ope) -> Ope:
    for t in tys:
        rho = Drop(rho, t)
    return rho


def weaken(ctx: Ctx, tys: Sequence[Ty]) -> Ope:
    """The embedding ``ctx <>< tys ⊇ ctx``."""
    return drop_star(tys, refl_ope(ctx))


def ren_var(rho: Ope, index: int) -> int:
    out = 0
    ope = rho
    while True:
        match ope:
            case Drop(rest, _):
                out += 1
                ope = rest
            case Keep(rest, _):
                if index == 0:
                    return out
                index -= 1
                out += 1
                ope = rest
            case _:
                raise IndexError("variable out of range of the embedding's target")


def compose_ope(rho2: Ope, rho1: Ope) -> Ope:
    """``rho2 : Γ ⊇ Θ`` after ``rho1 : Θ ⊇ Δ``, giving ``Γ ⊇ Δ``."""
    if ope_target(rho2) != ope_source(rho1):
        raise ContextMismatch(
            f"cannot compose: middle contexts {list(ope_target(rho2))} and {list(ope_source(rho1))} differ"
        )
    inner = iter(_steps(rho1))
    out = []
    for s in _steps(rho2):
        if isinstance(s, Drop):
            out.append(s)
        else:
            out.append(next(inner))
    return _rebuild(out)


# ---------------------------------------------------------------------------
# Substitutions


@dataclass(frozen=True)
class Subst:
    """``Γ ⊢* Δ``: ``ctx`` is ``Γ``; ``entries[i]`` is a term in ``Γ`` for ``Δ[i]``."""

    ctx: Ctx
    entries: tuple[TmNode, ...] = ()

    @property
    def target(self) -> Ctx:
        return tuple(e.ty for e in self.entries)

    def snoc(self, e: Tm | TmNode) -> Subst:
        if isinstance(e, Tm):
            if e.ctx != self.ctx:
                raise ContextMismatch("snoc: term lives in a different context")
            e = e.body
        return Subst(self.ctx, self.entries + (e,))

    def __len__(self) -> int:
        return len(self.entries)


def lookup(sigma: Subst, index: int) -> Tm:
    if not 0 <= index < len(sigma.entries):
        raise IndexError(f"variable {index} out of range of a substitution of size {len(sigma.entries)}")
    return Tm(sigma.ctx, sigma.entries[len(sigma.entries) - 1 - index])


def refl_sub(ctx: Ctx) -> Subst:
    n = len(ctx)
    return Subst(tuple(ctx), tuple(TVar(n - 1 - i, t) for i, t in enumerate(ctx)))


def shift_star(tys: Sequence[Ty], sigma: Subst) -> Subst:
    """Push ``sigma`` under binders of types ``tys``: ``Γ<><tys ⊢* Δ<><tys``."""
    from .subst import ren_node

    tys = tuple(tys)
    if not tys:
        return sigma
    wk = weaken(sigma.ctx, tys)
    moved = tuple(ren_node(wk, e) for e in sigma.entries)
    m = len(tys)
    fresh = tuple(TVar(m - 1 - j, t) for j, t in enumerate(tys))
    return Subst(sigma.ctx + tys, moved + fresh)


def shift(sigma: Subst, t: Ty) -> Subst:
    return shift_star((t,), sigma)


def compose_sub_ope(sigma: Subst, rho: Ope) -> Subst:
    """``sigma : Γ ⊢* Θ`` restricted along ``rho : Θ ⊇ Δ``."""
    if sigma.target != ope_source(rho):
        raise ContextMismatch("compose_sub_ope: substitution target differs from embedding source")
    kept = tuple(e for e, s in zip(sigma.entries, _steps(rho)) if isinstance(s, Keep))
    return Subst(sigma.ctx, kept)


def compose_ope_sub(rho: Ope, sigma: Subst) -> Subst:
    """``rho : Γ ⊇ Θ`` after ``sigma : Θ ⊢* Δ``."""
    from .subst import ren_node

    if ope_target(rho) != sigma.ctx:
        raise ContextMismatch("compose_ope_sub: embedding target differs from substitution context")
    return Subst(ope_source(rho), tuple(ren_node(rho, e) for e in sigma.entries))


def compose_sub_sub(sigma2: Subst, sigma1: Subst) -> Subst:
    """``sigma2 : Γ ⊢* Θ`` after ``sigma1 : Θ ⊢* Δ``."""
    from .subst import sub_node

    if sigma2.target != sigma1.ctx:
        raise ContextMismatch("compose_sub_sub: middle contexts differ")
    return Subst(sigma2.ctx, tuple(sub_node(sigma2, e) for e in sigma1.entries))


def subst_errors(sigma: Subst) -> list[str]:
    """Entries whose free variables fall outside ``sigma.ctx`` or whose var types disagree with it."""
    out = []
    for i, e in enumerate(sigma.entries):
        out.extend(f"entry {i}: {msg}" for msg in _var_errors(sigma.ctx, e))
    return out


def _var_errors(ctx: Ctx, t: TmNode) -> list[str]:
    if isinstance(t, TVar):
        if not 0 <= t.index < len(ctx):
            return [f"variable {t.index} out of range"]
        if var_type(ctx, t.index) != t.ty:
            return [f"variable {t.index} has type {var_type(ctx, t.index)!r}, annotated {t.ty!r}"]
        return []
    out = []
    for j, c in enumerate(t.children):
        out.extend(_var_errors(t.child_ctx(ctx, j), c))
    return out
