"""Type-preserving renaming and simultaneous substitution for any description.

Both walk the term together with the node each constructor points at: the
binder shape row of child ``j`` says which of the node's binder types become
visible there, and the embedding (or substitution) is extended by exactly
those types before recursing.
"""

from __future__ import annotations

from .descriptions import visible_types
from .errors import ContextMismatch
from .scope import Ope, Subst, keep_star, ope_source, ope_target, ren_var, refl_sub, shift_star
from .terms import TCon, Tm, TmNode, TVar


def ren_node(rho: Ope, t: TmNode) -> TmNode:
    if isinstance(t, TVar):
        return TVar(ren_var(rho, t.index), t.ty)
    shape = t.node.shape
    children = tuple(
        ren_node(keep_star(visible_types(shape[j], t.ts0), rho), c) for j, c in enumerate(t.children)
    )
    return TCon(t.path, t.ts0, children, t.ty, t.node)


def sub_node(sigma: Subst, t: TmNode) -> TmNode:
    if isinstance(t, TVar):
        n = len(sigma.entries)
        if not 0 <= t.index < n:
            raise IndexError(f"variable {t.index} out of range of a substitution of size {n}")
        return sigma.entries[n - 1 - t.index]
    shape = t.node.shape
    shifted: dict[tuple, Subst] = {}
    children = []
    for j, c in enumerate(t.children):
        vis = visible_types(shape[j], t.ts0)
        if vis not in shifted:
            shifted[vis] = shift_star(vis, sigma)
        children.append(sub_node(shifted[vis], c))
    return TCon(t.path, t.ts0, tuple(children), t.ty, t.node)


def ren(rho: Ope, e: Tm) -> Tm:
    if ope_target(rho) != e.ctx:
        raise ContextMismatch(f"renaming targets {list(ope_target(rho))}, term lives in {list(e.ctx)}")
    return Tm(ope_source(rho), ren_node(rho, e.body))


def sub(sigma: Subst, e: Tm) -> Tm:
    if sigma.target != e.ctx:
        raise ContextMismatch(f"substitution targets {list(sigma.target)}, term lives in {list(e.ctx)}")
    return Tm(sigma.ctx, sub_node(sigma, e.body))


def sub1(e0: Tm, body: Tm) -> Tm:
    """Instantiate the innermost variable of ``body`` with ``e0``."""
    if body.ctx != e0.ctx + (e0.ty,):
        raise ContextMismatch("sub1: body context must be the argument's context extended by its type")
    return sub(refl_sub(e0.ctx).snoc(e0), body)
