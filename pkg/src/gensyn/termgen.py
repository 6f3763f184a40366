"""Deterministic generation and enumeration of well-typed terms for any description.

Both the random generator and the exhaustive enumerators work top-down from a
target type.  A production is usable at type ``t`` when its equations unify
with the node type set to ``t``; metavariables left free by that (the argument
type of an application, say) are instantiated with ground types up to a
configured depth.

Random generation consults an inhabitation table, so it only ever commits to
choices that can be completed within the remaining depth budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .descriptions import (
    LanguageDescription,
    MetaB,
    MetaP,
    MetaR,
    MetaS,
    Node,
    SgTag,
    SgTy,
    Ty,
    ground_types,
    pattern_of,
    visible_types,
)
from .errors import GensynError
from .sexpr import format_ctx
from .terms import Ctx, Tag, TCon, Tm, TmNode, TVar, TyPayload, ctx_extend, var_type
from .typecheck import UnifyError, UnifyState, to_ty, unify

MAX_ATTEMPTS = 64
ENUM_TY_DEPTH = 2


class Exhausted(GensynError):
    """No term of the requested type exists within the bounds."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_depth: int = 4
    max_ctx: int = 3
    ty_depth: int = 2
    count: int = 100
    exhaustive: bool = False

    def __post_init__(self):
        for name in ("max_depth", "max_ctx", "ty_depth", "count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Production:
    """A route to a node: tags, and the ``sg-ty`` binder names to fill, in path order."""

    steps: tuple  # of Tag or str (an sg-ty binder name)
    node: Node

    def path(self, payloads: dict[str, Ty]) -> tuple:
        return tuple(s if isinstance(s, Tag) else TyPayload(payloads[s]) for s in self.steps)


def productions_of(lang: LanguageDescription) -> tuple[Production, ...]:
    out = []

    def go(d, steps):
        match d:
            case SgTag(_, arms):
                for tag, sub in arms:
                    go(sub, steps + (Tag(tag),))
            case SgTy(binder, rest):
                go(rest, steps + (binder,))
            case Node():
                out.append(Production(steps, d))

    go(lang.root, ())
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """A production fully instantiated at one node type."""

    path: tuple
    ts0: tuple[Ty, ...]
    child_tys: tuple[Ty, ...]
    node: Node

    def child_ctx(self, ctx: Ctx, j: int) -> Ctx:
        return ctx_extend(ctx, visible_types(self.node.shape[j], self.ts0))


class TypeSpace:
    """Per-(language, type depth) caches shared by the generators."""

    def __init__(self, lang: LanguageDescription, ty_depth: int):
        self.lang = lang
        self.ty_depth = ty_depth
        self.types = tuple(ground_types(lang.tysig, ty_depth))
        self.productions = productions_of(lang)
        self._instances: dict[tuple[int, Ty], tuple[Instance, ...]] = {}
        self._inhabited: dict = {}
        self._sized: dict = {}

    # -- solving productions ------------------------------------------------

    def instances(self, p_index: int, t: Ty) -> tuple[Instance, ...]:
        key = (p_index, t)
        if key not in self._instances:
            self._instances[key] = tuple(self._solve(self.productions[p_index], t))
        return self._instances[key]

    def _solve(self, prod: Production, t: Ty) -> Iterator[Instance]:
        nd = prod.node
        try:
            st = unify(MetaR(), pattern_of(t), UnifyState())
            for lhs, rhs in nd.constraint:
                st = unify(lhs, rhs, st)
        except UnifyError:
            return
        binders = [s for s in prod.steps if isinstance(s, str)]
        metas = [MetaP(b) for b in binders] + [MetaB(i) for i in range(nd.n)] + [MetaS(j) for j in range(nd.k)]

        def go(st: UnifyState, i: int) -> Iterator[Instance]:
            if i == len(metas):
                payloads = {b: to_ty(st.resolve(MetaP(b))) for b in binders}
                yield Instance(
                    prod.path(payloads),
                    tuple(to_ty(st.resolve(MetaB(b))) for b in range(nd.n)),
                    tuple(to_ty(st.resolve(MetaS(j))) for j in range(nd.k)),
                    nd,
                )
                return
            m = metas[i]
            if st.is_ground(m):
                yield from go(st, i + 1)
                return
            for ty in self.types:
                try:
                    nxt = unify(m, pattern_of(ty), st)
                except UnifyError:
                    continue
                yield from go(nxt, i + 1)

        yield from go(st, 0)

    def all_instances(self, t: Ty) -> list[Instance]:
        return [inst for i in range(len(self.productions)) for inst in self.instances(i, t)]

    # -- inhabitation --------------------------------------------------------

    def inhabited(self, ctx: Ctx, t: Ty, depth: int) -> bool:
        """Whether some term of type ``t`` in ``ctx`` has at most ``depth`` constructor layers."""
        key = (frozenset(ctx), t, depth)
        hit = self._inhabited.get(key)
        if hit is not None:
            return hit
        self._inhabited[key] = False  # guards against cycles through equal keys
        ok = t in ctx or (depth > 0 and any(self.viable(ctx, inst, depth) for inst in self.all_instances(t)))
        self._inhabited[key] = ok
        return ok

    def viable(self, ctx: Ctx, inst: Instance, depth: int) -> bool:
        return depth > 0 and all(
            self.inhabited(inst.child_ctx(ctx, j), s, depth - 1) for j, s in enumerate(inst.child_tys)
        )

    # -- exhaustive enumeration by exact node count ---------------------------

    def sized(self, ctx: Ctx, t: Ty, size: int) -> tuple[TmNode, ...]:
        key = (ctx, t, size)
        hit = self._sized.get(key)
        if hit is not None:
            return hit
        out: list[TmNode] = []
        if size == 1:
            out += [TVar(i, t) for i in range(len(ctx)) if var_type(ctx, i) == t]
        for inst in self.all_instances(t):
            k = len(inst.child_tys)
            if k == 0:
                if size == 1:
                    out.append(TCon(inst.path, inst.ts0, (), t, inst.node))
                continue
            for split in _compositions(size - 1, k):
                pools = [self.sized(inst.child_ctx(ctx, j), s, n) for j, (s, n) in enumerate(zip(inst.child_tys, split))]
                if not all(pools):
                    continue
                for children in product(*pools):
                    out.append(TCon(inst.path, inst.ts0, children, t, inst.node))
        result = tuple(out)
        self._sized[key] = result
        return result

    # -- exhaustive enumeration by depth ---------------------------------------

    def by_depth(self, ctx: Ctx, t: Ty, depth: int) -> Iterator[TmNode]:
        for i in range(len(ctx)):
            if var_type(ctx, i) == t:
                yield TVar(i, t)
        if depth <= 0:
            return
        for inst in self.all_instances(t):
            pools = [list(self.by_depth(inst.child_ctx(ctx, j), s, depth - 1)) for j, s in enumerate(inst.child_tys)]
            for children in product(*pools):
                yield TCon(inst.path, inst.ts0, tuple(children), t, inst.node)

    # -- random generation ---------------------------------------------------

    def random_term(self, rng: random.Random, ctx: Ctx, t: Ty, depth: int) -> TmNode:
        if not self.inhabited(ctx, t, depth):
            where = f"context {format_ctx(ctx)}" if ctx else "the empty context"
            raise Exhausted(f"no term of type {t!r} in {where} within depth {depth}")
        return self._random(rng, ctx, t, depth)

    def _random(self, rng: random.Random, ctx: Ctx, t: Ty, depth: int) -> TmNode:
        for _ in range(MAX_ATTEMPTS):
            vars_ = [i for i in range(len(ctx)) if var_type(ctx, i) == t]
            prods = [
                i
                for i in range(len(self.productions))
                if depth > 0 and any(self.viable(ctx, inst, depth) for inst in self.instances(i, t))
            ]
            options = [("var", i) for i in vars_] + [("con", i) for i in prods]
            if not options:
                break
            kind, which = rng.choice(options)
            if kind == "var":
                return TVar(which, t)
            insts = [inst for inst in self.instances(which, t) if self.viable(ctx, inst, depth)]
            if not insts:
                continue
            inst = rng.choice(insts)
            children = tuple(
                self._random(rng, inst.child_ctx(ctx, j), s, depth - 1) for j, s in enumerate(inst.child_tys)
            )
            return TCon(inst.path, inst.ts0, children, t, inst.node)
        raise Exhausted(f"gave up on type {t!r} after {MAX_ATTEMPTS} attempts")

    def random_ctx(self, rng: random.Random, max_ctx: int) -> Ctx:
        return tuple(rng.choice(self.types) for _ in range(rng.randint(0, max_ctx)))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@lru_cache(maxsize=64)
def type_space(lang: LanguageDescription, ty_depth: int) -> TypeSpace:
    return TypeSpace(lang, ty_depth)


# ---------------------------------------------------------------------------
# Public entry points


def gen_typed(lang: LanguageDescription, ctx: Sequence[Ty], t: Ty, cfg: GenConfig) -> Iterator[Tm]:
    """Terms of type ``t`` in ``ctx`` with at most ``cfg.max_depth`` constructor layers.

    Random (``cfg.count`` draws seeded by ``cfg.seed``) unless ``cfg.exhaustive``,
    in which case every such term is yielded once in a fixed order.
    """
    ctx = tuple(ctx)
    space = type_space(lang, cfg.ty_depth)
    if cfg.exhaustive:
        found = False
        for body in space.by_depth(ctx, t, cfg.max_depth):
            found = True
            yield Tm(ctx, body)
        if not found:
            raise Exhausted(f"no term of type {t!r} within depth {cfg.max_depth}")
        return
    rng = random.Random(cfg.seed)
    for _ in range(cfg.count):
        yield Tm(ctx, space.random_term(rng, ctx, t, cfg.max_depth))


def gen_any(lang: LanguageDescription, cfg: GenConfig) -> Iterator[Tm]:
    """Random terms at random contexts (size <= ``cfg.max_ctx``) and random inhabited types."""
    space = type_space(lang, cfg.ty_depth)
    rng = random.Random(cfg.seed)
    produced = 0
    while produced < cfg.count:
        ctx = space.random_ctx(rng, cfg.max_ctx)
        candidates = [t for t in space.types if space.inhabited(ctx, t, cfg.max_depth)]
        if not candidates:
            continue
        t = rng.choice(candidates)
        yield Tm(ctx, space.random_term(rng, ctx, t, cfg.max_depth))
        produced += 1


def enum_closed(lang: LanguageDescription, max_nodes: int, ty_depth: int = ENUM_TY_DEPTH) -> Iterator[tuple[Ty, Tm]]:
    """Every closed well-typed term with at most ``max_nodes`` nodes, smallest first.

    Result types and free metavariables range over types of depth <= ``ty_depth``.
    """
    space = type_space(lang, ty_depth)
    for size in range(1, max_nodes + 1):
        for t in space.types:
            for body in space.sized((), t, size):
                yield t, Tm((), body)
