"""Executable renaming/substitution laws over generated terms.

Each case draws a term ``e`` in a random context ``Δ`` plus two random
embeddings ``ρ1 : Θ ⊇ Δ`` and ``ρ2 : Γ ⊇ Θ`` and two random substitutions
``σ1 : Θ ⊢* Δ`` and ``σ2 : Γ ⊢* Θ``; every law is then checked by structural
equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .descriptions import LanguageDescription, Ty
from .scope import (
    DONE,
    Drop,
    Keep,
    Ope,
    Subst,
    compose_ope,
    compose_ope_sub,
    compose_sub_ope,
    compose_sub_sub,
    lookup,
    ope_source,
    ope_target,
    refl_ope,
    refl_sub,
    ren_var,
    shift_star,
)
from .sexpr import format_ctx, format_tm
from .subst import ren, sub
from .termgen import GenConfig, TypeSpace, type_space
from .terms import Ctx, Tm, TVar
from .typecheck import validate_typed

ENTRY_DEPTH = 3
MAX_EXTRA = 2


@dataclass(frozen=True)
class LawCase:
    e: Tm
    rho1: Ope
    rho2: Ope
    sigma1: Subst
    sigma2: Subst


def random_ope(rng: random.Random, space: TypeSpace, target: Ctx, extra: int) -> Ope:
    """An embedding into ``target`` from ``target`` with ``extra`` random types interleaved."""
    steps = [("keep", t) for t in target]
    for _ in range(extra):
        steps.insert(rng.randint(0, len(steps)), ("drop", rng.choice(space.types)))
    ope: Ope = DONE
    for kind, t in steps:
        ope = Keep(ope, t) if kind == "keep" else Drop(ope, t)
    return ope


def random_subst(rng: random.Random, space: TypeSpace, src: Ctx, target: Ctx, depth: int) -> Subst:
    return Subst(src, tuple(space.random_term(rng, src, t, depth) for t in target))


def make_case(rng: random.Random, space: TypeSpace, e: Tm) -> LawCase:
    rho1 = random_ope(rng, space, e.ctx, rng.randint(0, MAX_EXTRA))
    theta = ope_source(rho1)
    rho2 = random_ope(rng, space, theta, rng.randint(0, MAX_EXTRA))
    gamma = ope_source(rho2)
    sigma1 = random_subst(rng, space, theta, e.ctx, ENTRY_DEPTH)
    sigma2 = random_subst(rng, space, gamma, theta, ENTRY_DEPTH)
    return LawCase(e, rho1, rho2, sigma1, sigma2)


def generate_cases(lang: LanguageDescription, cfg: GenConfig) -> list[LawCase]:
    space = type_space(lang, cfg.ty_depth)
    rng = random.Random(cfg.seed)
    cases = []
    while len(cases) < cfg.count:
        ctx = space.random_ctx(rng, cfg.max_ctx)
        candidates = [t for t in space.types if space.inhabited(ctx, t, cfg.max_depth)]
        if not candidates:
            continue
        t = rng.choice(candidates)
        e = Tm(ctx, space.random_term(rng, ctx, t, cfg.max_depth))
        cases.append(make_case(rng, space, e))
    return cases


# Each law returns (lhs, rhs); the law holds when they are equal.
LAWS: dict[str, Callable[[LawCase], tuple[Tm, Tm]]] = {
    "ren-refl": lambda c: (ren(refl_ope(c.e.ctx), c.e), c.e),
    "sub-refl": lambda c: (sub(refl_sub(c.e.ctx), c.e), c.e),
    "ren-ren": lambda c: (ren(c.rho2, ren(c.rho1, c.e)), ren(compose_ope(c.rho2, c.rho1), c.e)),
    "sub-ren": lambda c: (sub(c.sigma2, ren(c.rho1, c.e)), sub(compose_sub_ope(c.sigma2, c.rho1), c.e)),
    "ren-sub": lambda c: (ren(c.rho2, sub(c.sigma1, c.e)), sub(compose_ope_sub(c.rho2, c.sigma1), c.e)),
    "sub-sub": lambda c: (sub(c.sigma2, sub(c.sigma1, c.e)), sub(compose_sub_sub(c.sigma2, c.sigma1), c.e)),
}


@dataclass
class LawResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        text = f"{self.name}: {status} ({self.cases} cases, {self.failures} failures)"
        if self.counterexample:
            text += f"\n  counterexample: {self.counterexample}"
        return text


@dataclass
class LawReport:
    results: list[LawResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]


def _describe(c: LawCase) -> str:
    return f"[{format_ctx(c.e.ctx)}] {format_tm(c.e)} : {c.e.ty!r}"


def run_laws(lang: LanguageDescription, cases: list[LawCase], preservation: bool = True) -> LawReport:
    """Check every law on every case; with ``preservation`` also validate all ren/sub outputs."""
    report = LawReport([LawResult(name) for name in LAWS])
    pres = LawResult("preservation")
    for c in cases:
        for res, law in zip(report.results, LAWS.values()):
            res.cases += 1
            try:
                lhs, rhs = law(c)
                ok = lhs == rhs
            except Exception as exc:  # a crash is a failure of the law under test
                lhs = rhs = None
                ok = False
                err = f"{type(exc).__name__}: {exc}"
            else:
                err = None
            if not ok:
                res.failures += 1
                if res.counterexample is None:
                    res.counterexample = _describe(c) + (f" raised {err}" if err else "")
            if preservation and lhs is not None:
                pres.cases += 1
                for out in (lhs, rhs):
                    if validate_typed(lang, out) or out.ty != c.e.ty:
                        pres.failures += 1
                        if pres.counterexample is None:
                            pres.counterexample = f"{res.name} on {_describe(c)}"
                        break
    if preservation:
        report.results.append(pres)
    return report


# ---------------------------------------------------------------------------
# Exhaustive action-level laws on small contexts


def all_contexts(types: tuple[Ty, ...], max_size: int) -> list[Ctx]:
    return [ctx for n in range(max_size + 1) for ctx in product(types, repeat=n)]


def opes_from(src: Ctx) -> list[Ope]:
    """Every embedding whose source is ``src``."""
    out: list[Ope] = [DONE]
    for t in src:
        out = [step(o, t) for o in out for step in (Drop, Keep)]
    return out


def small_substs(space: TypeSpace, src: Ctx, target: Ctx, entry_nodes: int) -> list[Subst]:
    """Every substitution ``src ⊢* target`` whose entries have at most ``entry_nodes`` nodes."""
    pools = []
    for t in target:
        pool = [body for size in range(1, entry_nodes + 1) for body in space.sized(src, t, size)]
        if not pool:
            return []
        pools.append(pool)
    return [Subst(src, tuple(entries)) for entries in product(*pools)]


@dataclass
class ExhaustiveResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def exhaustive_laws(
    lang: LanguageDescription, max_ctx: int = 3, ty_depth: int = 2, entry_nodes: int = 2
) -> list[ExhaustiveResult]:
    space = type_space(lang, ty_depth)
    ctxs = all_contexts(space.types, max_ctx)
    ope_comp = ExhaustiveResult("ren_var/compose_ope")
    monotone = ExhaustiveResult("ren_var order-preserving")
    sub_ope = ExhaustiveResult("lookup/compose_sub_ope")
    ope_sub = ExhaustiveResult("lookup/compose_ope_sub")
    sub_sub = ExhaustiveResult("lookup/compose_sub_sub")
    shift_comm = ExhaustiveResult("shift_star/compose_sub_sub")
    refl = ExhaustiveResult("refl_sub/shift_star")

    for gamma in ctxs:
        for rho2 in opes_from(gamma):
            theta = ope_target(rho2)
            for rho1 in opes_from(theta):
                delta = ope_target(rho1)
                comp = compose_ope(rho2, rho1)
                for v in range(len(delta)):
                    ope_comp.checked += 1
                    if ren_var(comp, v) != ren_var(rho2, ren_var(rho1, v)):
                        ope_comp.failures.append((rho2, rho1, v))
            for v in range(len(theta)):
                for w in range(v + 1, len(theta)):
                    monotone.checked += 1
                    if not ren_var(rho2, v) < ren_var(rho2, w):
                        monotone.failures.append((rho2, v, w))

    substs_cache: dict = {}

    def substs(src, target):
        key = (src, target)
        if key not in substs_cache:
            substs_cache[key] = small_substs(space, src, target, entry_nodes)
        return substs_cache[key]

    # shift_star commutation multiplies the work by the number of type lists;
    # variable-only entries keep it quick.
    def var_substs(src, target):
        return small_substs(space, src, target, 1)

    for theta in ctxs:
        for rho in opes_from(theta):
            delta = ope_target(rho)
            for gamma in ctxs:
                for sigma in substs(gamma, theta):
                    comp = compose_sub_ope(sigma, rho)
                    for v in range(len(delta)):
                        sub_ope.checked += 1
                        if lookup(comp, v) != lookup(sigma, ren_var(rho, v)):
                            sub_ope.failures.append((sigma, rho, v))
    for theta in ctxs:
        for delta in ctxs:
            for sigma in substs(theta, delta):
                for rho in _opes_into(theta, ctxs):
                    comp = compose_ope_sub(rho, sigma)
                    for v in range(len(delta)):
                        ope_sub.checked += 1
                        if lookup(comp, v) != ren(rho, lookup(sigma, v)):
                            ope_sub.failures.append((rho, sigma, v))
    for delta in ctxs:
        for theta in ctxs:
            for sigma1 in substs(theta, delta):
                for gamma in ctxs:
                    for sigma2 in substs(gamma, theta):
                        comp = compose_sub_sub(sigma2, sigma1)
                        for v in range(len(delta)):
                            sub_sub.checked += 1
                            if lookup(comp, v) != sub(sigma2, lookup(sigma1, v)):
                                sub_sub.failures.append((sigma2, sigma1, v))
    for delta in ctxs:
        for theta in ctxs:
            for sigma1 in var_substs(theta, delta):
                for gamma in ctxs:
                    for sigma2 in var_substs(gamma, theta):
                        for ts in _small_tys(space.types):
                            shift_comm.checked += 1
                            lhs = compose_sub_sub(shift_star(ts, sigma2), shift_star(ts, sigma1))
                            if lhs != shift_star(ts, compose_sub_sub(sigma2, sigma1)):
                                shift_comm.failures.append((ts, sigma2, sigma1))
    for ctx in ctxs:
        refl.checked += 1
        if not refl_lookup_ok(ctx):
            refl.failures.append(ctx)
        for ts in _small_tys(space.types):
            refl.checked += 1
            if shift_star(ts, refl_sub(ctx)) != refl_sub(ctx + ts):
                refl.failures.append((ctx, ts))
    return [ope_comp, monotone, sub_ope, ope_sub, sub_sub, shift_comm, refl]


def _small_tys(types: tuple[Ty, ...]) -> list[tuple[Ty, ...]]:
    return [ts for n in (1, 2) for ts in product(types, repeat=n)]


def _opes_into(target: Ctx, ctxs: list[Ctx]) -> list[Ope]:
    return [o for src in ctxs if len(src) >= len(target) for o in opes_from(src) if ope_target(o) == target]


def refl_lookup_ok(ctx: Ctx) -> bool:
    sigma = refl_sub(ctx)
    return all(lookup(sigma, v) == Tm(ctx, TVar(v, ctx[len(ctx) - 1 - v])) for v in range(len(ctx)))
