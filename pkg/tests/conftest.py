import re
from dataclasses import dataclass
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gensyn.descriptions import Ty
from gensyn.sexpr import parse_expr, parse_tm
from gensyn.stlc import BASE, BOOL, Flavour, Style, arrow, stlc_description
from gensyn.terms import EVar, path_tags

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CURRY = stlc_description(Flavour.DESUGARED, Style.CURRY)
CHURCH = stlc_description(Flavour.DESUGARED, Style.CHURCH)
CURRY_BOOL = stlc_description(Flavour.DESUGARED, Style.CURRY, True)
CHURCH_BOOL = stlc_description(Flavour.DESUGARED, Style.CHURCH, True)
SUGARED_CURRY = stlc_description(Flavour.SUGARED, Style.CURRY, True)
SUGARED_CHURCH = stlc_description(Flavour.SUGARED, Style.CHURCH, True)
LETREC = stlc_description(Flavour.DESUGARED, Style.CURRY, False, True)
CHURCH_LETREC = stlc_description(Flavour.DESUGARED, Style.CHURCH, True, True)

BB = arrow(BASE, BASE)


def tm(lang, text, ctx=()):
    return parse_tm(lang, tuple(ctx), text)


def ex(lang, text, scope=0):
    return parse_expr(lang, text, scope)


@pytest.fixture
def curry():
    return CURRY


@pytest.fixture
def curry_bool():
    return CURRY_BOOL


__all__ = ["BASE", "BOOL", "BB", "Ty", "arrow"]


def generated(lang, seed, count=1, depth=4, max_ctx=3):
    """Deterministic random well-typed terms from the package generator."""
    from gensyn.termgen import GenConfig, gen_any

    return list(gen_any(lang, GenConfig(seed=seed, max_depth=depth, max_ctx=max_ctx, count=count)))


def name_expr(e, names, ctx_names):
    """Turn an Expr back into a Form, drawing binder names from ``names``."""
    from gensyn.descriptions import BOUND
    from gensyn.terms import EVar, FCon, FVar

    supply = iter(names)

    def go(t, env):
        if isinstance(t, EVar):
            return FVar(env[len(env) - 1 - t.index])
        binders = tuple(next(supply) for _ in range(t.node.n))
        kids = []
        for row, c in zip(t.node.shape, t.children):
            kids.append(go(c, env + [b for flag, b in zip(row, binders) if flag is BOUND]))
        return FCon(t.path, binders, tuple(kids))

    return go(e.body, list(ctx_names))


# ---------------------------------------------------------------------------
# A special-purpose STLC+bool enumerator, written directly from the typing
# rules.  Terms come out in the typed s-expression syntax.

def _fmt(t):
    if t == BASE:
        return "base"
    if t == BOOL:
        return "bool"
    return f"(-> {_fmt(t.args[0])} {_fmt(t.args[1])})"


SMALL_TYPES = [BASE, BOOL] + [arrow(a, b) for a in (BASE, BOOL) for b in (BASE, BOOL)]


def hand_enum(ctx, ty, size, church=False, _memo=None):
    """Every typed STLC+bool term of exactly ``size`` nodes with type ``ty`` in ``ctx``."""
    memo = {} if _memo is None else _memo
    key = (ctx, ty, size)
    if key in memo:
        return memo[key]
    out = []
    if size == 1:
        out += [f"(var {i})" for i in range(len(ctx)) if ctx[len(ctx) - 1 - i] == ty]
        if ty == BOOL:
            out += ["true", "false"]
    if ty.ctor == "->" and size >= 2:
        a, b = ty.args
        head = f"lam {{{_fmt(a)}}} [{_fmt(a)}]" if church else f"lam [{_fmt(a)}]"
        out += [f"({head} {body})" for body in hand_enum(ctx + (a,), b, size - 1, church, memo)]
    if size >= 3:
        for s in SMALL_TYPES:
            for n in range(1, size - 1):
                for f in hand_enum(ctx, arrow(s, ty), n, church, memo):
                    for x in hand_enum(ctx, s, size - 1 - n, church, memo):
                        out.append(f"(app {f} {x})")
    if size >= 4:
        for n1 in range(1, size - 2):
            for n2 in range(1, size - 1 - n1):
                n3 = size - 1 - n1 - n2
                for c in hand_enum(ctx, BOOL, n1, church, memo):
                    for t in hand_enum(ctx, ty, n2, church, memo):
                        for e in hand_enum(ctx, ty, n3, church, memo):
                            out.append(f"(if {c} {t} {e})")
    memo[key] = out
    return out


# ---------------------------------------------------------------------------
# Independent reference semantics: big-step with environments and native let


@dataclass(frozen=True)
class Closure:
    body: object
    env: tuple


def big_step(t, env=()):
    if isinstance(t, EVar):
        return env[len(env) - 1 - t.index]
    tag = path_tags(t.path)[0]
    if tag in ("true", "false"):
        return tag == "true"
    if tag == "lam":
        return Closure(t.children[0], env)
    if tag == "app":
        f = big_step(t.children[0], env)
        a = big_step(t.children[1], env)
        return big_step(f.body, f.env + (a,))
    if tag == "let":
        v = big_step(t.children[0], env)
        return big_step(t.children[1], env + (v,))
    if tag == "if":
        return big_step(t.children[1] if big_step(t.children[0], env) else t.children[2], env)
    raise AssertionError(tag)


def app_sub_case(style, seed):
    """A random (language, closed σ, f in Δ,u, closed value e : u) for the app-sub law."""
    import random

    from gensyn.scope import Subst
    from gensyn.stlc import Stlc, evaluate
    from gensyn.termgen import type_space
    from gensyn.terms import Tm

    cfg = Stlc(Flavour.DESUGARED, style, bools=True)
    space = type_space(cfg.description, 2)
    rng = random.Random(seed)
    closed = [t for t in space.types if space.inhabited((), t, 3)]
    delta = tuple(rng.choice(closed) for _ in range(rng.randint(0, 3)))
    sigma = Subst((), tuple(space.random_term(rng, (), t, 3) for t in delta))
    u = rng.choice(closed)
    e = evaluate(Tm((), space.random_term(rng, (), u, 3)), 10_000).result
    ctx = delta + (u,)
    t = rng.choice([t for t in space.types if space.inhabited(ctx, t, 4)])
    return cfg, sigma, Tm(ctx, space.random_term(rng, ctx, t, 4)), e


# Generic modules must not name anything from a language pack.
GENERIC_MODULES = ["subst", "scope", "typecheck"]
PACK_WORDS = ["app", "lam", "let", "letrec", "true", "false", "if", "bool", "base", "->"]
SRC = Path(__file__).resolve().parent.parent / "src" / "gensyn"


def pack_references(module: str) -> list[str]:
    text = (SRC / f"{module}.py").read_text()
    found = [w for w in PACK_WORDS for q in "\"'" if f"{q}{w}{q}" in text]
    found += re.findall(r"stlc|curry|church", text, re.IGNORECASE)
    return found


# Acceptance lines collected during the run and repeated in the terminal summary.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
