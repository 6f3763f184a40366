"""Simply typed lambda calculus as a language pack.

Productions: ``app``, ``lam`` (Curry or Church style), ``let`` (sugared flavour
only), ``true``/``false``/``if`` (with booleans) and ``letrec`` (typecheck only).
Object types use the constructors ``base``, ``->`` and, with booleans, ``bool``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

from .descriptions import (
    BOUND,
    UNBOUND,
    Con,
    LanguageDescription,
    MetaB,
    MetaP,
    MetaR,
    MetaS,
    SgTag,
    SgTy,
    Ty,
    TySig,
    node,
    validate_description,
)
from .errors import ArityMismatch, GensynError
from .scope import Subst, shift_star
from .subst import sub, sub1
from .terms import (
    ECon,
    Expr,
    ExprNode,
    Tag,
    TCon,
    Tm,
    TmNode,
    TVar,
    TyPayload,
    descend,
    path_tags,
)

BASE = Ty("base")
BOOL = Ty("bool")


def arrow(a: Ty, b: Ty) -> Ty:
    return Ty("->", (a, b))


class Flavour(enum.Enum):
    SUGARED = "sugared"
    DESUGARED = "desugared"


class Style(enum.Enum):
    CURRY = "Curry"
    CHURCH = "Church"


def _arr(a, b) -> Con:
    return Con("->", (a, b))


APP = node(0, [[], []], [(MetaS(0), _arr(MetaS(1), MetaR()))])
LAM_CURRY = node(1, [[BOUND]], [(MetaR(), _arr(MetaB(0), MetaS(0)))])
LAM_CHURCH = SgTy("t", node(1, [[BOUND]], [(MetaP("t"), MetaB(0)), (MetaR(), _arr(MetaP("t"), MetaS(0)))]))
LET = node(1, [[UNBOUND], [BOUND]], [(MetaB(0), MetaS(0)), (MetaR(), MetaS(1))])
LETREC = node(1, [[BOUND], [BOUND]], [(MetaB(0), MetaS(0)), (MetaR(), MetaS(1))])
# Church-style letrec states its binder type, as Church-style lam does
LETREC_CHURCH = SgTy(
    "t", node(1, [[BOUND], [BOUND]], [(MetaP("t"), MetaB(0)), (MetaB(0), MetaS(0)), (MetaR(), MetaS(1))])
)
TRUE = node(0, [], [(MetaR(), Con("bool"))])
FALSE = node(0, [], [(MetaR(), Con("bool"))])
IF = node(0, [[], [], []], [(MetaS(0), Con("bool")), (MetaS(1), MetaR()), (MetaS(2), MetaR())])


@dataclass(frozen=True)
class Stlc:
    """One member of the STLC family; ``description`` builds its language."""

    flavour: Flavour = Flavour.DESUGARED
    style: Style = Style.CURRY
    bools: bool = False
    letrec: bool = False

    @property
    def name(self) -> str:
        parts = ["stlc", self.flavour.value, self.style.value]
        if self.bools:
            parts.append("bool")
        if self.letrec:
            parts.append("letrec")
        return ":".join(parts)

    def desugared(self) -> Stlc:
        return Stlc(Flavour.DESUGARED, self.style, self.bools, self.letrec)

    @property
    def description(self) -> LanguageDescription:
        return stlc_description(self.flavour, self.style, self.bools, self.letrec)

    def lam_path(self, t: Ty | None = None) -> tuple:
        if self.style is Style.CHURCH:
            if t is None:
                raise ArityMismatch("Church-style lam needs its parameter type")
            return (Tag("lam"), TyPayload(t))
        return (Tag("lam"),)


@lru_cache(maxsize=None)
def stlc_description(
    flavour: Flavour = Flavour.DESUGARED, style: Style = Style.CURRY, bools: bool = False, letrec: bool = False
) -> LanguageDescription:
    ctors = [("base", 0), ("->", 2)]
    arms = [("app", APP), ("lam", LAM_CURRY if style is Style.CURRY else LAM_CHURCH)]
    if flavour is Flavour.SUGARED:
        arms.append(("let", LET))
    if bools:
        ctors.append(("bool", 0))
        arms += [("true", TRUE), ("false", FALSE), ("if", IF)]
    if letrec:
        arms.append(("letrec", LETREC if style is Style.CURRY else LETREC_CHURCH))
    lang = LanguageDescription(
        Stlc(flavour, style, bools, letrec).name, TySig(tuple(ctors)), SgTag("STLC", tuple(arms))
    )
    diags = validate_description(lang)
    assert not diags, diags
    return lang


def parse_stlc_id(ident: str) -> Stlc:
    """``stlc:<flavour>:<style>[:bool][:letrec]``, with an optional ``builtin:`` prefix."""
    parts = ident.split(":")
    if parts and parts[0] == "builtin":
        parts = parts[1:]
    if len(parts) < 3 or parts[0] != "stlc":
        raise ValueError(f"not a builtin language id: {ident!r}")
    try:
        flavour = Flavour(parts[1].lower())
        style = {"curry": Style.CURRY, "church": Style.CHURCH}[parts[2].lower()]
    except (ValueError, KeyError):
        raise ValueError(f"bad flavour or style in {ident!r}") from None
    extras = [p.lower() for p in parts[3:]]
    unknown = set(extras) - {"bool", "letrec"}
    if unknown or len(set(extras)) != len(extras):
        raise ValueError(f"unknown or repeated options {sorted(unknown) or extras} in {ident!r}")
    return Stlc(flavour, style, "bool" in extras, "letrec" in extras)


# ---------------------------------------------------------------------------
# Closing scoped terms


def close(lang: LanguageDescription, e: Expr, binder_tys=None) -> Expr:
    """Wrap ``e`` in one ``lam`` per variable in scope.

    Church-style languages need one annotation per variable, outermost first.
    """
    lam = lang.root.arm("lam")
    church = isinstance(lam, SgTy)
    if church and (binder_tys is None or len(binder_tys) != e.scope):
        got = 0 if binder_tys is None else len(binder_tys)
        raise ArityMismatch(f"closing {e.scope} variable(s) needs {e.scope} annotation(s), got {got}")
    body = e.body
    for v in range(e.scope, 0, -1):
        path = (Tag("lam"), TyPayload(binder_tys[v - 1])) if church else (Tag("lam"),)
        nd, _ = descend(lang.root, path)
        body = ECon(path, (body,), nd)
    return Expr(0, body)


# ---------------------------------------------------------------------------
# Desugaring


def _tag(t: TmNode | ExprNode) -> str | None:
    if isinstance(t, (TCon, ECon)):
        return path_tags(t.path)[0]
    return None


def desugar(src: Stlc, e: Tm) -> Tm:
    """Replace every ``let`` by an immediately applied ``lam``; result is over ``src.desugared()``."""
    target = src.desugared()
    lang = target.description
    return Tm(e.ctx, _desugar(target, lang, e.body))


def _desugar(cfg: Stlc, lang: LanguageDescription, t: TmNode) -> TmNode:
    if isinstance(t, TVar):
        return t
    children = tuple(_desugar(cfg, lang, c) for c in t.children)
    if _tag(t) == "let":
        (u,) = t.ts0
        e0, body = children
        lam_path = cfg.lam_path(u)
        lam = TCon(lam_path, (u,), (body,), arrow(u, body.ty), descend(lang.root, lam_path)[0])
        return TCon((Tag("app"),), (), (lam, e0), t.ty, descend(lang.root, (Tag("app"),))[0])
    return TCon(t.path, t.ts0, children, t.ty, descend(lang.root, t.path)[0])


def app_sub(cfg: Stlc, sigma: Subst, f: Tm, e: Tm) -> tuple[Tm, Tm]:
    """One step of ``lam (sub (shift σ) f) · e`` and the term ``sub (σ , e) f`` it should equal.

    ``sigma`` is closed (``∅ ⊢* Δ``), ``f`` lives in ``Δ , u`` and ``e`` is a closed value of type ``u``.
    """
    u = e.ty
    lang = cfg.description
    body = sub(shift_star((u,), sigma), f)
    lam_path = cfg.lam_path(u)
    lam = TCon(lam_path, (u,), (body.body,), arrow(u, f.ty), descend(lang.root, lam_path)[0])
    redex = Tm((), TCon((Tag("app"),), (), (lam, e.body), f.ty, descend(lang.root, (Tag("app"),))[0]))
    r = step(redex)
    if r is None or r[0] != "app-lam":
        raise AssertionError(f"expected an app-lam step, got {r!r}")
    return r[1], sub(sigma.snoc(e), f)


# ---------------------------------------------------------------------------
# Call-by-value small-step reduction on closed terms


class OpenTerm(GensynError):
    pass


class Stuck(GensynError):
    """A closed well-typed non-value with no applicable rule."""


class FuelExhausted(GensynError):
    def __init__(self, trace: StepTrace):
        super().__init__(f"no value after {len(trace.steps)} step(s)")
        self.trace = trace


def is_value(e: Tm | TmNode) -> bool:
    t = e.body if isinstance(e, Tm) else e
    return _tag(t) in ("lam", "true", "false")


def _step(t: TmNode) -> tuple[str, TmNode] | None:
    tag = _tag(t)
    if tag == "app":
        f, a = t.children
        if _tag(f) == "lam" and is_value(a):
            body = Tm((f.ts0[0],), f.children[0])
            return "app-lam", sub1(Tm((), a), body).body
        if is_value(f):
            r = _step(a)
            return None if r is None else ("app-arg", _with_child(t, 1, r[1]))
        r = _step(f)
        return None if r is None else ("app-fun", _with_child(t, 0, r[1]))
    if tag == "if":
        b, thn, els = t.children
        if _tag(b) == "true":
            return "if-true", thn
        if _tag(b) == "false":
            return "if-false", els
        r = _step(b)
        return None if r is None else ("if-cond", _with_child(t, 0, r[1]))
    return None


def _with_child(t: TCon, j: int, c: TmNode) -> TCon:
    children = t.children[:j] + (c,) + t.children[j + 1 :]
    return TCon(t.path, t.ts0, children, t.ty, t.node)


def step(e: Tm) -> tuple[str, Tm] | None:
    if e.ctx:
        raise OpenTerm("step is defined on closed terms only")
    r = _step(e.body)
    if r is None:
        return None
    return r[0], Tm((), r[1])


@dataclass
class StepTrace:
    start: Tm
    steps: list[tuple[str, Tm]] = field(default_factory=list)

    @property
    def result(self) -> Tm:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def rules(self) -> list[str]:
        return [rule for rule, _ in self.steps]


def evaluate(e: Tm, fuel: int, lang: LanguageDescription | None = None) -> StepTrace:
    """Step ``e`` to a value.

    With ``lang`` given, every intermediate term is re-validated at the
    original type and a failure raises ``AssertionError``.
    """
    from .typecheck import validate_typed

    if e.ctx:
        raise OpenTerm("eval is defined on closed terms only")
    trace = StepTrace(e)
    cur = e
    while not is_value(cur):
        if len(trace.steps) >= fuel:
            raise FuelExhausted(trace)
        r = step(cur)
        if r is None:
            raise Stuck(f"no rule applies after {len(trace.steps)} step(s)")
        rule, nxt = r
        if lang is not None:
            diags = validate_typed(lang, nxt)
            if diags or nxt.ty != e.ty:
                raise AssertionError(f"preservation failed after {rule}: {diags}")
        trace.steps.append((rule, nxt))
        cur = nxt
    return trace
