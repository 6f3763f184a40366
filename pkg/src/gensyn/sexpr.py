"""S-expression syntax for types and for named, scoped and typed terms.

Types:      ``base``, ``(-> base (-> bool bool))``
Form:       ``(var x)``, ``(lam [x] (var x))``, ``(lam {(-> base base)} [f] (var f))``
Expr:       ``(var 0)``, ``(lam (var 0))``, ``(lam {base} (var 0))``
Tm:         as Expr, with the node's binder types in brackets: ``(lam [base] (var 0))``

A constructor is written ``(<tags> {payload}* [binders]? child*)`` where
``<tags>`` joins the tag choices on the path with ``.`` (``con`` when the path
has none), payloads fill ``sg-ty`` steps in order and the bracket group is
present exactly when the node binds at least one variable.  A constructor with
nothing after its head prints as a bare atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

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
    format_ty,
    pattern_of,
    visible_types,
)
from .errors import GensynError
from .typecheck import UnifyError, UnifyState, to_ty, unify
from .terms import (
    Ctx,
    ECon,
    EVar,
    Expr,
    ExprNode,
    FCon,
    Form,
    FVar,
    Tag,
    TCon,
    Tm,
    TmNode,
    TVar,
    TyPayload,
    ctx_extend,
    descend,
    path_payloads,
    path_tags,
    validate_scoped,
    var_type,
)


class ParseError(GensynError):
    pass


# ---------------------------------------------------------------------------
# Reader

_TOKEN = re.compile(r"\s+|;[^\n]*|([()\[\]{}])|([^\s()\[\]{};]+)")
_CLOSE = {"(": ")", "[": "]", "{": "}"}


@dataclass(frozen=True)
class Group:
    kind: str  # "(", "[" or "{"
    items: tuple


def _tokens(text: str) -> Iterator[str]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        tok = m.group(1) or m.group(2)
        if tok:
            yield tok


def read(text: str):
    """Read exactly one datum: an atom (``str``) or a :class:`Group`."""
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty input")
    datum, pos = _read(toks, 0)
    if pos != len(toks):
        raise ParseError(f"trailing input after first datum: {' '.join(toks[pos:pos + 5])}")
    return datum


def _read(toks: list[str], pos: int):
    tok = toks[pos]
    if tok in _CLOSE:
        items = []
        pos += 1
        while True:
            if pos >= len(toks):
                raise ParseError(f"unclosed {tok!r}")
            if toks[pos] == _CLOSE[tok]:
                return Group(tok, tuple(items)), pos + 1
            if toks[pos] in (")", "]", "}"):
                raise ParseError(f"expected {_CLOSE[tok]!r}, found {toks[pos]!r}")
            item, pos = _read(toks, pos)
            items.append(item)
    if tok in (")", "]", "}"):
        raise ParseError(f"unexpected {tok!r}")
    return tok, pos + 1


# ---------------------------------------------------------------------------
# Types


def ty_from_datum(d) -> Ty:
    if isinstance(d, str):
        return Ty(d)
    if d.kind != "(" or not d.items or not isinstance(d.items[0], str):
        raise ParseError("a type is an atom or (ctor arg*)")
    return Ty(d.items[0], tuple(ty_from_datum(a) for a in d.items[1:]))


def parse_ty(text: str) -> Ty:
    return ty_from_datum(read(text))


def parse_ctx(text: str) -> Ctx:
    """Comma-separated types, leftmost first; empty text is the empty context."""
    if not text.strip():
        return ()
    return tuple(parse_ty(part) for part in _split_commas(text))


def _split_commas(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if any(not p.strip() for p in parts):
        raise ParseError(f"empty entry in context list {text!r}")
    return parts


def format_ctx(ctx: Ctx) -> str:
    return ", ".join(format_ty(t) for t in ctx)


# ---------------------------------------------------------------------------
# Constructor heads


def _head(path) -> str:
    tags = path_tags(path)
    return ".".join(tags) if tags else "con"


def _build_path(lang: LanguageDescription, head: str, payloads: list[Ty]) -> tuple:
    tags = [] if head == "con" else head.split(".")
    path = []
    d = lang.root
    ti = pi = 0
    while not isinstance(d, Node):
        if isinstance(d, SgTag):
            if ti >= len(tags):
                raise ParseError(f"constructor {head!r} names too few tags")
            sub = d.arm(tags[ti])
            if sub is None:
                raise ParseError(f"unknown constructor {tags[ti]!r}; expected one of {list(d.tags)}")
            path.append(Tag(tags[ti]))
            ti += 1
            d = sub
        elif isinstance(d, SgTy):
            if pi >= len(payloads):
                raise ParseError(f"constructor {head!r} needs a type payload {{...}} for {d.binder!r}")
            path.append(TyPayload(payloads[pi]))
            pi += 1
            d = d.rest
        else:
            raise ParseError("malformed description")
    if ti != len(tags):
        raise ParseError(f"constructor {head!r} names too many tags")
    if pi != len(payloads):
        raise ParseError(f"constructor {head!r} takes {pi} type payload(s), got {len(payloads)}")
    return tuple(path)


def _split_con(d) -> tuple[str, list[Ty], list | None, list]:
    """Split a constructor datum into head, payload types, bracket items and children."""
    if isinstance(d, str):
        return d, [], None, []
    if d.kind != "(" or not d.items or not isinstance(d.items[0], str):
        raise ParseError("a term is an atom or (head ...)")
    head, rest = d.items[0], list(d.items[1:])
    payloads = []
    while rest and isinstance(rest[0], Group) and rest[0].kind == "{":
        group = rest.pop(0)
        if len(group.items) != 1:
            raise ParseError("a payload group holds exactly one type")
        payloads.append(ty_from_datum(group.items[0]))
    brackets = None
    if rest and isinstance(rest[0], Group) and rest[0].kind == "[":
        brackets = list(rest.pop(0).items)
    for c in rest:
        if isinstance(c, Group) and c.kind != "(":
            raise ParseError(f"unexpected {c.kind!r} group among children of {head!r}")
    return head, payloads, brackets, rest


def _is_var(d) -> bool:
    return isinstance(d, Group) and d.kind == "(" and d.items[:1] == ("var",)


def _var_arg(d) -> str:
    if len(d.items) != 2 or not isinstance(d.items[1], str):
        raise ParseError("a variable is written (var <name-or-index>)")
    return d.items[1]


def _format_con(path, brackets: list[str] | None, children: list[str]) -> str:
    parts = [_head(path)]
    parts += ["{" + format_ty(t) + "}" for t in path_payloads(path)]
    if brackets is not None:
        parts.append("[" + " ".join(brackets) + "]")
    parts += children
    return parts[0] if len(parts) == 1 else "(" + " ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Form


def form_from_datum(lang: LanguageDescription, d) -> Form:
    if _is_var(d):
        return FVar(_var_arg(d))
    head, payloads, brackets, rest = _split_con(d)
    path = _build_path(lang, head, payloads)
    nd, _ = descend(lang.root, path)
    names = brackets or []
    if not all(isinstance(n, str) for n in names):
        raise ParseError("binder names must be atoms")
    if len(names) != nd.n:
        raise ParseError(f"{head!r} binds {nd.n} name(s), got {len(names)}")
    if len(rest) != nd.k:
        raise ParseError(f"{head!r} takes {nd.k} subterm(s), got {len(rest)}")
    return FCon(path, tuple(names), tuple(form_from_datum(lang, c) for c in rest))


def parse_form(lang: LanguageDescription, text: str) -> Form:
    return form_from_datum(lang, read(text))


def format_form(f: Form) -> str:
    if isinstance(f, FVar):
        return f"(var {f.name})"
    brackets = list(f.binders) if f.binders else None
    return _format_con(f.path, brackets, [format_form(c) for c in f.children])


# ---------------------------------------------------------------------------
# Expr


def expr_from_datum(lang: LanguageDescription, d) -> ExprNode:
    if _is_var(d):
        arg = _var_arg(d)
        if not arg.isdigit():
            raise ParseError(f"scoped variables are de Bruijn indices, got {arg!r}")
        return EVar(int(arg))
    head, payloads, brackets, rest = _split_con(d)
    if brackets is not None:
        raise ParseError(f"unexpected binder group in scoped term at {head!r}")
    path = _build_path(lang, head, payloads)
    nd, _ = descend(lang.root, path)
    if len(rest) != nd.k:
        raise ParseError(f"{head!r} takes {nd.k} subterm(s), got {len(rest)}")
    return ECon(path, tuple(expr_from_datum(lang, c) for c in rest), nd)


def parse_expr(lang: LanguageDescription, text: str, scope: int = 0) -> Expr:
    e = Expr(scope, expr_from_datum(lang, read(text)))
    diags = validate_scoped(lang, e)
    if diags:
        raise ParseError(str(diags[0]))
    return e


def format_expr(e: Expr | ExprNode) -> str:
    t = e.body if isinstance(e, Expr) else e
    if isinstance(t, EVar):
        return f"(var {t.index})"
    return _format_con(t.path, None, [format_expr(c) for c in t.children])


def looks_named(text: str) -> bool:
    """Whether ``text`` uses binder names or named variables (Form syntax)."""
    d = read(text)

    def go(x) -> bool:
        if isinstance(x, str):
            return False
        if _is_var(x):
            return not _var_arg(x).isdigit()
        if x.kind == "[":
            return True
        return any(go(i) for i in x.items)

    return go(d)


# ---------------------------------------------------------------------------
# Tm


def format_tm(e: Tm | TmNode) -> str:
    t = e.body if isinstance(e, Tm) else e
    if isinstance(t, TVar):
        return f"(var {t.index})"
    brackets = [format_ty(ty) for ty in t.ts0] if t.ts0 else None
    return _format_con(t.path, brackets, [format_tm(c) for c in t.children])


def tm_from_datum(lang: LanguageDescription, ctx: Ctx, d) -> TmNode:
    """Rebuild a typed term; each node's own type is solved from its constraint."""
    if _is_var(d):
        arg = _var_arg(d)
        if not arg.isdigit():
            raise ParseError(f"typed variables are de Bruijn indices, got {arg!r}")
        i = int(arg)
        if i >= len(ctx):
            raise ParseError(f"variable {i} out of range for a context of size {len(ctx)}")
        return TVar(i, var_type(ctx, i))
    head, payloads, brackets, rest = _split_con(d)
    path = _build_path(lang, head, payloads)
    nd, pay = descend(lang.root, path)
    ts0 = tuple(ty_from_datum(x) for x in (brackets or []))
    if len(ts0) != nd.n:
        raise ParseError(f"{head!r} binds {nd.n} variable(s), got {len(ts0)} binder type(s)")
    if len(rest) != nd.k:
        raise ParseError(f"{head!r} takes {nd.k} subterm(s), got {len(rest)}")
    children = tuple(
        tm_from_datum(lang, ctx_extend(ctx, visible_types(nd.shape[j], ts0)), c) for j, c in enumerate(rest)
    )
    st = UnifyState()
    for name, t in pay.items():
        st = st.bind(MetaP(name), pattern_of(t))
    for i, t in enumerate(ts0):
        st = st.bind(MetaB(i), pattern_of(t))
    for j, c in enumerate(children):
        st = st.bind(MetaS(j), pattern_of(c.ty))
    try:
        for lhs, rhs in nd.constraint:
            st = unify(lhs, rhs, st)
    except UnifyError as exc:
        raise ParseError(f"{head!r}: ill-typed node ({exc})") from None
    if not st.is_ground(MetaR()):
        raise ParseError(f"{head!r}: node type is not determined by its constraint")
    return TCon(path, ts0, children, to_ty(st.resolve(MetaR())), nd)


def parse_tm(lang: LanguageDescription, ctx: Ctx, text: str) -> Tm:
    ctx = tuple(ctx)
    return Tm(ctx, tm_from_datum(lang, ctx, read(text)))


__all__ = [
    "ParseError",
    "format_ctx",
    "format_expr",
    "format_form",
    "format_tm",
    "looks_named",
    "parse_ctx",
    "parse_expr",
    "parse_form",
    "parse_tm",
    "parse_ty",
    "read",
]
