"""Named (``Form``), scoped (``Expr``) and typed (``Tm``) terms over a description.

De Bruijn convention throughout: index 0 is the innermost binding, i.e. the
rightmost entry of a context.  A node binding several variables extends the
context left to right, so the *last* visible binder gets index 0 in the child.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .descriptions import (
    BOUND,
    Desc,
    Diagnostic,
    LanguageDescription,
    Node,
    SgTag,
    SgTy,
    Ty,
    count_bound,
    visible_types,
)
from .errors import ArityMismatch, PathError, UnboundName, format_term_path

Ctx = tuple  # tuple[Ty, ...], grown at the right


# ---------------------------------------------------------------------------
# Constructor paths


@dataclass(frozen=True)
class Tag:
    name: str


@dataclass(frozen=True)
class TyPayload:
    t: Ty


SgChoice = Union[Tag, TyPayload]
Path = tuple  # tuple[SgChoice, ...]


def descend(desc: Desc, path: Sequence[SgChoice]) -> tuple[Node, dict[str, Ty]]:
    """Follow ``path`` from ``desc`` to its node; also return the type payloads by binder name."""
    payloads: dict[str, Ty] = {}
    d = desc
    for i, choice in enumerate(path):
        match d, choice:
            case SgTag(), Tag(name):
                sub = d.arm(name)
                if sub is None:
                    raise PathError(f"no production {name!r} among {list(d.tags)}")
                d = sub
            case SgTy(binder, rest), TyPayload(t):
                payloads[binder] = t
                d = rest
            case _:
                raise PathError(f"path step {i} ({choice!r}) does not match {type(d).__name__}")
    if not isinstance(d, Node):
        raise PathError(f"path {list(path)!r} stops before reaching a node")
    return d, payloads


def path_tags(path: Sequence[SgChoice]) -> tuple[str, ...]:
    return tuple(c.name for c in path if isinstance(c, Tag))


def path_payloads(path: Sequence[SgChoice]) -> tuple[Ty, ...]:
    return tuple(c.t for c in path if isinstance(c, TyPayload))


# ---------------------------------------------------------------------------
# Contexts


def ctx_extend(ctx: Ctx, tys: Sequence[Ty]) -> Ctx:
    return tuple(ctx) + tuple(tys)


def ctx_size(ctx: Ctx) -> int:
    return len(ctx)


def var_type(ctx: Ctx, index: int) -> Ty:
    if not 0 <= index < len(ctx):
        raise IndexError(f"variable {index} out of range for context of size {len(ctx)}")
    return ctx[len(ctx) - 1 - index]


# ---------------------------------------------------------------------------
# Form: names, no scoping


@dataclass(frozen=True)
class FVar:
    name: str


@dataclass(frozen=True)
class FCon:
    path: Path
    binders: tuple[str, ...]
    children: tuple[Form, ...]


Form = Union[FVar, FCon]


# ---------------------------------------------------------------------------
# Expr: well-scoped, untyped


@dataclass(frozen=True)
class EVar:
    index: int


@dataclass(frozen=True)
class ECon:
    path: Path
    children: tuple[ExprNode, ...]
    node: Node = field(compare=False, repr=False, hash=False)


ExprNode = Union[EVar, ECon]


@dataclass(frozen=True)
class Expr:
    scope: int
    body: ExprNode


# ---------------------------------------------------------------------------
# Tm: typed; context stored once at the root


@dataclass(frozen=True)
class TVar:
    index: int
    ty: Ty


@dataclass(frozen=True)
class TCon:
    path: Path
    ts0: tuple[Ty, ...]
    children: tuple[TmNode, ...]
    ty: Ty
    node: Node = field(compare=False, repr=False, hash=False)

    def child_ctx(self, ctx: Ctx, j: int) -> Ctx:
        return ctx_extend(ctx, visible_types(self.node.shape[j], self.ts0))


TmNode = Union[TVar, TCon]


@dataclass(frozen=True)
class Tm:
    ctx: Ctx
    body: TmNode

    @property
    def ty(self) -> Ty:
        return self.body.ty


def mk_econ(lang: LanguageDescription, path: Sequence[SgChoice], children: Sequence[ExprNode]) -> ECon:
    nd, _ = descend(lang.root, path)
    if len(children) != nd.k:
        raise ArityMismatch(f"node takes {nd.k} children, got {len(children)}")
    return ECon(tuple(path), tuple(children), nd)


def mk_tcon(
    lang: LanguageDescription,
    path: Sequence[SgChoice],
    ts0: Sequence[Ty],
    children: Sequence[TmNode],
    ty: Ty,
) -> TCon:
    nd, _ = descend(lang.root, path)
    if len(ts0) != nd.n:
        raise ArityMismatch(f"node binds {nd.n} variable(s), got {len(ts0)} binder type(s)")
    if len(children) != nd.k:
        raise ArityMismatch(f"node takes {nd.k} children, got {len(children)}")
    return TCon(tuple(path), tuple(ts0), tuple(children), ty, nd)


def node_count(t) -> int:
    """Number of variable and constructor nodes in a term tree."""
    if isinstance(t, (Tm, Expr)):
        t = t.body
    if isinstance(t, (TCon, ECon, FCon)):
        return 1 + sum(node_count(c) for c in t.children)
    return 1


def has_tag(t, tag: str) -> bool:
    if isinstance(t, (Tm, Expr)):
        t = t.body
    if isinstance(t, (TCon, ECon, FCon)):
        return tag in path_tags(t.path) or any(has_tag(c, tag) for c in t.children)
    return False


# ---------------------------------------------------------------------------
# Name resolution and erasure


def resolve(lang: LanguageDescription, env: Sequence[str], f: Form) -> Expr:
    """Replace names by de Bruijn indices; the rightmost binding of a name wins."""
    return Expr(len(env), _resolve(lang, list(env), f, ()))


def _resolve(lang, env: list[str], f: Form, where: tuple[int, ...]) -> ExprNode:
    match f:
        case FVar(name):
            for index, bound in enumerate(reversed(env)):
                if bound == name:
                    return EVar(index)
            raise UnboundName(name, where)
        case FCon(path, binders, children):
            nd, _ = descend(lang.root, path)
            if len(binders) != nd.n:
                raise ArityMismatch(f"{format_term_path(where)}: node binds {nd.n} name(s), got {len(binders)}")
            if len(children) != nd.k:
                raise ArityMismatch(f"{format_term_path(where)}: node takes {nd.k} children, got {len(children)}")
            out = []
            for j, (row, child) in enumerate(zip(nd.shape, children)):
                inner = env + [b for flag, b in zip(row, binders) if flag is BOUND]
                out.append(_resolve(lang, inner, child, where + (j,)))
            return ECon(tuple(path), tuple(out), nd)
    raise TypeError(f"not a Form: {f!r}")


def untype_var(index: int) -> int:
    return index


def untype(e: Tm) -> Expr:
    return Expr(ctx_size(e.ctx), _untype(e.body))


def _untype(t: TmNode) -> ExprNode:
    if isinstance(t, TVar):
        return EVar(untype_var(t.index))
    return ECon(t.path, tuple(_untype(c) for c in t.children), t.node)


def validate_scoped(lang: LanguageDescription, e: Expr) -> list[Diagnostic]:
    """Check every variable index against its local scope and every node against the description."""
    out: list[Diagnostic] = []
    _check_scope(lang, e.body, e.scope, (), out)
    return out


def _check_scope(lang, t: ExprNode, scope: int, where, out) -> None:
    here = format_term_path(where)
    if isinstance(t, EVar):
        if not 0 <= t.index < scope:
            out.append(Diagnostic(here, "UnboundVar", f"index {t.index} with {scope} variable(s) in scope"))
        return
    try:
        nd, _ = descend(lang.root, t.path)
    except PathError as exc:
        out.append(Diagnostic(here, "BadPath", str(exc)))
        return
    if len(t.children) != nd.k:
        out.append(Diagnostic(here, "ArityMismatch", f"{len(t.children)} children, node takes {nd.k}"))
        return
    for j, (row, c) in enumerate(zip(nd.shape, t.children)):
        _check_scope(lang, c, scope + count_bound(row), where + (j,), out)
