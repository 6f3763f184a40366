"""Language descriptions: object types, binder shapes, constraints and ``Desc`` trees.

A language is a :class:`LanguageDescription` value.  Its ``root`` is a tree of

* :class:`SgTag`  -- a finite choice of productions, one sub-description per tag,
* :class:`SgTy`   -- an object type stored in the node and named for constraints,
* :class:`Node`   -- ``n`` new binders, ``k`` subterms, a ``k x n`` binder shape
  and a conjunction of type equations over the node's metavariables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union


class Binder(enum.Enum):
    BOUND = "bound"
    UNBOUND = "unbound"

    def __repr__(self) -> str:
        return self.value


BOUND = Binder.BOUND
UNBOUND = Binder.UNBOUND

Row = tuple  # tuple[Binder, ...]
Shape = tuple  # tuple[Row, ...]; one row per subterm


# ---------------------------------------------------------------------------
# Object types


@dataclass(frozen=True)
class TySig:
    """Ordered constructor signature of the object type algebra."""

    ctors: tuple[tuple[str, int], ...]

    def arity(self, ctor: str) -> int | None:
        for name, arity in self.ctors:
            if name == ctor:
                return arity
        return None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ctors)


@dataclass(frozen=True)
class Ty:
    ctor: str
    args: tuple[Ty, ...] = ()

    def __repr__(self) -> str:
        return format_ty(self)

    @property
    def depth(self) -> int:
        return 1 + max((a.depth for a in self.args), default=0)


def format_ty(t: Ty) -> str:
    if not t.args:
        return t.ctor
    return "(" + " ".join([t.ctor, *(format_ty(a) for a in t.args)]) + ")"


def ty_errors(sig: TySig, t: Ty) -> list[str]:
    """Problems with ``t`` relative to ``sig``; empty when well-formed."""
    out = []
    arity = sig.arity(t.ctor)
    if arity is None:
        out.append(f"unknown type constructor {t.ctor!r}")
    elif arity != len(t.args):
        out.append(f"{t.ctor!r} expects {arity} argument(s), got {len(t.args)}")
    for a in t.args:
        out.extend(ty_errors(sig, a))
    return out


def ground_types(sig: TySig, max_depth: int) -> list[Ty]:
    """Every ground type of depth <= ``max_depth``, in a fixed order.

    The order is by depth first, then by constructor order in ``sig``, then
    lexicographically by arguments.
    """
    by_depth: list[list[Ty]] = [[]]  # by_depth[d]: types of depth exactly d
    for d in range(1, max_depth + 1):
        shallower = [t for level in by_depth[:d] for t in level]
        layer = []
        for ctor, arity in sig.ctors:
            if arity == 0:
                if d == 1:
                    layer.append(Ty(ctor))
                continue
            for args in _arg_tuples(shallower, by_depth[d - 1], arity):
                layer.append(Ty(ctor, args))
        by_depth.append(layer)
    return [t for level in by_depth for t in level]


def _arg_tuples(pool: list[Ty], exact: list[Ty], arity: int) -> Iterator[tuple[Ty, ...]]:
    # tuples over `pool` with at least one element drawn from `exact`
    exact_set = set(exact)

    def go(i: int, acc: tuple[Ty, ...], hit: bool) -> Iterator[tuple[Ty, ...]]:
        if i == arity:
            if hit:
                yield acc
            return
        for t in pool:
            yield from go(i + 1, acc + (t,), hit or t in exact_set)

    yield from go(0, (), False)


# ---------------------------------------------------------------------------
# Type patterns and constraints


@dataclass(frozen=True)
class Con:
    ctor: str
    args: tuple[Pattern, ...] = ()

    def __repr__(self) -> str:
        return format_pattern(self)


@dataclass(frozen=True)
class MetaB:
    """Type of the i-th newly bound variable."""

    i: int

    def __repr__(self) -> str:
        return f"?B{self.i}"


@dataclass(frozen=True)
class MetaS:
    """Type of the j-th subterm."""

    j: int

    def __repr__(self) -> str:
        return f"?S{self.j}"


@dataclass(frozen=True)
class MetaR:
    """Type of the node itself."""

    def __repr__(self) -> str:
        return "?R"


@dataclass(frozen=True)
class MetaP:
    """Type payload stored by the enclosing ``SgTy`` named ``name``."""

    name: str

    def __repr__(self) -> str:
        return f"?P.{self.name}"


Meta = Union[MetaB, MetaS, MetaR, MetaP]
Pattern = Union[Con, MetaB, MetaS, MetaR, MetaP]


def format_pattern(p) -> str:
    match p:
        case Con(ctor, ()):
            return ctor
        case Con(ctor, args):
            return "(" + " ".join([ctor, *(format_pattern(a) for a in args)]) + ")"
        case Ty():
            return format_ty(p)
        case _:
            return repr(p)


def pattern_of(t: Ty) -> Con:
    return Con(t.ctor, tuple(pattern_of(a) for a in t.args))


def metas_of(p) -> Iterator:
    if isinstance(p, Con):
        for a in p.args:
            yield from metas_of(a)
    else:
        yield p


@dataclass(frozen=True)
class Constraint:
    equations: tuple[tuple[Pattern, Pattern], ...] = ()

    def __iter__(self):
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)


# ---------------------------------------------------------------------------
# Descriptions


@dataclass(frozen=True)
class SgTag:
    label: str
    arms: tuple[tuple[str, Desc], ...]

    def arm(self, tag: str) -> Desc | None:
        for name, d in self.arms:
            if name == tag:
                return d
        return None

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.arms)


@dataclass(frozen=True)
class SgTy:
    binder: str
    rest: Desc


@dataclass(frozen=True)
class Node:
    n: int
    shape: Shape
    constraint: Constraint = field(default_factory=Constraint)

    @property
    def k(self) -> int:
        return len(self.shape)


Desc = Union[SgTag, SgTy, Node]


@dataclass(frozen=True)
class LanguageDescription:
    name: str
    tysig: TySig
    root: Desc

    def __repr__(self) -> str:
        return f"LanguageDescription({self.name!r})"


def node(n: int, shape: Sequence[Sequence[Binder]], equations=()) -> Node:
    """Convenience constructor taking lists."""
    return Node(n, tuple(tuple(r) for r in shape), Constraint(tuple((l, r) for l, r in equations)))


# ---------------------------------------------------------------------------
# Shape arithmetic


def count_bound(row: Sequence[Binder]) -> int:
    return sum(1 for b in row if b is BOUND)


class LengthMismatch(ValueError):
    pass


def visible_types(row: Sequence[Binder], ts0: Sequence[Ty]) -> tuple[Ty, ...]:
    """The binder types in scope for a subterm whose shape row is ``row``."""
    if len(row) != len(ts0):
        raise LengthMismatch(f"shape row has {len(row)} entries but {len(ts0)} binder types given")
    return tuple(t for b, t in zip(row, ts0) if b is BOUND)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    path: str
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.path}: {self.kind}: {self.detail}"


def _fmt_path(parts: Sequence[str]) -> str:
    return "/" + "/".join(parts)


def validate_description(lang: LanguageDescription) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    seen: set[str] = set()
    for name, arity in lang.tysig.ctors:
        if name in seen:
            out.append(Diagnostic("/types", "DuplicateCtor", f"type constructor {name!r} declared twice"))
        seen.add(name)
        if not isinstance(arity, int) or arity < 0:
            out.append(Diagnostic("/types", "BadArity", f"{name!r} has arity {arity!r}"))
    _validate_desc(lang.tysig, lang.root, [], (), out)
    return out


def _validate_desc(sig: TySig, d, path: list[str], binders: tuple[str, ...], out: list[Diagnostic]) -> None:
    match d:
        case SgTag(label, arms):
            if not arms:
                out.append(Diagnostic(_fmt_path(path), "EmptyTag", f"tag set {label!r} has no arms"))
            seen: set[str] = set()
            for tag, sub in arms:
                if tag in seen:
                    out.append(Diagnostic(_fmt_path(path), "DuplicateTag", f"tag {tag!r} appears twice"))
                seen.add(tag)
                _validate_desc(sig, sub, path + [tag], binders, out)
        case SgTy(binder, rest):
            if binder in binders:
                out.append(Diagnostic(_fmt_path(path), "DuplicateBinder", f"type payload {binder!r} shadows an outer one"))
            _validate_desc(sig, rest, path + ["{" + binder + "}"], binders + (binder,), out)
        case Node(n, shape, constraint):
            here = _fmt_path(path)
            if not isinstance(n, int) or n < 0:
                out.append(Diagnostic(here, "BadBinderCount", f"n = {n!r}"))
                return
            for j, row in enumerate(shape):
                if len(row) != n:
                    out.append(Diagnostic(here, "ShapeNotRectangular", f"row {j} has length {len(row)}, expected {n}"))
                for b in row:
                    if not isinstance(b, Binder):
                        out.append(Diagnostic(here, "BadBinder", f"row {j} contains {b!r}"))
            for e, eq in enumerate(constraint.equations):
                for side in eq:
                    _validate_pattern(sig, side, n, len(shape), binders, f"{here}#{e}", out)
        case _:
            out.append(Diagnostic(_fmt_path(path), "NotADesc", f"unexpected {type(d).__name__}"))


def _validate_pattern(sig, p, n: int, k: int, binders, where: str, out: list[Diagnostic]) -> None:
    match p:
        case Con(ctor, args):
            arity = sig.arity(ctor)
            if arity is None:
                out.append(Diagnostic(where, "UnknownCtor", f"type constructor {ctor!r} not in signature"))
            elif arity != len(args):
                out.append(Diagnostic(where, "ArityMismatch", f"{ctor!r} expects {arity}, got {len(args)}"))
            for a in args:
                _validate_pattern(sig, a, n, k, binders, where, out)
        case MetaB(i):
            if not 0 <= i < n:
                out.append(Diagnostic(where, "MetaOutOfRange", f"B{i} but node binds {n} variable(s)"))
        case MetaS(j):
            if not 0 <= j < k:
                out.append(Diagnostic(where, "MetaOutOfRange", f"S{j} but node has {k} subterm(s)"))
        case MetaR():
            pass
        case MetaP(name):
            if name not in binders:
                out.append(Diagnostic(where, "UnknownPayload", f"P {name!r} not bound by an enclosing sg-ty"))
        case _:
            out.append(Diagnostic(where, "BadPattern", f"unexpected {p!r}"))


def productions(desc: Desc) -> list[tuple[str, ...]]:
    """Tag sequences leading to each reachable node (``SgTy`` steps omitted)."""
    match desc:
        case SgTag(_, arms):
            return [(tag, *rest) for tag, sub in arms for rest in productions(sub)]
        case SgTy(_, rest):
            return productions(rest)
        case _:
            return [()]
