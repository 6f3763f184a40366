"""JSON encoding of language descriptions.

    {"name": str, "types": [{"ctor": str, "arity": nat}, ...], "desc": D}

    D = {"sg-tag": {"label": str, "arms": {tag: D, ...}}}
      | {"sg-ty": {"binder": str, "rest": D}}
      | {"node": {"n": nat, "shape": [["bound"|"unbound", ...], ...], "constraint": [[P, P], ...]}}
    P = ["con", ctor, P...] | ["B", i] | ["S", j] | ["R"] | ["P", name]
"""

from __future__ import annotations

import json
from typing import Any

from .descriptions import (
    Binder,
    Con,
    Constraint,
    LanguageDescription,
    MetaB,
    MetaP,
    MetaR,
    MetaS,
    Node,
    SgTag,
    SgTy,
    TySig,
)
from .errors import GensynError


class DescriptionFormatError(GensynError):
    pass


def pattern_to_json(p) -> list:
    match p:
        case Con(ctor, args):
            return ["con", ctor, *(pattern_to_json(a) for a in args)]
        case MetaB(i):
            return ["B", i]
        case MetaS(j):
            return ["S", j]
        case MetaR():
            return ["R"]
        case MetaP(name):
            return ["P", name]
    raise TypeError(f"not a pattern: {p!r}")


def desc_to_json(d) -> dict:
    match d:
        case SgTag(label, arms):
            return {"sg-tag": {"label": label, "arms": {tag: desc_to_json(sub) for tag, sub in arms}}}
        case SgTy(binder, rest):
            return {"sg-ty": {"binder": binder, "rest": desc_to_json(rest)}}
        case Node(n, shape, constraint):
            return {
                "node": {
                    "n": n,
                    "shape": [[b.value for b in row] for row in shape],
                    "constraint": [[pattern_to_json(l), pattern_to_json(r)] for l, r in constraint],
                }
            }
    raise TypeError(f"not a description: {d!r}")


def to_json(lang: LanguageDescription) -> dict:
    return {
        "name": lang.name,
        "types": [{"ctor": c, "arity": a} for c, a in lang.tysig.ctors],
        "desc": desc_to_json(lang.root),
    }


def dumps(lang: LanguageDescription) -> str:
    return json.dumps(to_json(lang), indent=2) + "\n"


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise DescriptionFormatError(msg)


def _nat(x: Any, what: str) -> int:
    _expect(isinstance(x, int) and not isinstance(x, bool) and x >= 0, f"{what} must be a natural number, got {x!r}")
    return x


def _str(x: Any, what: str) -> str:
    _expect(isinstance(x, str), f"{what} must be a string, got {x!r}")
    return x


def pattern_from_json(x: Any):
    _expect(isinstance(x, list) and x and isinstance(x[0], str), f"bad pattern {x!r}")
    match x:
        case ["con", ctor, *args]:
            return Con(_str(ctor, "constructor"), tuple(pattern_from_json(a) for a in args))
        case ["B", i]:
            return MetaB(_nat(i, "B index"))
        case ["S", j]:
            return MetaS(_nat(j, "S index"))
        case ["R"]:
            return MetaR()
        case ["P", name]:
            return MetaP(_str(name, "payload name"))
    raise DescriptionFormatError(f"bad pattern {x!r}")


def desc_from_json(x: Any):
    _expect(isinstance(x, dict) and len(x) == 1, f"a description is a one-key object, got {x!r}")
    (key, body), = x.items()
    _expect(isinstance(body, dict), f"{key!r} body must be an object")
    if key == "sg-tag":
        _expect(set(body) == {"label", "arms"}, f"sg-tag needs exactly label and arms, got {sorted(body)}")
        _expect(isinstance(body["arms"], dict), "sg-tag arms must be an object")
        arms = tuple((_str(tag, "tag"), desc_from_json(sub)) for tag, sub in body["arms"].items())
        return SgTag(_str(body["label"], "label"), arms)
    if key == "sg-ty":
        _expect(set(body) == {"binder", "rest"}, f"sg-ty needs exactly binder and rest, got {sorted(body)}")
        return SgTy(_str(body["binder"], "binder"), desc_from_json(body["rest"]))
    if key == "node":
        _expect(set(body) == {"n", "shape", "constraint"}, f"node needs n, shape and constraint, got {sorted(body)}")
        _expect(isinstance(body["shape"], list), "shape must be a list of rows")
        rows = []
        for row in body["shape"]:
            _expect(isinstance(row, list), "each shape row must be a list")
            try:
                rows.append(tuple(Binder(b) for b in row))
            except ValueError:
                raise DescriptionFormatError(f"shape entries are 'bound' or 'unbound', got {row!r}") from None
        _expect(isinstance(body["constraint"], list), "constraint must be a list of equations")
        eqs = []
        for eq in body["constraint"]:
            _expect(isinstance(eq, list) and len(eq) == 2, f"an equation is a two-element list, got {eq!r}")
            eqs.append((pattern_from_json(eq[0]), pattern_from_json(eq[1])))
        return Node(_nat(body["n"], "n"), tuple(rows), Constraint(tuple(eqs)))
    raise DescriptionFormatError(f"unknown description form {key!r}")


def from_json(x: Any) -> LanguageDescription:
    _expect(isinstance(x, dict), "a language is a JSON object")
    _expect(set(x) == {"name", "types", "desc"}, f"expected keys name, types, desc; got {sorted(x)}")
    _expect(isinstance(x["types"], list), "types must be a list")
    ctors = []
    for t in x["types"]:
        _expect(isinstance(t, dict) and set(t) == {"ctor", "arity"}, f"bad type entry {t!r}")
        ctors.append((_str(t["ctor"], "ctor"), _nat(t["arity"], "arity")))
    return LanguageDescription(_str(x["name"], "name"), TySig(tuple(ctors)), desc_from_json(x["desc"]))


def _no_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise DescriptionFormatError(f"duplicate key {key!r}")
        seen.add(key)
    return dict(pairs)


def loads(text: str) -> LanguageDescription:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise DescriptionFormatError(f"invalid JSON: {exc}") from None
    return from_json(data)
