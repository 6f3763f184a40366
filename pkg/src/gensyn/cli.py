"""Command-line front end.

Exit codes: 0 success, 1 scope/type/law failure (or a stuck or exhausted run),
2 malformed input, 3 evaluation ran out of fuel.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import descjson
from .descriptions import LanguageDescription, format_ty, validate_description
from .errors import ArityMismatch, ContextMismatch, GensynError, PathError, UnboundName
from .laws import exhaustive_laws, generate_cases, run_laws
from .sexpr import (
    ParseError,
    format_expr,
    format_tm,
    looks_named,
    parse_ctx,
    parse_expr,
    parse_form,
    parse_tm,
    parse_ty,
)
from .stlc import Flavour, FuelExhausted, Stlc, Style, Stuck, desugar, evaluate, parse_stlc_id
from .termgen import Exhausted, GenConfig, enum_closed, gen_typed
from .terms import Expr, Tm, resolve, untype
from .typecheck import IllFormedType, TypeCheckError, check, infer, validate_typed

OK, FAILED, MALFORMED, OUT_OF_FUEL = 0, 1, 2, 3


class Malformed(GensynError):
    """Bad command-line input; exits with status 2."""


class Failed(GensynError):
    """A well-formed request whose answer is negative; exits with status 1."""


# ---------------------------------------------------------------------------
# Input helpers


def load_language(source: str) -> LanguageDescription:
    if source.startswith("builtin:") or source.startswith("stlc:"):
        try:
            return parse_stlc_id(source).description
        except ValueError as exc:
            raise Malformed(str(exc)) from None
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise Malformed(f"cannot read {source}: {exc.strerror}") from None
    lang = descjson.loads(text)
    diags = validate_description(lang)
    if diags:
        raise Malformed(f"{source}: invalid description: {diags[0]}")
    return lang


def read_input(name: str | None) -> str:
    if name is None or name == "-":
        return sys.stdin.read()
    try:
        return Path(name).read_text()
    except OSError as exc:
        raise Malformed(f"cannot read {name}: {exc.strerror}") from None


def parse_untyped(lang: LanguageDescription, text: str, ctx, names: list[str] | None, form: bool) -> Expr:
    """Read an Expr, or a Form (resolved against ``names``) when ``form`` or the text uses names."""
    if form or looks_named(text):
        env = names if names is not None else []
        if len(env) != len(ctx):
            raise Malformed(f"--names gives {len(env)} name(s) for a context of {len(ctx)} type(s)")
        return resolve(lang, env, parse_form(lang, text))
    return parse_expr(lang, text, scope=len(ctx))


def _names(arg: str | None) -> list[str] | None:
    if arg is None:
        return None
    return [n.strip() for n in arg.split(",") if n.strip()]


def _elaborate(lang, ctx, e: Expr, ty_text: str | None) -> Tm:
    if ty_text is not None:
        return check(lang, ctx, e, parse_ty(ty_text))
    return infer(lang, ctx, e)[0]


def _color(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


# ---------------------------------------------------------------------------
# Commands


def cmd_lang_validate(args) -> int:
    try:
        lang = load_language(args.desc)
    except Malformed:
        if args.desc.startswith(("builtin:", "stlc:")):
            raise
        lang = descjson.loads(Path(args.desc).read_text())
    diags = validate_description(lang)
    for d in diags:
        print(d)
    if diags:
        return FAILED
    print(f"{lang.name}: ok")
    return OK


def cmd_term_check(args) -> int:
    lang = load_language(args.lang)
    ctx = parse_ctx(args.ctx)
    e = parse_untyped(lang, read_input(args.file), ctx, _names(args.names), args.form)
    tm = check(lang, ctx, e, parse_ty(args.type))
    print(format_tm(tm))
    return OK


def cmd_term_infer(args) -> int:
    lang = load_language(args.lang)
    ctx = parse_ctx(args.ctx)
    e = parse_untyped(lang, read_input(args.file), ctx, _names(args.names), args.form)
    tm, ty = infer(lang, ctx, e)
    print(format_ty(ty))
    print(format_tm(tm))
    return OK


def cmd_term_erase(args) -> int:
    """Accepts a typed term (validated) or an untyped one (elaborated first)."""
    lang = load_language(args.lang)
    ctx = parse_ctx(args.ctx)
    text = read_input(args.file)
    try:
        tm = parse_tm(lang, ctx, text)
    except (ParseError, PathError, ArityMismatch):
        tm = _elaborate(lang, ctx, parse_untyped(lang, text, ctx, _names(args.names), args.form), args.type)
    else:
        diags = validate_typed(lang, tm)
        if diags:
            raise Failed(str(diags[0]))
        if args.type is not None and tm.ty != parse_ty(args.type):
            raise Failed(f"term has type {format_ty(tm.ty)}, expected {args.type}")
    print(format_expr(untype(tm)))
    return OK


def _stlc_source(args) -> tuple[Stlc, Tm]:
    """Sugared STLC with booleans, in the requested style."""
    src = Stlc(Flavour.SUGARED, args.style, bools=True)
    lang = src.description
    ctx = parse_ctx(args.ctx)
    e = parse_untyped(lang, read_input(args.file), ctx, _names(args.names), args.form)
    return src, _elaborate(lang, ctx, e, args.type)


def cmd_stlc_desugar(args) -> int:
    src, tm = _stlc_source(args)
    print(format_tm(desugar(src, tm)))
    return OK


def cmd_stlc_eval(args) -> int:
    src, tm = _stlc_source(args)
    core = desugar(src, tm)
    try:
        trace = evaluate(core, args.fuel)
    except FuelExhausted as exc:
        if args.trace:
            _print_trace(exc.trace)
        raise
    if args.trace:
        _print_trace(trace)
    print(format_expr(untype(trace.result)))
    return OK


def _print_trace(trace) -> None:
    for i, (rule, t) in enumerate(trace.steps, 1):
        print(f"[{i}] {rule} -> {format_expr(untype(t))}")


def cmd_laws(args) -> int:
    lang = load_language(args.lang)
    cfg = GenConfig(seed=args.seed, max_depth=args.depth, max_ctx=args.max_ctx, ty_depth=args.ty_depth, count=args.count)
    report = run_laws(lang, generate_cases(lang, cfg))
    ok = report.ok
    for r in report.results:
        status = _color("pass", "32") if r.ok else _color("FAIL", "31")
        print(f"{r.name}: {status} ({r.cases} cases)")
        if r.counterexample:
            print(f"  first counterexample: {r.counterexample}")
    if args.exhaustive:
        for r in exhaustive_laws(lang, max_ctx=3, ty_depth=2):
            status = _color("pass", "32") if r.ok else _color("FAIL", "31")
            print(f"{r.name}: {status} ({r.checked} instances)")
            if r.failures:
                print(f"  first counterexample: {r.failures[0]!r}")
            ok = ok and r.ok
    return OK if ok else FAILED


def cmd_gen(args) -> int:
    lang = load_language(args.lang)
    if args.enum:
        if args.max_nodes is None:
            raise Malformed("--enum needs --max-nodes")
        for ty, tm in enum_closed(lang, args.max_nodes):
            print(f"{format_tm(tm)} : {format_ty(ty)}")
        return OK
    if args.type is None:
        raise Malformed("gen needs --type (or --enum)")
    cfg = GenConfig(seed=args.seed, max_depth=args.budget, ty_depth=args.ty_depth, count=args.count, exhaustive=args.exhaustive)
    for tm in gen_typed(lang, parse_ctx(args.ctx), parse_ty(args.type), cfg):
        print(format_tm(tm))
    return OK


# ---------------------------------------------------------------------------
# Argument parsing


def _style(text: str) -> Style:
    try:
        return {"curry": Style.CURRY, "church": Style.CHURCH}[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"style is Curry or Church, not {text!r}") from None


def _nat(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return n


def _term_flags(p: argparse.ArgumentParser, lang: bool = True) -> None:
    if lang:
        p.add_argument("--lang", required=True, help="builtin id (builtin:stlc:...) or JSON description path")
    p.add_argument("--ctx", default="", help='comma-separated context types, outermost first, e.g. "base,(-> base base)"')
    p.add_argument("--names", help="comma-separated names for the context variables (named input only)")
    p.add_argument("--form", action="store_true", help="read the input as a named term")
    p.add_argument("file", nargs="?", help="input term file (default: stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gensyn", description="Description-generic typed syntax toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    lang = sub.add_parser("lang", help="language descriptions").add_subparsers(dest="action", required=True)
    p = lang.add_parser("validate", help="validate a description")
    p.add_argument("desc", help="JSON description path or builtin id")
    p.set_defaults(func=cmd_lang_validate)

    term = sub.add_parser("term", help="check, infer or erase terms").add_subparsers(dest="action", required=True)
    p = term.add_parser("check", help="check a term against a type")
    _term_flags(p)
    p.add_argument("--type", required=True)
    p.set_defaults(func=cmd_term_check)
    p = term.add_parser("infer", help="infer a term's type")
    _term_flags(p)
    p.set_defaults(func=cmd_term_infer)
    p = term.add_parser("erase", help="erase a typed term to its scoped skeleton")
    _term_flags(p)
    p.add_argument("--type")
    p.set_defaults(func=cmd_term_erase)

    stlc = sub.add_parser("stlc", help="STLC pipelines").add_subparsers(dest="action", required=True)
    for name, func in (("desugar", cmd_stlc_desugar), ("eval", cmd_stlc_eval)):
        p = stlc.add_parser(name)
        _term_flags(p, lang=False)
        p.add_argument("--style", type=_style, default=Style.CURRY)
        p.add_argument("--type")
        if name == "eval":
            p.add_argument("--fuel", type=_nat, default=10_000)
            p.add_argument("--trace", action="store_true", help="print each step's rule and result")
        p.set_defaults(func=func)

    p = sub.add_parser("laws", help="run the renaming/substitution laws on generated terms")
    p.add_argument("--lang", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_nat, default=100)
    p.add_argument("--depth", type=_nat, default=4)
    p.add_argument("--max-ctx", type=_nat, default=4)
    p.add_argument("--ty-depth", type=_nat, default=2)
    p.add_argument("--exhaustive", action="store_true", help="also run the exhaustive category laws")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("gen", help="generate or enumerate well-typed terms")
    p.add_argument("--lang", required=True)
    p.add_argument("--type")
    p.add_argument("--ctx", default="")
    p.add_argument("--budget", type=_nat, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_nat, default=10)
    p.add_argument("--ty-depth", type=_nat, default=2)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--enum", action="store_true", help="enumerate closed terms by size")
    p.add_argument("--max-nodes", type=_nat)
    p.set_defaults(func=cmd_gen)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return MALFORMED if exc.code else OK
    try:
        return args.func(args)
    except FuelExhausted as exc:
        print(f"error: fuel exhausted: {exc}", file=sys.stderr)
        return OUT_OF_FUEL
    except TypeCheckError as exc:
        print(f"error: {exc.diagnostic()}", file=sys.stderr)
        return FAILED
    except (Failed, UnboundName, ContextMismatch, Stuck, Exhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except (Malformed, ParseError, PathError, ArityMismatch, IllFormedType, descjson.DescriptionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
