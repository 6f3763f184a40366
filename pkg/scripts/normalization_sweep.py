"""Evaluate every closed STLC+bool term up to a size bound and tabulate what happens.

    python3 scripts/normalization_sweep.py --max-nodes 9

For each size: how many terms, how many were already values, the longest
reduction, and counts of stuck or out-of-fuel runs (both should be zero).
Every intermediate term is re-validated at the original type.
"""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from dataclasses import dataclass

from gensyn.stlc import Flavour, FuelExhausted, Stlc, Style, Stuck, evaluate
from gensyn.termgen import enum_closed


@dataclass(frozen=True)
class NormConfig:
    max_nodes: int = 8
    fuel: int = 10_000
    style: Style = Style.CURRY


def sweep(cfg: NormConfig) -> bool:
    lang = Stlc(Flavour.DESUGARED, cfg.style, bools=True).description
    terms, values, stuck, fuel_out = Counter(), Counter(), Counter(), Counter()
    longest: Counter = Counter()
    rules: Counter = Counter()
    start = time.perf_counter()
    for _, e in enum_closed(lang, cfg.max_nodes):
        n = _size(e.body)
        terms[n] += 1
        try:
            trace = evaluate(e, cfg.fuel, lang)
        except Stuck:
            stuck[n] += 1
            continue
        except FuelExhausted:
            fuel_out[n] += 1
            continue
        values[n] += not trace.steps
        longest[n] = max(longest[n], len(trace.steps))
        rules.update(trace.rules)
    print(f"{'nodes':>5} {'terms':>7} {'values':>7} {'longest':>7} {'stuck':>5} {'no fuel':>7}")
    for n in sorted(terms):
        print(f"{n:>5} {terms[n]:>7} {values[n]:>7} {longest[n]:>7} {stuck[n]:>5} {fuel_out[n]:>7}")
    print("rules fired:", ", ".join(f"{r} {c}" for r, c in sorted(rules.items())) or "none")
    print(f"{sum(terms.values())} terms in {time.perf_counter() - start:.1f}s")
    return not stuck and not fuel_out


def _size(t) -> int:
    return 1 + sum(_size(c) for c in getattr(t, "children", ()))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-nodes", type=int, default=NormConfig.max_nodes)
    p.add_argument("--fuel", type=int, default=NormConfig.fuel)
    p.add_argument("--style", choices=["curry", "church"], default="curry")
    args = p.parse_args(argv)
    style = Style.CURRY if args.style == "curry" else Style.CHURCH
    return 0 if sweep(NormConfig(args.max_nodes, args.fuel, style)) else 1


if __name__ == "__main__":
    sys.exit(main())
