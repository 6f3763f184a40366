"""Run the substitution laws over every builtin language across a grid of seeds and depths.

    python3 scripts/law_sweep.py --seeds 0 1 2 --depths 4 6 --count 500

Prints one row per (language, seed, depth) and exits nonzero if any law failed.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from itertools import product

from gensyn.laws import generate_cases, run_laws
from gensyn.stlc import Flavour, Stlc, Style
from gensyn.termgen import GenConfig


@dataclass(frozen=True)
class SweepConfig:
    seeds: tuple[int, ...] = (0, 1, 2)
    depths: tuple[int, ...] = (4, 6)
    count: int = 500
    max_ctx: int = 4
    languages: tuple[Stlc, ...] = field(
        default_factory=lambda: tuple(Stlc(f, s, b) for f, s, b in product(Flavour, Style, (False, True)))
        + tuple(Stlc(Flavour.DESUGARED, s, letrec=True) for s in Style)
    )


def sweep(cfg: SweepConfig) -> bool:
    ok = True
    print(f"{'language':34} {'seed':>4} {'depth':>5} {'cases':>6} {'failures':>8} {'secs':>6}")
    for lang, seed, depth in product(cfg.languages, cfg.seeds, cfg.depths):
        gen = GenConfig(seed=seed, max_depth=depth, max_ctx=cfg.max_ctx, count=cfg.count)
        start = time.perf_counter()
        report = run_laws(lang.description, generate_cases(lang.description, gen))
        secs = time.perf_counter() - start
        failures = sum(r.failures for r in report.results)
        print(f"{lang.name:34} {seed:>4} {depth:>5} {cfg.count:>6} {failures:>8} {secs:>6.1f}")
        for r in report.results:
            if not r.ok:
                print("   ", r.line())
        ok = ok and report.ok
    return ok


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, nargs="+", default=list(SweepConfig.seeds))
    p.add_argument("--depths", type=int, nargs="+", default=list(SweepConfig.depths))
    p.add_argument("--count", type=int, default=SweepConfig.count)
    p.add_argument("--max-ctx", type=int, default=SweepConfig.max_ctx)
    args = p.parse_args(argv)
    cfg = SweepConfig(tuple(args.seeds), tuple(args.depths), args.count, args.max_ctx)
    return 0 if sweep(cfg) else 1


if __name__ == "__main__":
    sys.exit(main())
