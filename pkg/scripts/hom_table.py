"""Dimensions of truncated Hom spaces between the basic functors.

Entries marked * come from a source not generated below the bound, so they
are only upper bounds for the untruncated Hom.
"""

import argparse
from dataclasses import dataclass, field

from corrfunctor.cli import load_functor
from corrfunctor.functors import hom_is_exact, hom_solver


@dataclass
class TableConfig:
    bound: int = 3
    functors: list = field(default_factory=lambda: ["k", "rep:1", "rep:2", "ft:chain1", "ft:chain2", "ft:diamond"])


def main(cfg: TableConfig):
    reps = [load_functor(s, cfg.bound) for s in cfg.functors]
    width = max(len(s) for s in cfg.functors) + 2
    print("src \\ tgt".ljust(width) + "".join(s.rjust(width) for s in cfg.functors))
    for spec, m in zip(cfg.functors, reps):
        mark = "" if hom_is_exact(m) else "*"
        cells = [f"{len(hom_solver(m, mp))}{mark}".rjust(width) for mp in reps]
        print(spec.ljust(width) + "".join(cells))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description="Hom dimension table")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--functor", action="append", help="k, rep:<n>, ft:<lattice> (repeatable)")
    args = p.parse_args()
    cfg = TableConfig(bound=args.bound)
    if args.functor:
        cfg.functors = args.functor
    main(cfg)
