"""Empirical approximation ratios of each solver on seeded instances.

Writes one CSV row per (solver, kind, seed) with the achieved ratio
against the brute-force optimum, then prints the minimum per solver next
to its proven bound.

    python scripts/ratio_sweep.py --seeds 100 --size 10 --out sweep.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction

from lagsel.converters import (
    enumeration_bound,
    partition_bound,
    solve_enumeration,
    solve_partition,
    solve_unit,
    unit_bound,
)
from lagsel.multiconstraint import multi_bound, solve_multi
from lagsel.problems import exact_handle
from lagsel.reference import KINDS, brute_force_opt, random_instance


@dataclass(frozen=True)
class SweepConfig:
    seeds: int = 50
    size: int = 10
    epsilon: Fraction = Fraction(1, 100)


def solvers(eps):
    return [
        ("unit", "unit", 1, solve_unit, unit_bound(1, eps)),
        ("partition", "general", 1, solve_partition, partition_bound(1, eps)),
        ("enumeration", "general", 1, solve_enumeration, enumeration_bound(1, eps)),
        ("multi-d2", "general", 2, solve_multi, multi_bound(1, 2, eps)),
    ]


def sweep(cfg: SweepConfig):
    oracle = exact_handle()
    for name, mode, d, solve, bound in solvers(cfg.epsilon):
        for kind in KINDS:
            for seed in range(cfg.seeds):
                inst = random_instance(kind, cfg.size, seed, mode, budgets=d)
                opt = brute_force_opt(inst)[1]
                sol = solve(inst, oracle, cfg.epsilon)
                ratio = Fraction(1) if opt == 0 else sol.profit / opt
                yield {"solver": name, "kind": kind, "seed": seed, "ratio": ratio, "bound": bound}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    ap.add_argument("--size", type=int, default=SweepConfig.size)
    ap.add_argument("--epsilon", type=Fraction, default=SweepConfig.epsilon)
    ap.add_argument("--out", default=None, help="CSV path (default: stdout)")
    args = ap.parse_args(argv)
    cfg = SweepConfig(args.seeds, args.size, args.epsilon)

    rows = list(sweep(cfg))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=["solver", "kind", "seed", "ratio", "bound"])
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "ratio": f"{float(row['ratio']):.4f}", "bound": str(row["bound"])})
    if args.out:
        fh.close()

    worst = {}
    for row in rows:
        key = row["solver"]
        worst[key] = min(worst.get(key, (Fraction(1), row["bound"]))[0], row["ratio"]), row["bound"]
    for name, (low, bound) in worst.items():
        print(f"{name:12s} min ratio {float(low):.4f}  bound {bound}", file=sys.stderr)


if __name__ == "__main__":
    main()
