"""Show how close the enumeration scheme gets on the three-group family.

For each k the multiplier pair lands with the within-budget solution on
A2 and the over-budget one on A3, while the optimum lives in A1.  Nothing
built from A2 and A3 beats k(1 + delta), so the ratio cap tends to
(1 + delta) r / (1 + r).

    python scripts/tightness_demo.py --k 6 8 10 --delta 1/4
"""

import argparse
from fractions import Fraction

from lagsel.core import LambdaPair, find_lambda_pair
from lagsel.problems import exact_handle
from lagsel.reference import TightnessParams, brute_force_opt, tightness_family


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[6, 8, 10])
    ap.add_argument("--delta", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--r", type=Fraction, default=Fraction(1))
    ap.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    args = ap.parse_args(argv)

    print(f"{'k':>4} {'n':>5} {'OPT':>8} {'cap':>8} {'cap/OPT':>9} {'lambda_lo':>10} {'S1':>8} {'S2':>8}")
    for k in args.k:
        fam = tightness_family(TightnessParams(args.r, k, args.delta), max_universe=10_000)
        inst = fam.instance
        opt = brute_force_opt(inst, cap=len(inst))[1]
        pair = find_lambda_pair(exact_handle(cap=len(inst)), inst, eps=args.epsilon)
        if isinstance(pair, LambdaPair):
            lam, s1, s2 = float(pair.lambda_lo), pair.sol_hi.profit, pair.sol_lo.profit
        else:
            lam, s1, s2 = float("nan"), pair.solution.profit, Fraction(0)
        print(
            f"{k:>4} {len(inst):>5} {str(opt):>8} {str(fam.cap_value):>8} "
            f"{float(fam.ratio_cap):>9.4f} {lam:>10.4f} {str(s1):>8} {str(s2):>8}"
        )
    limit = (1 + args.delta) * args.r / (1 + args.r)
    print(f"limit as k grows: {limit} = {float(limit):.4f}")


if __name__ == "__main__":
    main()
