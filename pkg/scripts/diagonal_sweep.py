#!/usr/bin/env python3
"""Exhaustive diagonal sweep plus the truncated Cantor illustration."""

import argparse
import random
import time

from kleene.diagonal import (
    cantor_truncation,
    count_fixed_point_free,
    exhaustive_unexpressibility,
    fixed_point_counterexample,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=8, help="size of the Cantor illustration")
    args = ap.parse_args()

    print("s,p,tables,deltas,violations,seconds")
    for s, p in ((1, 2), (2, 2), (3, 2), (2, 3), (3, 3)):
        start = time.perf_counter()
        rep = exhaustive_unexpressibility(s, p)
        print(f"{s},{p},{rep.tables},{rep.deltas},{rep.violations},{time.perf_counter() - start:.3f}")

    print("\nfixed-point-free self-maps:", [count_fixed_point_free(p) for p in range(1, 7)])

    ce = fixed_point_counterexample(1, 2, 3)
    print(f"with delta = {list(ce.delta.table)} (fixes 1), u = {list(ce.u.table)} is row {ce.matching_rows}")

    rng = random.Random(args.seed)
    rows = [[rng.randrange(2) for _ in range(args.n)] for _ in range(args.n)]
    flipped = cantor_truncation(rows)
    print(f"\n{args.n} truncated binary expansions; the flipped diagonal differs from row k at digit k:")
    for k, row in enumerate(rows):
        digits = "".join(f"[{d}]" if j == k else f" {d} " for j, d in enumerate(row))
        print(f"  0.{digits}")
    print("  0." + "".join(f" {d} " for d in flipped))


if __name__ == "__main__":
    main()
