#!/usr/bin/env python3
"""Per-program UNIV agreement and overhead over the bundled corpus."""

import argparse
import csv
import sys
from collections import defaultdict

from kleene.corpus import UNARY, univ_corpus
from kleene.universal import univ_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--inputs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    report = univ_check(univ_corpus(args.inputs, args.seed))
    names = {p.index: p.name for p in UNARY}
    by_prog = defaultdict(list)
    for row in report.rows:
        by_prog[row.index].append(row)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["program", "bytes", "cases", "agree", "halting", "max_step_ratio", "max_C"])
    for index, rows in by_prog.items():
        ratios = [r.step_ratio for r in rows if r.step_ratio is not None]
        cs = [r.overhead_constant for r in rows if r.overhead_constant is not None]
        w.writerow([
            names[index], rows[0].program_bytes, len(rows), sum(r.agree for r in rows),
            sum(r.host.halted for r in rows),
            f"{max(ratios):.1f}" if ratios else "", f"{max(cs):.2f}" if cs else "",
        ])
    print(f"# {report.summary()}", file=sys.stderr)
    return 1 if report.disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
