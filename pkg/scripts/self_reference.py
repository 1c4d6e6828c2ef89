#!/usr/bin/env python3
"""Build the self-describing program two ways and report on both.

The fixed-point route goes through E, the s-m-n copier and UNIV; the direct
route is a hand-built quine.  Both indices are written to the output directory.
"""

import argparse
import time
from pathlib import Path

from kleene.encoding import decode_index, eval_index
from kleene.recursion import direct_quine, self_rep


def describe(name, n0, outs, seconds):
    prog = decode_index(n0)
    steps = [o.steps for o in outs]
    ok = sum(o.halted and o.value == n0 for o in outs)
    print(f"{name}: {len(prog)} instructions, {n0.bit_length()} bits, "
          f"{ok}/{len(outs)} inputs reproduce n0, {min(steps)}..{max(steps)} steps, {seconds:.1f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--inputs", type=int, default=10)
    ap.add_argument("--budget", type=int, default=10**9)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    result = self_rep(range(args.inputs), args.budget)
    describe("fixed point", result.n0, [o for _, o, _ in result.samples], time.perf_counter() - start)
    (args.out / "self_rep.idx").write_text(f"{result.n0}\n")

    start = time.perf_counter()
    q = direct_quine()
    outs = [eval_index(q, x, args.budget) for x in range(args.inputs)]
    describe("direct quine", q, outs, time.perf_counter() - start)
    (args.out / "direct_quine.idx").write_text(f"{q}\n")


if __name__ == "__main__":
    main()
