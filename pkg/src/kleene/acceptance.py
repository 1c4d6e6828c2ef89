"""Acceptance checks, one function per criterion.

Each check returns a :class:`Criterion` whose ``outputs`` hold everything the
check computed (timings excluded), so two runs can be compared by digest.
``python -m kleene.acceptance`` prints one PASS/FAIL line per criterion;
``--digest`` prints the output digests instead.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field

from . import backaction, diagonal, recursion, smn
from .corpus import PAIRED, univ_corpus
from .encoding import decode_index, encode_program, eval_index, pair, unpair
from .machine import SIGNATURES, Instruction, Op, Program, parse_program, render_program
from .universal import univ_check

FULL_BUDGET = 10**9
SMN_BUDGET = 10**7


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    outputs: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{status}] {self.title}: {self.detail} ({self.seconds:.1f}s)"

    def digest(self) -> str:
        blob = json.dumps(self.outputs, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def random_program(rng: random.Random, max_len=20, max_reg=300, max_imm_bits=100) -> Program:
    n = rng.randint(0, max_len)
    out = []
    for _ in range(n):
        op = Op(rng.randrange(len(Op)))
        args = []
        for kind in SIGNATURES[op]:
            if kind == "r":
                args.append(rng.randrange(max_reg))
            elif kind == "i":
                args.append(rng.getrandbits(rng.randint(0, max_imm_bits)))
            else:
                args.append(rng.randrange(n + 1))
        out.append(Instruction(op, tuple(args)))
    return Program(out)


def _timed(fn):
    def wrapper():
        start = time.perf_counter()
        result = fn()
        result.seconds = time.perf_counter() - start
        return result
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def criterion_1() -> Criterion:
    start = time.perf_counter()
    try:
        result = recursion.self_rep(range(10), FULL_BUDGET)
    except recursion.FixedPointError as exc:
        return Criterion(1, "self-representation", False, str(exc))
    elapsed = time.perf_counter() - start
    n0 = result.n0
    ok = all(out.halted and out.value == n0 for _, out, _ in result.samples)
    ok = ok and elapsed < 120
    detail = f"n0 has {len(str(n0))} digits, verified {len(result.samples)}/10 inputs in {elapsed:.1f}s"
    return Criterion(1, "self-representation", ok, detail, {"n0": str(n0)})


@_timed
def criterion_2() -> Criterion:
    outputs, parts, ok = {}, [], True
    for name, f in (("identity", recursion.identity_prog()), ("nop-prepender", recursion.nop_prepender_prog())):
        # fixedpoint samples phi_{n0} and phi_{f(n0)} on the same inputs
        result = recursion.fixedpoint(f, range(10), FULL_BUDGET)
        rep = result.report
        ok = ok and rep.disagreements == 0
        counts = {k: rep.count(k) for k in (recursion.AGREE_HALT, recursion.DISAGREE_HALT, recursion.BOTH_EXHAUSTED, recursion.MIXED)}
        outputs[name] = {"n0": str(result.n0), "f_n0": str(result.f_n0), "csv": rep.to_csv()}
        parts.append(f"{name}: {counts[recursion.DISAGREE_HALT]} disagree-halt, {counts[recursion.BOTH_EXHAUSTED]} both-exhausted")
    return Criterion(2, "recursion theorem", ok, "; ".join(parts), outputs)


@_timed
def criterion_3() -> Criterion:
    rng = random.Random(3)
    halting, violations, cases = 0, 0, []
    for prog in PAIRED:
        for _ in range(100):
            x, y = unpair(prog.sample(rng))
            direct = eval_index(prog.index, pair(x, y), SMN_BUDGET)
            special = eval_index(smn.specialize(prog.index, x), y, SMN_BUDGET)
            if direct.halted and special.halted:
                halting += 1
                violations += direct.value != special.value
            elif direct.halted != special.halted:
                violations += 1
            cases.append((prog.name, x, y, str(direct), str(special)))
    mismatches = 0
    smn_prog = smn.build_smn_prog()
    indices = [p.index for p in PAIRED] + [0, 1, 256]
    samples = []
    for _ in range(50):
        i = rng.choice(indices)
        x = rng.getrandbits(rng.randint(0, 64))
        host = smn.specialize(i, x)
        run = eval_index(smn_prog, pair(i, x), 10**8)
        mismatches += not (run.halted and run.value == host)
        samples.append(str(host))
    ok = violations == 0 and mismatches == 0 and len(PAIRED) >= 15
    detail = (
        f"{len(PAIRED)} programs x 100 inputs, {halting} halting cases, {violations} law violations; "
        f"host vs in-language SMN: {50 - mismatches}/50 identical"
    )
    return Criterion(3, "s-m-n law", ok, detail, {"cases": cases, "smn": samples})


@_timed
def criterion_4() -> Criterion:
    corpus = univ_corpus(50, seed=0)
    report = univ_check(corpus)
    n_programs = len({e for e, _, _ in corpus})
    ok = not report.disagreements and n_programs >= 20
    rows = [(str(r.host), str(r.univ)) for r in report.rows]
    detail = f"{n_programs} programs x 50 inputs: {report.summary()}"
    return Criterion(4, "universality", ok, detail, {"rows": rows})


@_timed
def criterion_5() -> Criterion:
    outputs, ok, slowest = {}, True, 0.0
    for s, p in ((1, 2), (2, 2), (3, 2), (2, 3), (3, 3)):
        start = time.perf_counter()
        rep = diagonal.exhaustive_unexpressibility(s, p)
        took = time.perf_counter() - start
        if (s, p) == (3, 3):
            slowest = took
            ok = ok and took < 10
        ok = ok and rep.violations == 0 and rep.diagonal_failures == 0
        outputs[f"{s},{p}"] = rep.summary()
    detail = "; ".join(f"({k}) {v}" for k, v in outputs.items()) + f"; (3,3) took {slowest:.2f}s"
    return Criterion(5, "exhaustive diagonal", ok, detail, outputs)


@_timed
def criterion_6() -> Criterion:
    counts = [diagonal.count_fixed_point_free(p) for p in range(1, 7)]
    ok = counts == [(p - 1) ** p for p in range(1, 7)] == [0, 1, 8, 81, 1024, 15625]
    return Criterion(6, "fixed-point-free counts", ok, f"{counts}", {"counts": counts})


@_timed
def criterion_7() -> Criterion:
    rep = diagonal.fixed_point_counterexample(1, 2, 3)
    ok = rep.expressible and rep.delta(1) == 1
    detail = f"delta = {list(rep.delta.table)}, u = {list(rep.u.table)} equals rows {rep.matching_rows}"
    return Criterion(7, "converse (delta with a fixed point)", ok, detail, {"u": rep.u.table, "rows": rep.matching_rows})


@_timed
def criterion_8() -> Criterion:
    rng = random.Random(8)
    codec_fail = 0
    h = hashlib.sha256()
    for _ in range(10**5):
        p = random_program(rng)
        n = encode_program(p)
        codec_fail += decode_index(n) != p
        h.update(n.to_bytes((n.bit_length() + 7) // 8, "big"))
    pair_fail = 0
    for k in range(10**5):
        bits = 64 + rng.randrange(64) if k % 2 else rng.randrange(40)
        x, y = rng.getrandbits(bits), rng.getrandbits(bits)
        if k == 0:
            x = y = 0
        pair_fail += unpair(pair(x, y)) != (x, y)
    text_fail = 0
    for _ in range(10**4):
        p = random_program(rng)
        text_fail += parse_program(render_program(p)) != p
    ok = codec_fail == pair_fail == text_fail == 0
    detail = (
        f"decode.encode {10**5 - codec_fail}/100000, unpair.pair {10**5 - pair_fail}/100000, "
        f"parse.render {10**4 - text_fail}/10000"
    )
    return Criterion(8, "round-trips", ok, detail, {"indices": h.hexdigest(), "fails": [codec_fail, pair_fail, text_fail]})


@_timed
def criterion_9() -> Criterion:
    base = backaction.OscillatorSystem()
    start = time.perf_counter()
    rows = backaction.disturbance_scan(base)
    scan_time = time.perf_counter() - start
    ds = [r.disturbance for r in rows]
    monotone = all(a > b for a, b in zip(ds, ds[1:]))
    ratio = ds[-1] / ds[0]
    drift = backaction.simulate(base, 10**5 * base.step_size(), samples=10).energy_drift()
    qbase = backaction.OscillatorSystem(h=1.0)
    qrows = backaction.quantized_scan(qbase)
    e0 = 0.5 * qbase.k_obj * qbase.x_obj**2 + 0.5 * qbase.M * qbase.v_obj**2
    floor_ok = all(
        r.quantized_disturbance >= backaction.scaled_probe(qbase, r.mu).action_quantum / e0
        for r in qrows if r.readout > 0
    )
    ok = monotone and ratio < 1e-2 and drift < 1e-6 and floor_ok and scan_time < 10
    detail = (
        f"D = {', '.join(f'{d:.3g}' for d in ds)}; D(1e-4)/D(1) = {ratio:.2e}; "
        f"drift over 1e5 steps = {drift:.1e}; quantized floor holds: {floor_ok}; scan {scan_time:.1f}s"
    )
    outputs = {
        "classical": backaction.scan_csv(rows, base, backaction.default_duration(base)),
        "quantized": backaction.scan_csv(qrows, qbase, backaction.default_duration(qbase)),
        "drift": repr(drift),
    }
    return Criterion(9, "back-action", ok, detail, outputs)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="run the acceptance checks")
    parser.add_argument("--digest", action="store_true", help="print per-criterion output digests as JSON")
    parser.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    args = parser.parse_args(argv)
    chosen = [c for k, c in enumerate(CRITERIA, 1) if not args.only or k in args.only]
    results = []
    for check in chosen:
        r = check()
        results.append(r)
        if not args.digest:
            print(r.line(), flush=True)
    if args.digest:
        print(json.dumps({r.number: r.digest() for r in results}))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
