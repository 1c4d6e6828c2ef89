"""Command-line entry point: ``kleene <subcommand> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.  Results go
to stdout (or ``--output``) only on success; everything else goes to stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import backaction, diagonal, encoding, recursion, smn
from .corpus import univ_corpus
from .machine import ParseError, parse_program, render_program, run
from .maclang import MacError, compile_mac
from .universal import univ_check

DEFAULT_BUDGET = 10**7

BUILTIN_F = {
    "identity": recursion.identity_prog,
    "nop-prepender": recursion.nop_prepender_prog,
    "const-maker": smn.const_maker_prog,
}


class CheckFailed(Exception):
    """A verification ran to completion and found a problem."""

    def __init__(self, report: str):
        super().__init__(report)
        self.report = report


class UsageError(Exception):
    pass


def natural(text: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return int(text)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_index(arg: str) -> int:
    """A decimal literal, or a file holding one."""
    text = arg if arg.strip().isdigit() else _read_text(arg)
    try:
        return natural(text)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{arg}: {exc}") from None


def _load_program(path: str, mac: bool):
    text = _read_text(path)
    if mac or path.endswith(".mac"):
        return compile_mac(text).instructions
    return parse_program(text)


# ---------------------------------------------------------------------------
# subcommands; each returns the text for the result stream


def cmd_run(args) -> str:
    p = _load_program(args.file, args.mac)
    return f"{run(p, args.input, args.budget)}\n"


def cmd_encode(args) -> str:
    return f"{encoding.encode_program(_load_program(args.file, args.mac))}\n"


def cmd_decode(args) -> str:
    p = encoding.decode_index(_read_index(args.index))
    if p is encoding.Invalid:
        return "invalid index (nowhere-defined function)\n"
    return render_program(p) + "\n"


def cmd_specialize(args) -> str:
    return f"{smn.specialize(_read_index(args.i), _read_index(args.x))}\n"


def cmd_univ_check(args) -> str:
    report = univ_check(univ_corpus(args.inputs, args.seed), overhead=args.overhead)
    text = report.summary() + "\n"
    if report.disagreements:
        raise CheckFailed(text)
    return text


def cmd_fixedpoint(args) -> str:
    f = BUILTIN_F[args.f]() if args.f in BUILTIN_F else _read_index(args.f)
    if encoding.decode_index(f) is encoding.Invalid:
        raise UsageError(f"{args.f} is not a valid program index")
    try:
        result = recursion.fixedpoint(f, range(args.inputs), args.budget)
    except recursion.FixedPointError as exc:
        raise CheckFailed(f"{exc}\n") from None
    text = f"{result.n0}\n" + result.report.to_csv()
    if not result.consistent:
        raise CheckFailed(text)
    return text


def cmd_quine(args) -> str:
    inputs = range(10)
    if args.direct:
        n0 = recursion.direct_quine()
        outs = [encoding.eval_index(n0, x, args.budget) for x in inputs]
    else:
        try:
            result = recursion.fixedpoint(smn.const_maker_prog(), inputs, args.budget)
        except recursion.FixedPointError as exc:
            raise CheckFailed(f"{exc}\n") from None
        n0 = result.n0
        outs = [out for _, out, _ in result.samples]
    ok = sum(1 for out in outs if out.halted and out.value == n0)
    text = f"{n0}\nverified {ok}/{len(outs)} inputs\n"
    if ok != len(outs):
        raise CheckFailed(text)
    return text


def cmd_diagonal(args) -> str:
    s, p = args.s, args.p
    if args.exhaustive:
        report = diagonal.exhaustive_unexpressibility(s, p)
        text = report.summary() + "\n"
        if report.violations or report.diagonal_failures:
            raise CheckFailed(text)
        return text
    if args.counterexample is not None:
        ce = diagonal.fixed_point_counterexample(args.counterexample, s, p)
        text = (
            f"delta = {list(ce.delta.table)}\n"
            f"u = {list(ce.u.table)}\n"
            f"rows equal to u: {ce.matching_rows}\n"
        )
        if not ce.expressible:
            raise CheckFailed(text)
        return text
    if args.table:
        g = diagonal.read_table_csv(_read_text(args.table), p)
    else:
        rng = random.Random(args.seed)
        g = diagonal.OutcomeTable(s, p, [[rng.randrange(p) for _ in range(s)] for _ in range(s)])
    delta = diagonal.read_delta_csv(_read_text(args.delta)) if args.delta else diagonal.cyclic_shift(p)
    if args.measurement:
        return str(diagonal.measurement_report(g, delta)) + "\n"
    return diagonal.diag_witness(g, delta).to_csv()


def cmd_backaction(args) -> str:
    base = backaction.OscillatorSystem(
        M=args.M, k_obj=args.k_obj, k_probe=args.k_probe, k_c=args.k_c,
        x_obj=args.amplitude, dt=args.dt, h=args.h if args.quantized else 0.0,
    )
    T = args.periods * base.object_period()
    scan = backaction.quantized_scan if args.quantized else backaction.disturbance_scan
    return backaction.scan_csv(scan(base, args.mu, T), base, T)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=natural, default=DEFAULT_BUDGET, help="step budget per run (default 10^7)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="kleene", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("run", parents=[common], help="assemble (or compile) and execute a program")
    p.add_argument("file", help="assembly file, or MAC source with --mac / .mac suffix; '-' for stdin")
    p.add_argument("--input", type=natural, default=0)
    p.add_argument("--mac", action="store_true", help="treat the file as MAC source")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("encode", parents=[common], help="print the index of a program")
    p.add_argument("file")
    p.add_argument("--mac", action="store_true")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="print the program with a given index")
    p.add_argument("index", help="decimal index or a file containing one")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("specialize", parents=[common], help="index of i with its first argument fixed to x")
    p.add_argument("i")
    p.add_argument("x")
    p.set_defaults(func=cmd_specialize)

    p = sub.add_parser("univ-check", parents=[common], help="compare UNIV with direct execution on the corpus")
    p.add_argument("--inputs", type=natural, default=50, help="random inputs per program")
    p.add_argument("--overhead", type=natural, default=100)
    p.set_defaults(func=cmd_univ_check)

    p = sub.add_parser("fixedpoint", parents=[common], help="fixed point n0 of a total index transformation")
    p.add_argument("f", help=f"index file, decimal index, or one of {', '.join(BUILTIN_F)}")
    p.add_argument("--inputs", type=natural, default=10, help="certify on inputs 0..N-1")
    p.set_defaults(func=cmd_fixedpoint)

    p = sub.add_parser("quine", parents=[common], help="program that outputs its own index")
    p.add_argument("--direct", action="store_true", help="hand-built quine instead of the fixed point")
    p.set_defaults(func=cmd_quine)

    p = sub.add_parser("diagonal", parents=[common], help="finite diagonalization")
    p.add_argument("--s", type=natural, required=True)
    p.add_argument("--p", type=natural, required=True)
    p.add_argument("--exhaustive", action="store_true", help="check every table and every delta")
    p.add_argument("--counterexample", type=natural, metavar="P_STAR", help="use a delta that fixes P_STAR")
    p.add_argument("--table", help="CSV of g, one row per a2")
    p.add_argument("--delta", help="CSV of delta values")
    p.add_argument("--measurement", action="store_true", help="report in measurement terms")
    p.set_defaults(func=cmd_diagonal)

    p = sub.add_parser("backaction", help="coupled-oscillator back-action")
    bsub = p.add_subparsers(dest="action", required=True, metavar="action")
    q = bsub.add_parser("scan", parents=[common], help="disturbance versus probe mass ratio")
    q.add_argument("--quantized", action="store_true")
    q.add_argument("--mu", type=float, nargs="+", default=list(backaction.DEFAULT_MUS))
    q.add_argument("--M", type=float, default=1.0)
    q.add_argument("--k-obj", type=float, default=1.0)
    q.add_argument("--k-probe", type=float, default=1.0)
    q.add_argument("--k-c", type=float, default=0.05)
    q.add_argument("--amplitude", type=float, default=1.0)
    q.add_argument("--periods", type=float, default=backaction.DEFAULT_PERIODS)
    q.add_argument("--dt", type=float, default=None)
    q.add_argument("--h", type=float, default=1.0, help="action quantum (used with --quantized)")
    q.set_defaults(func=cmd_backaction)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except CheckFailed as exc:
        sys.stderr.write(exc.report)
        return 1
    except (UsageError, ParseError, MacError, ValueError) as exc:
        print(f"kleene {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"kleene {args.command}: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
