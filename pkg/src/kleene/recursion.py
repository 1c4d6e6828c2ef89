"""Kleene fixed points, the self-describing program, and a direct quine.

For an object program f (total on the indices it receives) :func:`fixedpoint`
builds the MAC program E which on input pair(x, y)

1. decodes f into UNIV's instruction table,
2. computes d = specialize(x, x) with the inlined copier,
3. runs f on d under the inlined UNIV, giving t,
4. runs t on y under UNIV and returns the result.

With e = index(E) and n0 = specialize(e, e), step 2 reproduces n0 exactly,
so phi_{n0}(y) = phi_{f(n0)}(y).  Feeding f = const_maker gives
phi_{n0}(y) = n0 for every y.

When f preserves behaviour (identity, NOP-prepending) the construction
yields the nowhere-defined function: E keeps simulating itself.  UNIV
refuses guests that touch registers >= 2**20, which includes E's own heap,
so the regress stops at the second level in a tight self-loop instead of
burning the whole budget in nested interpretation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .encoding import Invalid, decode_index, encode_program, eval_index
from .machine import I, Program, RunOutcome
from .maclang import compile_mac, compose, relocate
from .smn import (
    DIVERGE_INDEX,
    PRELUDE_LEN,
    copier_source,
    const_maker_prog,
    smn_prefix,
    specialize,
    static_prefix,
)
from .universal import GUEST_REG_LIMIT, univ_core

DEFAULT_INPUTS = tuple(range(10))
DEFAULT_BUDGET = 10**9


class FixedPointError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# bounded extensional comparison

AGREE_HALT = "agree-halt"
DISAGREE_HALT = "disagree-halt"
BOTH_EXHAUSTED = "both-budget-exhausted"
MIXED = "mixed"


def classify(a: RunOutcome, b: RunOutcome) -> str:
    if a.halted and b.halted:
        return AGREE_HALT if a.value == b.value else DISAGREE_HALT
    if not a.halted and not b.halted:
        return BOTH_EXHAUSTED
    return MIXED


@dataclass
class ExtEqualReport:
    rows: list[tuple[int, RunOutcome, RunOutcome, str]] = field(default_factory=list)

    def count(self, kind: str) -> int:
        return sum(1 for row in self.rows if row[3] == kind)

    @property
    def disagreements(self) -> int:
        return self.count(DISAGREE_HALT)

    def to_csv(self) -> str:
        lines = ["input,left,right,class"]
        for x, a, b, kind in self.rows:
            lines.append(f"{x},{a},{b},{kind}")
        return "\n".join(lines) + "\n"


def ext_equal(a: int, b: int, inputs, budget: int) -> ExtEqualReport:
    """Sample phi_a and phi_b on ``inputs``; never claims full equality."""
    report = ExtEqualReport()
    for x in inputs:
        ra, rb = eval_index(a, x, budget), eval_index(b, x, budget)
        report.rows.append((x, ra, rb, classify(ra, rb)))
    return report


# ---------------------------------------------------------------------------
# the recursion theorem

def fixedpoint_source(f_index: int, limit: int = GUEST_REG_LIMIT) -> str:
    decode, execute = univ_core(limit)
    copier = copier_source(smn_prefix("e_x"), PRELUDE_LEN)
    return compose(
        "var e_x, e_y, e_stage, c_src",
        f"u_prog = {f_index}",
        "u_gbase = 0",
        "e_stage = 0",
        "while e_stage != 2",
        decode,
        "if e_stage == 0 then",
        "unpair(e_x, e_y, input)",
        "c_src = e_x",
        copier,
        "u_arg = c_out",
        "else",
        "u_arg = e_y",
        "end",
        execute,
        "u_prog = u_res",
        f"u_gbase = {limit}",
        "e_stage = e_stage + 1",
        "end",
        "output = u_res",
    )


@dataclass
class FixedPointResult:
    f_index: int
    n0: int
    f_n0: int
    e_index: int
    samples: list[tuple[int, RunOutcome, RunOutcome]]
    budget: int

    @property
    def report(self) -> ExtEqualReport:
        return ExtEqualReport([(x, a, b, classify(a, b)) for x, a, b in self.samples])

    @property
    def consistent(self) -> bool:
        return self.report.disagreements == 0


def fixedpoint(
    f_index: int,
    inputs=DEFAULT_INPUTS,
    budget: int = DEFAULT_BUDGET,
    f_budget: int | None = None,
) -> FixedPointResult:
    """n0 with phi_{n0} = phi_{f(n0)}, certified by sampling ``inputs``."""
    if decode_index(f_index) is Invalid:
        raise FixedPointError("f_index does not decode to a program")
    e = encode_program(compile_mac(fixedpoint_source(f_index)).instructions)
    n0 = specialize(e, e)
    f_run = eval_index(f_index, n0, f_budget or budget)
    if not f_run.halted:
        raise FixedPointError(f"f did not halt on n0 within {f_run.steps} steps")
    samples = [(x, eval_index(n0, x, budget), eval_index(f_run.value, x, budget)) for x in inputs]
    return FixedPointResult(f_index, n0, f_run.value, e, samples, budget)


def self_rep(inputs=DEFAULT_INPUTS, budget: int = DEFAULT_BUDGET) -> FixedPointResult:
    """Fixed point of y -> index([LDI 1, y; HALT]): a program printing its own index."""
    result = fixedpoint(const_maker_prog(), inputs, budget)
    for x, out, _ in result.samples:
        if not out.halted:
            raise FixedPointError(f"phi_n0({x}) ran out of budget after {out.steps} steps")
        if out.value != result.n0:
            raise FixedPointError(f"phi_n0({x}) != n0")
    return result


# ---------------------------------------------------------------------------
# bundled total transformations f

IDENTITY_SOURCE = "output = input\n"


@functools.lru_cache(maxsize=None)
def identity_prog() -> int:
    return encode_program(compile_mac(IDENTITY_SOURCE).instructions)


NOP = Program([I("MOV", 0, 0)])


def nop_prepender_source() -> str:
    return compose(
        "var c_src",
        "c_src = input",
        copier_source(static_prefix(NOP), len(NOP)),
        "output = c_out",
    )


@functools.lru_cache(maxsize=None)
def nop_prepender_prog() -> int:
    """i -> index of (MOV 0,0 ++ decode(i) shifted by one)."""
    return encode_program(compile_mac(nop_prepender_source()).instructions)


def nop_prepend(i: int) -> int:
    """Host version of :func:`nop_prepender_prog`."""
    p = decode_index(i)
    if p is Invalid:
        return DIVERGE_INDEX
    return encode_program(NOP + relocate(p, len(NOP)))


# ---------------------------------------------------------------------------
# classic quine, no UNIV involved

QUINE_BUILDER = """
# R2 holds d = index of this builder (relocated by one).  Output the index
# of [LDI 2, d] ++ builder: sentinel, LDI, 2, varint(d), then d's bytes.
var d, t, scale, acc, v, b, more
t = d
scale = 1
while t > 255
  t = t / 256
  scale = scale * 256
end
acc = 65794
v = d
more = 1
while more != 0
  b = v % 128
  v = v / 128
  if v == 0 then
    more = 0
  else
    b = b + 128
  end
  acc = acc * 256 + b
end
output = acc * scale + (d - scale)
"""


@functools.lru_cache(maxsize=None)
def direct_quine() -> int:
    builder = relocate(compile_mac(QUINE_BUILDER), 1)
    d = encode_program(builder)
    return encode_program(Program([I("LDI", 2, d)]) + builder)
