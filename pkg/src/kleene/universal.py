"""UNIV: a universal object program with phi_UNIV(pair(e, x)) = phi_e(x).

UNIV is written in MAC (``mac/univ_decode.mac`` and ``mac/univ_exec.mac``).
It decodes e once into a heap table and then simulates the guest with guest
register r stored at heap cell r.  Guest register indices must stay below
``guest_reg_limit``; touching a register at or above it, or handing UNIV an
undecodable e, makes UNIV loop forever.  Since MAC's heap itself starts at
register 2**20, MAC programs that use ``mem`` cannot run as guests under the
default limit.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .encoding import encode_program, eval_index, index_bytes, pair
from .machine import Program, RunOutcome
from .maclang import compile_mac, compose, mac_asset

GUEST_REG_LIMIT = 1 << 20


def univ_core(limit: int = GUEST_REG_LIMIT) -> tuple[str, str]:
    """(decode, exec) MAC fragments.

    Heap layout: guest registers at [0, limit) for u_gbase = 0 and at
    [limit, 2*limit) for u_gbase = limit; instruction table from 2*limit.
    """
    subs = dict(LIMIT=limit, TABLE=2 * limit)
    return mac_asset("univ_decode.mac", **subs), mac_asset("univ_exec.mac", **subs)


def univ_source(limit: int = GUEST_REG_LIMIT) -> str:
    decode, execute = univ_core(limit)
    return compose(
        "unpair(u_prog, u_arg, input)\nu_gbase = 0\n",
        decode,
        execute,
        "output = u_res\n",
    )


@dataclass(frozen=True)
class UnivArtifact:
    program: Program
    index: int
    guest_reg_limit: int = GUEST_REG_LIMIT

    def __post_init__(self):
        assert self.index == encode_program(self.program)


@functools.lru_cache(maxsize=None)
def build_univ(guest_reg_limit: int = GUEST_REG_LIMIT) -> UnivArtifact:
    program = compile_mac(univ_source(guest_reg_limit)).instructions
    return UnivArtifact(program, encode_program(program), guest_reg_limit)


@dataclass
class UnivCheckRow:
    index: int
    input: int
    budget: int
    host: RunOutcome
    univ: RunOutcome
    program_bytes: int

    @property
    def agree(self) -> bool:
        if self.host.halted and self.univ.halted:
            return self.host.value == self.univ.value
        return self.host.halted == self.univ.halted

    @property
    def step_ratio(self) -> float | None:
        """UNIV host steps per guest step."""
        if self.host.halted and self.univ.halted and self.host.steps:
            return self.univ.steps / self.host.steps
        return None

    @property
    def overhead_constant(self) -> float | None:
        """C in univ_steps <= C * guest_steps * bytes(e)."""
        r = self.step_ratio
        return None if r is None else r / self.program_bytes


@dataclass
class UnivReport:
    rows: list[UnivCheckRow] = field(default_factory=list)

    @property
    def disagreements(self) -> list[UnivCheckRow]:
        return [r for r in self.rows if not r.agree]

    @property
    def max_overhead_constant(self) -> float | None:
        cs = [r.overhead_constant for r in self.rows if r.overhead_constant is not None]
        return max(cs, default=None)

    def summary(self) -> str:
        c = self.max_overhead_constant
        return (
            f"{len(self.rows)} cases, {len(self.disagreements)} disagreements"
            + (f", max C = {c:.2f}" if c is not None else "")
        )


def univ_check(corpus, overhead: int = 100, univ: UnivArtifact | None = None) -> UnivReport:
    """Differential check of UNIV against direct evaluation.

    ``corpus`` holds (index, input, budget) triples; the direct run gets
    ``budget`` steps and UNIV gets ``overhead * (budget + bytes(e)) + 10**5``.
    A case agrees when both halt with the same value or neither halts.  If
    UNIV halts where the direct run ran out, the guest needed more steps than
    ``budget``; since every guest step costs UNIV at least one step, the
    direct run is repeated with UNIV's step count before comparing.
    """
    univ = univ or build_univ()
    report = UnivReport()
    for e, x, budget in corpus:
        nbytes = len(index_bytes(e))
        host = eval_index(e, x, budget)
        simulated = eval_index(univ.index, pair(e, x), overhead * (budget + nbytes) + 10**5)
        if simulated.halted and not host.halted:
            host = eval_index(e, x, simulated.steps)
        report.rows.append(UnivCheckRow(e, x, budget, host, simulated, nbytes))
    return report
