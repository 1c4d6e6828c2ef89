"""s-m-n specialization r(i, x) on the host and as an object program.

``specialize(i, x)`` prepends a fixed 12-instruction prelude that replaces
R1 by pair(x, R1) (with x as an immediate) and shifts the body's jump
targets past it.  The object program built by :func:`build_smn_prog` runs
the same algorithm on the byte level and returns the same natural.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .encoding import Invalid, decode_index, encode_program, program_bytes, varint
from .machine import I, Program
from .maclang import compile_mac, mac_asset, relocate

DIVERGE_PROGRAM = Program([I("JMP", 0)])
DIVERGE_INDEX = encode_program(DIVERGE_PROGRAM)


def prelude(x: int) -> Program:
    """R1 <- pair(x, R1); leaves R0, R2, R3 zero again."""
    return Program([
        I("LDI", 2, x),
        I("ADD", 2, 1),
        I("MOV", 3, 2),
        I("LDI", 0, 1),
        I("ADD", 3, 0),
        I("MUL", 2, 3),
        I("LDI", 0, 2),
        I("DIV", 2, 0),
        I("ADD", 1, 2),
        I("LDI", 0, 0),
        I("LDI", 2, 0),
        I("LDI", 3, 0),
    ])


PRELUDE_LEN = len(prelude(0))


@dataclass(frozen=True)
class SpecializationRecord:
    source_index: int
    hardwired: int
    result_index: int

    @classmethod
    def make(cls, i: int, x: int) -> "SpecializationRecord":
        return cls(i, x, specialize(i, x))


def specialize(i: int, x: int) -> int:
    """r(i, x): an index with phi_{r(i,x)}(y) = phi_i(pair(x, y))."""
    p = decode_index(i)
    if p is Invalid:
        return DIVERGE_INDEX
    return encode_program(prelude(x) + relocate(p, PRELUDE_LEN))


def _fold(data: bytes) -> int:
    return int.from_bytes(data, "big")


def smn_prefix(x_var: str) -> str:
    """MAC statements leaving sentinel + prelude(x_var) folded in c_acc."""
    head = bytes([1]) + program_bytes(Program([I("LDI", 2, 0)]))[:2]
    tail = program_bytes(Program(prelude(0).instructions[1:]))
    return f"""
c_acc = {_fold(head)}
c_v = {x_var}
c_more = 1
while c_more != 0
  c_b = c_v % 128
  c_v = c_v / 128
  if c_v == 0 then
    c_more = 0
  else
    c_b = c_b + 128
  end
  c_acc = c_acc * 256 + c_b
end
c_acc = c_acc * {256 ** len(tail)} + {_fold(tail)}
"""


def static_prefix(p: Program) -> str:
    """MAC statement folding the sentinel and a constant program into c_acc."""
    return f"c_acc = {_fold(bytes([1]) + program_bytes(p))}"


def copier_source(prefix: str, offset: int) -> str:
    return mac_asset("copier.mac", PREFIX=prefix, OFFSET=offset, DIVERGE=DIVERGE_INDEX)


def smn_source() -> str:
    """Standalone SMN: pair(i, x) -> specialize(i, x)."""
    return (
        "var c_src, s_x\n"
        "unpair(c_src, s_x, input)\n"
        + copier_source(smn_prefix("s_x"), PRELUDE_LEN)
        + "output = c_out\n"
    )


@functools.lru_cache(maxsize=None)
def build_smn_prog() -> int:
    return encode_program(compile_mac(smn_source()).instructions)


def const_program(y: int) -> int:
    """Index of [LDI 1, y; HALT]: phi(x) = y for every x."""
    return encode_program(Program([I("LDI", 1, y), I("HALT")]))


PROJ_SOURCE = """
var rest
unpair(output, rest, input)
"""


@functools.lru_cache(maxsize=None)
def proj_program() -> int:
    """Index of a program computing pair(m, n) -> m."""
    return encode_program(compile_mac(PROJ_SOURCE).instructions)


def const_maker_source() -> str:
    head = bytes([1]) + program_bytes(Program([I("LDI", 1, 0)]))[:2]
    return f"""
# y -> index of [LDI 1, y; HALT]
var y, acc, b, more
y = input
acc = {_fold(head)}
more = 1
while more != 0
  b = y % 128
  y = y / 128
  if y == 0 then
    more = 0
  else
    b = b + 128
  end
  acc = acc * 256 + b
end
output = acc * 256 + {int(program_bytes(Program([I("HALT")]))[0])}
"""


@functools.lru_cache(maxsize=None)
def const_maker_prog() -> int:
    return encode_program(compile_mac(const_maker_source()).instructions)
