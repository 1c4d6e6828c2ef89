"""Goedel numbering of programs and Cantor pairing.

A program is serialized as one opcode byte per instruction followed by its
operands as little-endian base-128 varints.  The byte string gets a leading
sentinel byte 1 and is then read as a big-endian base-256 natural.  Decoding
is strict: a wrong sentinel, an unknown opcode, a truncated or non-canonical
varint all make the index invalid, and invalid indices compute the
nowhere-defined function.
"""

from __future__ import annotations

from math import isqrt

from .machine import SIGNATURES, BudgetExhausted, Instruction, Op, Program, RunOutcome, run

SENTINEL = 1


class _Invalid:
    """Marker returned by :func:`decode_index` for undecodable naturals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Invalid"

    def __bool__(self) -> bool:
        return False


Invalid = _Invalid()


def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def varint(n: int) -> bytes:
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def program_bytes(p: Program) -> bytes:
    """Serialized instruction stream, without the sentinel."""
    out = bytearray()
    for ins in p:
        out.append(int(ins.op))
        for a in ins.args:
            out += varint(a)
    return bytes(out)


def encode_program(p: Program) -> int:
    return int.from_bytes(bytes([SENTINEL]) + program_bytes(p), "big")


def index_bytes(n: int) -> bytes:
    return n.to_bytes((n.bit_length() + 7) // 8, "big")


def decode_bytes(data: bytes) -> Program | _Invalid:
    """Parse an instruction stream (no sentinel) exactly to its end."""
    instructions = []
    pos, end = 0, len(data)
    while pos < end:
        code = data[pos]
        pos += 1
        if code >= len(Op):
            return Invalid
        op = Op(code)
        args = []
        for _ in SIGNATURES[op]:
            value, shift, start = 0, 0, pos
            while True:
                if pos >= end:
                    return Invalid
                b = data[pos]
                pos += 1
                value |= (b & 0x7F) << shift
                shift += 7
                if b < 0x80:
                    break
            if b == 0 and pos - start > 1:
                return Invalid  # redundant zero group: not canonical
            args.append(value)
        instructions.append(Instruction(op, tuple(args)))
    return Program(instructions)


def decode_index(n: int) -> Program | _Invalid:
    if n <= 0:
        return Invalid
    data = index_bytes(n)
    if data[0] != SENTINEL:
        return Invalid
    return decode_bytes(data[1:])


def eval_index(n: int, x: int, budget: int) -> RunOutcome:
    """phi_n(x) under a step budget; invalid indices never halt."""
    if budget < 0:
        raise ValueError("budget must be a natural")
    p = decode_index(n)
    if p is Invalid:
        return BudgetExhausted(budget)
    return run(p, x, budget)
