"""Hypothesis strategies and seeded generators shared by the tests."""

from hypothesis import strategies as st

from kleene.acceptance import random_program  # noqa: F401  seeded generator for big sweeps
from kleene.machine import SIGNATURES, Instruction, Op, Program

SLOW_OPS = {Op.MUL}


def _operand(kind, n, regs, imm):
    if kind == "r":
        return regs
    if kind == "i":
        return imm
    return st.integers(0, n)  # n itself means "fall off the end"


@st.composite
def instructions(draw, n, ops=tuple(Op), regs=st.integers(0, 7), imm=st.integers(0, 2**70)):
    op = draw(st.sampled_from(ops))
    args = tuple(draw(_operand(k, n, regs, imm)) for k in SIGNATURES[op])
    return Instruction(op, args)


@st.composite
def programs(draw, max_len=12, ops=tuple(Op), **kw):
    n = draw(st.integers(0, max_len))
    return Program([draw(instructions(n, ops, **kw)) for _ in range(n)])
