import random

import pytest
from hypothesis import given, settings, strategies as st

from kleene.corpus import PAIRED
from kleene.encoding import Invalid, decode_index, encode_program, eval_index, pair, unpair
from kleene.machine import I, Program, run
from kleene.maclang import relocate
from kleene.smn import (
    DIVERGE_INDEX,
    PRELUDE_LEN,
    SpecializationRecord,
    build_smn_prog,
    const_maker_prog,
    const_program,
    prelude,
    proj_program,
    specialize,
)

from strategies import programs

B = 10**7


def smn_in_language(i, x):
    return eval_index(build_smn_prog(), pair(i, x), 10**8)


# --- prelude ---------------------------------------------------------------

@settings(max_examples=200)
@given(st.integers(0, 2**100), st.integers(0, 2**100))
def test_prelude_pairs_and_cleans_up(x, y):
    regs_after = run(prelude(x) + Program([I("HALT")]), y, 100)
    assert regs_after.value == pair(x, y)
    assert len(prelude(x)) == PRELUDE_LEN == 12


def test_prelude_leaves_scratch_registers_zero():
    # the body after the prelude must see R0, R2, R3 as zero
    probe = Program([I("ADD", 0, 2), I("ADD", 0, 3), I("MOV", 1, 0)])
    p = prelude(5) + relocate(probe, PRELUDE_LEN)
    assert run(p, 9, 100).value == 0


# --- specialize ------------------------------------------------------------

def test_add_program_example():
    add = next(p for p in PAIRED if p.name == "add")
    rng = random.Random(5)
    for _ in range(100):
        a, y = rng.randrange(10**9), rng.randrange(10**9)
        assert eval_index(specialize(add.index, a), y, 10**6).value == a + y


@pytest.mark.parametrize("prog", PAIRED, ids=lambda p: p.name)
def test_smn_law(prog):
    rng = random.Random(prog.name)
    halting = 0
    for _ in range(100):
        x, y = unpair(prog.sample(rng))
        direct = eval_index(prog.index, pair(x, y), B)
        special = eval_index(specialize(prog.index, x), y, B)
        if direct.halted and special.halted:
            assert direct.value == special.value
            halting += 1
        else:
            assert not direct.halted and not special.halted
    assert halting > 0


def test_invalid_index_specializes_to_divergence():
    assert specialize(0, 5) == DIVERGE_INDEX
    assert not eval_index(specialize(0, 5), 3, 10**5).halted


def test_total_on_small_indices():
    for i in range(10**4):
        r = specialize(i, i % 7)
        assert decode_index(r) is not Invalid


@settings(max_examples=100, deadline=None)
@given(programs(max_len=10), st.integers(0, 2**64))
def test_specialized_program_structure(p, x):
    r = decode_index(specialize(encode_program(p), x))
    assert r[:PRELUDE_LEN] == tuple(prelude(x))
    body = r[PRELUDE_LEN:]
    for a, b in zip(p, body):
        assert a.op == b.op
        assert b.target == (None if a.target is None else a.target + PRELUDE_LEN)


def test_record_is_deterministic():
    rec = SpecializationRecord.make(256, 9)
    assert rec.result_index == specialize(256, 9) == SpecializationRecord.make(256, 9).result_index


# --- SMN as an object program ----------------------------------------------

def test_smn_prog_single_point():
    assert smn_in_language(256, 0).value == specialize(256, 0)


def test_smn_prog_matches_host_on_samples():
    rng = random.Random(50)
    indices = [p.index for p in PAIRED] + [256, 1, 0, 2, 0x010C]
    for _ in range(50):
        i = rng.choice(indices) if rng.random() < 0.7 else rng.randrange(2**24)
        x = rng.getrandbits(rng.randint(0, 90))
        assert smn_in_language(i, x).value == specialize(i, x), (i, x)


def test_smn_prog_large_jump_targets():
    # targets crossing a varint byte boundary after the shift
    p = Program([I("JMP", 120)] + [I("HALT")] * 130)
    i = encode_program(p)
    assert smn_in_language(i, 3).value == specialize(i, 3)


def test_smn_prog_deterministic():
    assert smn_in_language(257, 4) == smn_in_language(257, 4)


# --- constants and projection -----------------------------------------------

@pytest.mark.parametrize("y", [0, 7, 2**20, 2**40, 10**30])
def test_const_program(y):
    for x in (0, 1, 5, 10**9):
        assert eval_index(const_program(y), x, 10).value == y


def test_const_program_injective():
    assert len({const_program(y) for y in range(10**4 + 1)}) == 10**4 + 1


def test_proj_program():
    assert eval_index(proj_program(), pair(3, 9), 10**5).value == 3
    assert eval_index(proj_program(), pair(0, 0), 10**5).value == 0
    rng = random.Random(3)
    for _ in range(100):
        m, n = rng.getrandbits(80), rng.getrandbits(80)
        assert eval_index(proj_program(), pair(m, n), 10**6).value == m


@pytest.mark.parametrize("y", list(range(201)) + [2**20, 2**40])
def test_const_maker(y):
    assert eval_index(const_maker_prog(), y, 10**6).value == const_program(y)


def test_specialized_projection_is_constant():
    # r(p, m) for the projection p(m, n) = m computes the constant m
    r = specialize(proj_program(), 42)
    assert [eval_index(r, n, 10**6).value for n in (0, 1, 99)] == [42, 42, 42]
