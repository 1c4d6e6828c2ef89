import pytest
from hypothesis import given, settings, strategies as st

from kleene.corpus import UNARY, univ_corpus
from kleene.encoding import encode_program, eval_index, pair
from kleene.machine import I, Op, Program
from kleene.maclang import compile_mac
from kleene.universal import GUEST_REG_LIMIT, build_univ, univ_check, univ_source

from strategies import programs

GUEST_OPS = tuple(op for op in Op if op not in (Op.MUL, Op.LOAD, Op.STORE))


def via_univ(p, x, budget=10**6):
    index = p if isinstance(p, int) else encode_program(p)
    return eval_index(build_univ().index, pair(index, x), budget)


def test_univ_index_reproducible_from_source():
    artifact = build_univ()
    assert artifact.index == encode_program(compile_mac(univ_source()).instructions)
    assert artifact.guest_reg_limit == GUEST_REG_LIMIT


def test_halt_program():
    assert via_univ(Program([I("HALT")]), 42).value == 42


def test_empty_program_returns_input():
    assert via_univ(Program(), 42).value == 42


def test_invalid_index_diverges():
    for bad in (0, 2, 0x010C):
        assert not via_univ(bad, 5, 10**5).halted


def test_guest_self_loop_diverges():
    assert not via_univ(Program([I("JMP", 0)]), 0, 10**5).halted


def test_indirect_access_below_limit():
    p = Program([I("LDI", 5, 1000), I("STORE", 5, 1), I("LDI", 1, 0), I("LOAD", 1, 5)])
    assert via_univ(p, 77).value == 77


def test_register_beyond_limit_is_refused():
    direct = Program([I("LDI", GUEST_REG_LIMIT, 1)])
    assert not via_univ(direct, 0, 10**5).halted
    indirect = Program([I("LDI", 5, GUEST_REG_LIMIT), I("STORE", 5, 1)])
    assert not via_univ(indirect, 0, 10**5).halted


@settings(max_examples=150, deadline=None)
@given(programs(max_len=10, ops=GUEST_OPS), st.integers(0, 2**70), st.integers(0, 60))
def test_random_guests_agree(p, x, budget):
    report = univ_check([(encode_program(p), x, budget)])
    assert not report.disagreements


def test_corpus_shape():
    corpus = univ_corpus(50)
    assert len(UNARY) >= 20
    assert len(corpus) == 50 * len(UNARY)
    assert univ_corpus(3, seed=4) == univ_corpus(3, seed=4)


@pytest.mark.parametrize("prog", UNARY, ids=lambda p: p.name)
def test_corpus_program_under_univ(prog):
    corpus = [(prog.index, x, b) for (i, x, b) in univ_corpus(8, seed=1) if i == prog.index]
    report = univ_check(corpus)
    assert not report.disagreements


def test_empty_corpus():
    assert univ_check([]).rows == []


def test_host_budget_extended_when_univ_halts():
    # budget 0 stops the direct run at once; UNIV finishes the guest anyway
    row = univ_check([(256, 3, 0)]).rows[0]
    assert row.agree and row.host.value == 3


def test_overhead_constant_reported():
    report = univ_check(univ_corpus(2, seed=2))
    assert report.max_overhead_constant is not None
    assert "0 disagreements" in report.summary()
