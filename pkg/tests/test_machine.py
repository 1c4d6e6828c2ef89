import pytest
from hypothesis import given, settings, strategies as st

from kleene.machine import (
    BudgetExhausted,
    Halted,
    I,
    Instruction,
    Op,
    ParseError,
    Program,
    parse_program,
    render_program,
    run,
    run_reference,
)

from strategies import SLOW_OPS, programs

FAST_OPS = tuple(op for op in Op if op not in SLOW_OPS)


def P(*ins):
    return Program(list(ins))


# --- semantics ------------------------------------------------------------

def test_empty_program_halts_immediately_returning_input():
    assert run(P(), 7, 10) == Halted(7, 0)


def test_halt_costs_one_step():
    assert run(P(I("HALT")), 3, 1) == Halted(3, 1)
    assert run(P(I("HALT")), 3, 0) == BudgetExhausted(0)


def test_monus_floors_at_zero():
    p = P(I("LDI", 2, 5), I("SUB", 1, 2))
    assert run(p, 3, 10).value == 0
    assert run(p, 9, 10).value == 4


@pytest.mark.parametrize("op", ["DIV", "MOD"])
def test_division_by_zero_gives_zero(op):
    assert run(P(I(op, 1, 2)), 17, 10).value == 0


def test_div_mod():
    assert run(P(I("LDI", 2, 5), I("DIV", 1, 2)), 17, 10).value == 3
    assert run(P(I("LDI", 2, 5), I("MOD", 1, 2)), 17, 10).value == 2


def test_indirect_load_and_store():
    # R[R5] <- R1 with R5 = 40, then R1 <- R[R6] with R6 = 40
    p = P(I("LDI", 5, 40), I("STORE", 5, 1), I("LDI", 1, 0), I("LDI", 6, 40), I("LOAD", 1, 6))
    assert run(p, 99, 100).value == 99


def test_store_to_huge_register():
    p = P(I("LDI", 5, 10**30), I("STORE", 5, 1), I("LDI", 1, 0), I("LOAD", 1, 5))
    assert run(p, 4, 100).value == 4


def test_jump_out_of_range_halts():
    assert run(P(I("JMP", 50)), 8, 10) == Halted(8, 1)


def test_self_loop_exhausts_whole_budget():
    assert run(P(I("JMP", 0)), 0, 10**12) == BudgetExhausted(10**12)
    assert run_reference(P(I("JMP", 0)), 0, 1000) == BudgetExhausted(1000)


def test_countdown_loop():
    # R1 <- 2 * input by repeated increments
    p = parse_program(
        """
        LDI 3, 1
        MOV 2, 1
    loop:
        JZ 2, done
        ADD 1, 3
        SUB 2, 3
        JMP loop
    done:
        HALT
        """
    )
    assert run(p, 25, 10**4).value == 50
    assert run(p, 25, 10**4) == run_reference(p, 25, 10**4)


# --- fast interpreter against the reference stepper ------------------------

@settings(max_examples=300, deadline=None)
@given(programs(ops=FAST_OPS), st.integers(0, 2**80), st.integers(0, 400))
def test_fast_run_matches_reference(p, x, budget):
    assert run(p, x, budget) == run_reference(p, x, budget)


@settings(max_examples=150, deadline=None)
@given(programs(max_len=8), st.integers(0, 2**20), st.integers(0, 14))
def test_fast_run_matches_reference_with_mul(p, x, budget):
    assert run(p, x, budget) == run_reference(p, x, budget)


@settings(max_examples=100, deadline=None)
@given(programs(ops=FAST_OPS), st.integers(0, 1000), st.integers(0, 300), st.integers(0, 300))
def test_budget_monotone(p, x, b1, b2):
    lo, hi = sorted((b1, b2))
    small, big = run(p, x, lo), run(p, x, hi)
    if small.halted:
        assert big == small
    assert big.steps >= small.steps


@settings(max_examples=50, deadline=None)
@given(programs(ops=FAST_OPS), st.integers(0, 1000))
def test_deterministic(p, x):
    assert run(p, x, 500) == run(p, x, 500)


# --- assembly --------------------------------------------------------------

def test_parse_smallest_program():
    assert parse_program("HALT") == P(I("HALT"))


def test_parse_labels_comments_and_case():
    p = parse_program("start: ldi 1, 3 ; three\n  jz 1, start\nend: jmp end\n")
    assert p == P(I("LDI", 1, 3), I("JZ", 1, 0), I("JMP", 2))


def test_parse_forward_label_and_numeric_target():
    assert parse_program("JMP out\nHALT\nout:") == P(I("JMP", 2), I("HALT"))
    assert parse_program("JMP 7") == P(I("JMP", 7))


@pytest.mark.parametrize(
    "text, line",
    [
        ("FOO 1", 1),
        ("HALT\nLDI 1", 2),
        ("MOV 1, x", 1),
        ("JMP nowhere", 1),
        ("a:\na:\nHALT", 2),
        ("LDI 1, 2, 3", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert info.value.line == line


def test_render_then_parse_example():
    p = P(I("LDI", 1, 2**100), I("JZ", 1, 0), I("HALT"))
    assert parse_program(render_program(p)) == p


@settings(max_examples=300, deadline=None)
@given(programs(max_len=20, regs=st.integers(0, 10**6)))
def test_parse_render_round_trip(p):
    assert parse_program(render_program(p)) == p


def test_instruction_validation():
    with pytest.raises(ValueError):
        Instruction(Op.ADD, (1,))
    with pytest.raises(ValueError):
        I("LDI", 1, -1)
    assert I("JZ", 3, 9).target == 9
    assert I("ADD", 3, 9).target is None
