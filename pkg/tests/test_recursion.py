import random

import pytest

from kleene.encoding import Invalid, decode_index, encode_program, eval_index
from kleene.machine import BudgetExhausted, Halted
from kleene.maclang import compile_mac
from kleene.recursion import (
    AGREE_HALT,
    BOTH_EXHAUSTED,
    DISAGREE_HALT,
    MIXED,
    FixedPointError,
    classify,
    direct_quine,
    ext_equal,
    fixedpoint,
    fixedpoint_source,
    identity_prog,
    nop_prepend,
    nop_prepender_prog,
    self_rep,
)
from kleene.smn import DIVERGE_INDEX, const_maker_prog, const_program


def test_classify():
    assert classify(Halted(1), Halted(1)) == AGREE_HALT
    assert classify(Halted(1), Halted(2)) == DISAGREE_HALT
    assert classify(BudgetExhausted(5), BudgetExhausted(9)) == BOTH_EXHAUSTED
    assert classify(Halted(1), BudgetExhausted(5)) == MIXED


def test_ext_equal_never_claims_more_than_samples():
    rep = ext_equal(const_program(3), const_program(3), range(5), 100)
    assert rep.count(AGREE_HALT) == 5 and rep.disagreements == 0
    rep = ext_equal(const_program(3), const_program(4), range(5), 100)
    assert rep.disagreements == 5
    rep = ext_equal(0, DIVERGE_INDEX, range(3), 100)
    assert rep.count(BOTH_EXHAUSTED) == 3
    assert rep.to_csv().splitlines()[0] == "input,left,right,class"


# --- bundled transformations ---------------------------------------------------

def test_identity_prog():
    for i in (0, 256, 10**40):
        assert eval_index(identity_prog(), i, 10**4).value == i


def test_nop_prepender_matches_host():
    rng = random.Random(2)
    samples = [256, 1, 0, 2, const_maker_prog(), identity_prog()] + [rng.randrange(2**20) for _ in range(20)]
    for i in samples:
        assert eval_index(nop_prepender_prog(), i, 10**8).value == nop_prepend(i), i


def test_nop_prepend_preserves_behaviour():
    for y in (0, 5, 2**50):
        i = const_program(y)
        assert eval_index(nop_prepend(i), 17, 100).value == y
    assert nop_prepend(0) == DIVERGE_INDEX


# --- fixed points ------------------------------------------------------------

def test_fixedpoint_source_is_reproducible():
    f = identity_prog()
    a = encode_program(compile_mac(fixedpoint_source(f)).instructions)
    b = encode_program(compile_mac(fixedpoint_source(f)).instructions)
    assert a == b


def test_fixedpoint_rejects_invalid_f():
    with pytest.raises(FixedPointError):
        fixedpoint(0)


def test_fixedpoint_of_constant_transformation():
    # f(i) = index of "always 7" for every i, so phi_{n0} must be constantly 7
    target = const_program(7)
    f = encode_program(compile_mac(f"output = {target}").instructions)
    result = fixedpoint(f, inputs=range(3), budget=10**8)
    assert result.f_n0 == target
    assert [out.value for _, out, _ in result.samples] == [7, 7, 7]
    assert result.consistent


def test_fixedpoint_of_identity_has_no_disagreements():
    result = fixedpoint(identity_prog(), inputs=range(3), budget=10**7)
    assert result.f_n0 == result.n0
    assert result.report.disagreements == 0
    assert result.report.count(BOTH_EXHAUSTED) == 3


def test_self_rep_on_two_inputs():
    result = self_rep(inputs=range(2), budget=10**8)
    assert [out.value for _, out, _ in result.samples] == [result.n0] * 2
    assert result.f_n0 == const_program(result.n0)
    assert decode_index(result.n0) is not Invalid


def test_self_rep_reproducible():
    a = fixedpoint(const_maker_prog(), inputs=(), budget=10**6)
    b = fixedpoint(const_maker_prog(), inputs=(), budget=10**6)
    assert a.n0 == b.n0 and a.e_index == b.e_index


def test_direct_quine():
    q = direct_quine()
    for x in range(10):
        assert eval_index(q, x, 10**6).value == q
