import random

import pytest
from hypothesis import given, settings, strategies as st

from iterrev.formula import TOP, enumerate_models
from iterrev.generate import GenConfig, random_consistent, random_sequence
from iterrev.preorder import (
    ChangeOp,
    ChangeSequence,
    InconsistentFormulaError,
    KINDS,
    base,
    equivalent_preorders,
    run_sequence_oracle,
)
from iterrev.reduce import expand_op, expand_sequence
from iterrev.sat import equivalent
from iterrev.symbolic import CoreSequence, SymbolicEngine, base_after

from conftest import XYZ, F
from golden import CORE, RUNNING

CFG = GenConfig()


def ops_equal(got, expected):
    assert [op.kind for op in got] == [k for k, _ in expected]
    for op, (_, text) in zip(got, expected):
        assert equivalent(op.formula, F(text)), (str(op), text)


def test_expand_nat_example():
    got = expand_op([ChangeOp("lex", F("y"))], ChangeOp("nat", F("!x")))
    ops_equal(got, [("lex", "!x & y")])


def test_expand_res_example():
    prefix = [ChangeOp("lex", F("y")), ChangeOp("lex", F("!x & y"))]
    got = expand_op(prefix, ChangeOp("res", F("x & z")))
    ops_equal(got, [("refi", "x & z"), ("lex", "x & y & z")])


def test_expand_rad_example():
    got = expand_op([ChangeOp("lex", F("x"))], ChangeOp("rad", F("!z")))
    ops_equal(got, [("lex", "z"), ("sev", "!z"), ("lex", "!z")])


def test_expand_running_example():
    ops_equal(list(expand_sequence(RUNNING)), CORE)


def test_all_lex_is_fixpoint():
    seq = ChangeSequence(XYZ, [ChangeOp("lex", F(t)) for t in ["x", "y | z", "!x"]])
    assert list(expand_sequence(seq)) == list(seq)


def test_full_from_empty():
    got = expand_op([], ChangeOp("full", F("x | y")))
    ops_equal(got, [("lex", "!(x | y)"), ("sev", "x | y"), ("lex", "x | y")])


def test_degenerate_auxiliary_formulas():
    # rad(T): lex(F) is dropped
    ops_equal(expand_op([], ChangeOp("rad", TOP)), [("sev", "T"), ("lex", "T")])
    # full by a formula whose min is everything
    ops_equal(expand_op([], ChangeOp("full", F("x | !x"))), [("sev", "T"), ("lex", "T")])
    # psev from the empty preorder: K' is valid, so sev(P) replaces sev(!K')
    ops_equal(expand_op([], ChangeOp("psev", F("x"))), [("sev", "x"), ("lex", "x")])


def test_prefix_may_be_an_engine_and_is_not_mutated():
    e = SymbolicEngine()
    e.append(ChangeOp("lex", F("y")))
    expand_op(e, ChangeOp("sevr", F("!y")))
    assert len(e.ops) == 1


def test_inconsistent_op_formula():
    for kind in KINDS:
        with pytest.raises(InconsistentFormulaError):
            expand_op([ChangeOp("lex", F("y"))], ChangeOp(kind, F("x & !x")))


def test_expansion_is_a_left_fold():
    rng = random.Random(2)
    for _ in range(30):
        seq = random_sequence(rng, CFG)
        full = list(expand_sequence(seq))
        shorter = list(expand_sequence(ChangeSequence(XYZ, seq.ops[:-1])))
        assert [str(o) for o in full[:len(shorter)]] == [str(o) for o in shorter]


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_local_replacement_soundness(seed):
    seq = random_sequence(random.Random(seed), CFG)
    core = expand_sequence(seq)
    assert isinstance(core, CoreSequence)
    assert equivalent_preorders(run_sequence_oracle(seq), run_sequence_oracle(list(core), XYZ))
