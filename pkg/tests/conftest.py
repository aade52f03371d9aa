import sys
import random

import pytest
from hypothesis import strategies as st

from iterrev.formula import Alphabet, And, Const, Iff, Implies, Not, Or, Var, parse_formula
from iterrev.generate import GenConfig

XYZ = Alphabet(["x", "y", "z"])


def F(text, alphabet=XYZ):
    return parse_formula(text, alphabet)


def formulas(names=("x", "y", "z"), max_leaves=12, constants=True):
    leaves = st.sampled_from([Var(n) for n in names])
    if constants:
        leaves = leaves | st.sampled_from([Const(True), Const(False)])

    def extend(sub):
        pair = st.tuples(sub, sub)
        return st.one_of(
            sub.map(Not),
            st.lists(sub, min_size=2, max_size=3).map(lambda a: And(tuple(a))),
            st.lists(sub, min_size=2, max_size=3).map(lambda a: Or(tuple(a))),
            pair.map(lambda p: Implies(*p)),
            pair.map(lambda p: Iff(*p)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture
def xyz():
    return XYZ


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def gen3():
    return GenConfig(num_vars=3, max_depth=3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in mod.RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
