import pytest
from hypothesis import given, settings, strategies as st

from iterrev.formula import (
    BOTTOM,
    TOP,
    Alphabet,
    And,
    CapExceededError,
    FormulaError,
    FormulaSyntaxError,
    Implies,
    Interpretation,
    ModelSet,
    Not,
    Or,
    UndeclaredVariableError,
    Var,
    conj,
    dag_size,
    disj,
    enumerate_models,
    evaluate,
    formula_of_models,
    parse_formula,
    render,
)

from conftest import XYZ, F, formulas

x, y, z, h = Var("x"), Var("y"), Var("z"), Var("h")


def test_parse_shapes():
    assert parse_formula("y") == y
    assert parse_formula("!x & y") == And((Not(x), y))
    assert parse_formula("x -> !h") == Implies(x, Not(h))


def test_precedence_and_associativity():
    assert parse_formula("a | b & c") == Or((Var("a"), And((Var("b"), Var("c")))))
    # right-associative implication
    assert parse_formula("a -> b -> c") == Implies(Var("a"), Implies(Var("b"), Var("c")))
    f = parse_formula("a <-> b -> c")
    assert render(f) == "a <-> b -> c"
    assert parse_formula("!!a") == Not(Not(Var("a")))
    assert parse_formula("T & F") == And((TOP, BOTTOM))


@pytest.mark.parametrize("text,pos", [("x &", 3), ("(x", 2), ("x $ y", 2), ("", 0), ("x y", 2)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position == pos


def test_undeclared_variable():
    with pytest.raises(UndeclaredVariableError) as info:
        parse_formula("x & w", XYZ)
    assert info.value.name == "w"
    assert info.value.position == 4


def test_alphabet_validation():
    with pytest.raises(FormulaError):
        Alphabet(["x", "x"])
    with pytest.raises(FormulaError):
        Alphabet(["T"])
    with pytest.raises(FormulaError):
        Alphabet(["1a"])


@given(formulas())
def test_render_parse_roundtrip(f):
    assert parse_formula(render(f)) == f


def test_enumerate_models_examples():
    A1 = Alphabet(["x"])
    assert enumerate_models(TOP, A1).mask == 0b11
    A2 = Alphabet(["x", "y"])
    ms = enumerate_models(y, A2)
    assert [i.as_dict() for i in ms] == [{"x": False, "y": True}, {"x": True, "y": True}]
    assert not enumerate_models(parse_formula("x & !x"), A1)


def test_cap():
    big = Alphabet([f"v{k}" for k in range(6)])
    with pytest.raises(CapExceededError):
        enumerate_models(TOP, big, cap=5)
    assert len(enumerate_models(TOP, big, cap=6)) == 64


def test_formula_of_models_examples():
    A2 = Alphabet(["x", "y"])
    assert formula_of_models(ModelSet(A2, 0)) == BOTTOM
    only = ModelSet.of(A2, [{"x": True, "y": True}])
    assert formula_of_models(only) == And((x, y))
    every = formula_of_models(ModelSet.everything(A2))
    assert enumerate_models(every, A2).mask == A2.full_mask


def test_empty_alphabet():
    A0 = Alphabet([])
    assert len(enumerate_models(TOP, A0)) == 1
    assert not enumerate_models(BOTTOM, A0)
    assert formula_of_models(ModelSet.everything(A0)) == TOP


@given(st.integers(min_value=0, max_value=255))
def test_models_roundtrip(mask):
    s = ModelSet(XYZ, mask)
    assert enumerate_models(formula_of_models(s), XYZ) == s


@settings(max_examples=200)
@given(formulas(), formulas())
def test_compositional_semantics(f, g):
    mf, mg = enumerate_models(f, XYZ).mask, enumerate_models(g, XYZ).mask
    assert enumerate_models(And((f, g)), XYZ).mask == mf & mg
    assert enumerate_models(Or((f, g)), XYZ).mask == mf | mg
    assert enumerate_models(Not(f), XYZ).mask == XYZ.full_mask & ~mf


@given(formulas(), st.integers(min_value=0, max_value=7))
def test_truth_table_matches_evaluate(f, m):
    i = Interpretation(XYZ, m)
    assert (m in enumerate_models(f, XYZ)) == evaluate(f, i.as_dict())


def test_conj_disj_cleanup():
    assert conj() == TOP and disj() == BOTTOM
    assert conj(x, TOP) is x
    assert conj(x, BOTTOM) == BOTTOM
    assert disj(x, TOP) == TOP
    assert conj(conj(x, y), z) == And((x, y, z))
    assert conj(x, x) is x


def test_deep_dag_is_handled_iteratively():
    f = x
    for k in range(5000):
        f = And((f, y)) if k % 2 else Or((f, z))
    assert dag_size(f) == 5003
    assert enumerate_models(f, XYZ).mask  # no recursion error


def test_interpretation_rendering():
    i = Interpretation.from_dict(XYZ, {"x": True, "y": False, "z": True})
    assert str(i) == "x&!y&z"
    assert i["x"] and not i["y"]
    assert F("x & !y & z") == i.formula()
