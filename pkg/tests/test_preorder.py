import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from iterrev.formula import (
    BOTTOM,
    TOP,
    Alphabet,
    CapExceededError,
    ModelSet,
    enumerate_models,
    formula_of_models,
)
from iterrev.generate import GenConfig, random_consistent, random_partition, random_preorder
from iterrev.preorder import (
    KINDS,
    REVISION_KINDS,
    ChangeOp,
    ChangeSequence,
    InconsistentFormulaError,
    PreorderError,
    TotalPreorder,
    apply,
    base,
    empty_preorder,
    equivalent_preorders,
    is_bottom_refining_instance,
    min_models,
    normalize,
    run_sequence_oracle,
)

from conftest import XYZ, F
from golden import CLASS_TABLE, FINAL_BASE, RUNNING

CFG = GenConfig()


def mods(text, A=XYZ):
    return enumerate_models(F(text, A), A)


def pre(A, *texts):
    return TotalPreorder(A, [mods(t, A) if t else ModelSet(A, 0) for t in texts])


def test_empty_preorder():
    assert empty_preorder(Alphabet(["x"])).masks == [0b11]
    assert len(empty_preorder(XYZ)[0]) == 8
    e0 = empty_preorder(Alphabet([]))
    assert e0.masks == [1]
    with pytest.raises(CapExceededError):
        empty_preorder(Alphabet([f"v{k}" for k in range(4)]), cap=3)


def test_partition_invariants_enforced():
    with pytest.raises(PreorderError):
        TotalPreorder.from_masks(XYZ, [0b1111])
    with pytest.raises(PreorderError):
        TotalPreorder.from_masks(XYZ, [0xFF, 0b1])


def test_min_models_examples():
    C = apply(empty_preorder(XYZ), ChangeOp("lex", F("y")))
    assert min_models(C, F("!x")) == mods("!x & y")
    assert min_models(empty_preorder(XYZ), F("x | z")) == mods("x | z")
    assert not min_models(C, BOTTOM)


def test_base_examples():
    assert base(empty_preorder(XYZ)).mask == XYZ.full_mask
    assert base(run_sequence_oracle(RUNNING)) == mods(FINAL_BASE)
    assert base(pre(XYZ, "", "T")).mask == XYZ.full_mask


def test_normalize_examples():
    assert normalize(pre(XYZ, "", "T")).masks == [XYZ.full_mask]
    C = pre(XYZ, "y", "!y")
    assert normalize(C) == C
    assert normalize(pre(XYZ, "y", "", "!y")) == C


def test_equivalence_examples():
    A1 = Alphabet(["y"])
    assert equivalent_preorders(pre(A1, "T"), pre(A1, "", "T"))
    assert not equivalent_preorders(pre(A1, "y", "!y"), pre(A1, "!y", "y"))
    C = pre(XYZ, "x", "!x")
    assert equivalent_preorders(C, C)
    with pytest.raises(PreorderError):
        equivalent_preorders(C, empty_preorder(Alphabet(["x"])))


def test_equivalence_matches_min_definition_exhaustively():
    # every preorder over 2 variables with up to 3 (possibly empty) classes
    A = Alphabet(["a", "b"])
    preorders = []
    for labels in itertools.product(range(3), repeat=4):
        masks = [0, 0, 0]
        for m, k in enumerate(labels):
            masks[k] |= 1 << m
        preorders.append(TotalPreorder.from_masks(A, masks))
    all_formulas = [formula_of_models(ModelSet(A, m)) for m in range(16)]
    for C1, C2 in itertools.combinations(preorders[::3], 2):
        by_min = all(min_models(C1, P) == min_models(C2, P) for P in all_formulas)
        assert by_min == equivalent_preorders(C1, C2)


def test_running_example_class_table():
    run = run_sequence_oracle(RUNNING, keep_trace=True)
    assert len(run.trace) == len(CLASS_TABLE)
    for C, labels in zip(run.trace, CLASS_TABLE):
        assert normalize(C).masks == [mods(t).mask for t in labels]


def test_rad_last_class_is_z_not_notz():
    final = normalize(run_sequence_oracle(RUNNING))
    assert final[len(final) - 1] == mods("z")


def test_full_from_empty():
    out = apply(empty_preorder(XYZ), ChangeOp("full", F("x | y")))
    assert out.masks == [mods("x | y").mask, mods("!(x | y)").mask]


def test_oracle_sequences():
    assert run_sequence_oracle(ChangeSequence(XYZ, [])) == empty_preorder(XYZ)
    A1 = Alphabet(["x"])
    C = run_sequence_oracle(ChangeSequence(A1, [ChangeOp("lex", F("x", A1)),
                                                 ChangeOp("lex", F("!x", A1))]))
    assert normalize(C).masks == [mods("!x", A1).mask, mods("x", A1).mask]
    with pytest.raises(PreorderError):
        run_sequence_oracle([ChangeOp("lex", F("x"))])


@pytest.mark.parametrize("kind", KINDS)
def test_inconsistent_formula_rejected(kind):
    with pytest.raises(InconsistentFormulaError):
        apply(empty_preorder(XYZ), ChangeOp(kind, F("x & !x")))


def test_unknown_kind():
    with pytest.raises(ValueError):
        ChangeOp("irr", TOP)


def test_sev_definition_by_hand():
    C = pre(XYZ, "x & y", "x & !y", "!x")
    out = apply(C, ChangeOp("sev", F("!y")))
    assert out.masks == [mods("x").mask, mods("!x").mask]


def test_psev_definition_by_hand():
    # i = 0, j is the next non-empty class (index 2)
    C = pre(XYZ, "x & y", "", "x & !y", "!x")
    out = apply(C, ChangeOp("psev", F("y")))
    assert out.masks == [mods("x & y").mask, mods("x & !y").mask, mods("!x").mask]


def test_res_definition_by_hand():
    C = pre(XYZ, "y", "!y")
    out = normalize(apply(C, ChangeOp("res", F("!x"))))
    assert out.masks == [mods(t).mask for t in ["!x & y", "x & y", "!x & !y", "x & !y"]]


@pytest.mark.parametrize("kind", ["nat", "res", "sevr"])
def test_bottom_refining_kinds(kind):
    rng = random.Random(kind)
    for _ in range(60):
        C = random_preorder(rng, XYZ, CFG)
        P = random_consistent(rng, XYZ, CFG)
        if C[0].mask & enumerate_models(P, XYZ).mask:
            assert is_bottom_refining_instance(C, P, kind)


def test_bottom_refining_lex_example_and_precondition():
    A2 = Alphabet(["x", "y"])
    assert is_bottom_refining_instance(empty_preorder(A2), F("x", A2), "lex")
    with pytest.raises(PreorderError):
        is_bottom_refining_instance(pre(XYZ, "x", "!x"), F("!x"), "nat")


preorders3 = st.builds(lambda seed: random_partition(random.Random(seed), XYZ),
                       st.integers(0, 10**9))
formulas3 = st.builds(lambda seed: random_consistent(random.Random(seed), XYZ, CFG),
                      st.integers(0, 10**9))


@settings(max_examples=150)
@given(preorders3, formulas3, st.sampled_from(KINDS))
def test_apply_preserves_partition(C, P, kind):
    out = apply(C, ChangeOp(kind, P))  # constructor checks disjoint and exhaustive
    assert sum(len(c) for c in out.classes) == 8


@settings(max_examples=150)
@given(preorders3, formulas3, st.sampled_from(REVISION_KINDS))
def test_revision_base_law(C, P, kind):
    assert base(apply(C, ChangeOp(kind, P))) == min_models(C, P)


def _strictly_before(C, a, b):
    return C.rank(a) < C.rank(b)


@settings(max_examples=100)
@given(preorders3, formulas3)
def test_refinement_and_sev_never_reverse(C, P):
    R = apply(C, ChangeOp("refi", P))
    S = apply(C, ChangeOp("sev", P))
    for a, b in itertools.permutations(range(8), 2):
        if _strictly_before(C, a, b):
            assert _strictly_before(R, a, b)
            assert not _strictly_before(S, b, a)


@settings(max_examples=100)
@given(preorders3, formulas3, st.sampled_from(KINDS), st.integers(0, 10**6))
def test_equivalence_congruence(C, P, kind, seed):
    # pad with empty classes at random places to get an equivalent preorder
    rng = random.Random(seed)
    masks = []
    for m in C.masks:
        masks += [0] * rng.randint(0, 2) + [m]
    C2 = TotalPreorder.from_masks(XYZ, masks)
    assert equivalent_preorders(C, C2)
    assert equivalent_preorders(apply(C, ChangeOp(kind, P)), apply(C2, ChangeOp(kind, P)))
