"""Iterated belief change over total preorders, symbolically and by brute force."""
from .formula import (
    BOTTOM,
    TOP,
    Alphabet,
    Formula,
    Interpretation,
    ModelSet,
    enumerate_models,
    formula_of_models,
    parse_formula,
    render,
)
from .preorder import ChangeOp, ChangeSequence, TotalPreorder, apply, run_sequence_oracle
from .reduce import expand_op, expand_sequence
from .sat import SatBackend, entails, equivalent, is_consistent
from .symbolic import (
    CoreSequence,
    QueryTrace,
    UnderformulaCache,
    back_and_forth,
    back_bounce_forth,
    base_after,
    compute_underformulae,
    entails_after,
    longest,
    maxset,
    under,
)

__version__ = "0.1.0"
