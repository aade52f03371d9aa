"""Rewriting of all ten operators into lex, refi and sev.

Auxiliary formulas (the min formula K, and the underformula K' of P) are
computed by the symbolic engine over the already expanded prefix, so no
explicit preorder is ever built.
"""
from __future__ import annotations

from typing import Iterable

from .formula import negate
from .preorder import ChangeOp, ChangeSequence, InconsistentFormulaError
from .sat import SatBackend
from .symbolic import CoreSequence, SymbolicEngine


def expand_into(engine: SymbolicEngine, op: ChangeOp) -> list[ChangeOp]:
    """Append the core expansion of ``op`` to ``engine``; return the new ops.

    Where the textbook expansion would start with ``lex`` or ``sev`` by an
    inconsistent formula, that op is dropped or replaced by an equivalent
    one (both cases are identities up to preorder equivalence).
    """
    start = len(engine.ops)
    P = op.formula
    sat = engine.sat

    def add(kind, f, **kw):
        engine.append(ChangeOp(kind, f), **kw)

    if op.kind in ("lex", "refi", "sev"):
        engine.append(op)
    elif op.kind == "nat":
        add("lex", engine.min_formula(P), checked=True)
    elif op.kind == "res":
        add("refi", P)
        add("lex", engine.min_formula(P), checked=True)
    elif op.kind == "sevr":
        add("sev", P)
        add("lex", engine.min_formula(P), checked=True)
    elif op.kind == "msev":
        add("sev", P)
        add("lex", P, checked=True)
    elif op.kind == "rad":
        if not sat.is_consistent(P):
            raise InconsistentFormulaError(op)
        notP = negate(P)
        if sat.is_consistent(notP):
            add("lex", notP, checked=True)
        add("sev", P)
        add("lex", P, checked=True)
    elif op.kind == "psev":
        K = engine.min_formula(P)
        K1 = engine.underformula(P)
        notK1 = negate(K1)
        if sat.is_consistent(notK1):
            add("sev", notK1)
        else:
            # K' valid: no class beyond the one holding min(C,P), and then
            # sev(P) lex(K) already gives [K, !K]
            add("sev", P, underformula=K1)
        add("lex", K, checked=True)
    elif op.kind == "full":
        K = engine.min_formula(P)
        notK = negate(K)
        if sat.is_consistent(notK):
            add("lex", notK, checked=True)
        add("sev", K)
        add("lex", K, checked=True)
    else:  # pragma: no cover
        raise ValueError(f"unknown operator {op.kind!r}")
    return engine.ops[start:]


def _engine_for(prefix: CoreSequence | Iterable[ChangeOp] | SymbolicEngine,
                backend: SatBackend | None) -> SymbolicEngine:
    if isinstance(prefix, SymbolicEngine):
        return prefix.copy()
    engine = SymbolicEngine(backend)
    engine.extend(prefix)
    return engine


def expand_op(prefix: CoreSequence | Iterable[ChangeOp] | SymbolicEngine,
              op: ChangeOp, backend: SatBackend | None = None) -> list[ChangeOp]:
    """Core ops that replace ``op`` after the core sequence ``prefix``."""
    return expand_into(_engine_for(prefix, backend), op)


def expand_sequence(seq: ChangeSequence | Iterable[ChangeOp],
                    backend: SatBackend | None = None) -> CoreSequence:
    engine = SymbolicEngine(backend)
    for op in seq:
        expand_into(engine, op)
    return engine.core
