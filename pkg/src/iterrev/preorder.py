"""Explicit total preorders and the ten change operators, by definition.

This is the brute-force ground truth: every model is materialised, so it is
limited by the oracle cap.  Class lists keep whatever empty classes the
defining equations produce; ``normalize`` removes them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .formula import (
    DEFAULT_ORACLE_CAP,
    TOP,
    Alphabet,
    Formula,
    FormulaError,
    ModelSet,
    check_alphabet,
    enumerate_models,
    format_formula,
)

KINDS = ("lex", "refi", "sev", "nat", "res", "rad", "sevr", "msev", "psev", "full")
CORE_KINDS = ("lex", "refi", "sev")
REVISION_KINDS = ("lex", "nat", "res", "rad", "sevr", "msev", "psev", "full")


class InconsistentFormulaError(FormulaError):
    def __init__(self, op: "ChangeOp"):
        self.op = op
        super().__init__(f"{op.kind} by an inconsistent formula: {format_formula(op.formula)}")


class PreorderError(ValueError):
    pass


@dataclass(frozen=True)
class ChangeOp:
    kind: str
    formula: Formula

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}({format_formula(self.formula)})"


@dataclass(frozen=True)
class ChangeSequence:
    alphabet: Alphabet
    ops: tuple[ChangeOp, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            check_alphabet(op.formula, self.alphabet)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[ChangeOp]:
        return iter(self.ops)

    def __str__(self) -> str:
        return "0 " + " ".join(map(str, self.ops))


@dataclass(frozen=True)
class TotalPreorder:
    alphabet: Alphabet
    classes: tuple[ModelSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        seen = 0
        for c in self.classes:
            if c.alphabet != self.alphabet:
                raise PreorderError("class over another alphabet")
            if c.mask & seen:
                raise PreorderError("classes are not disjoint")
            seen |= c.mask
        if seen != self.alphabet.full_mask:
            raise PreorderError("classes do not cover every model")

    @classmethod
    def from_masks(cls, alphabet: Alphabet, masks: Iterable[int]) -> "TotalPreorder":
        return cls(alphabet, tuple(ModelSet(alphabet, m) for m in masks))

    @property
    def masks(self) -> list[int]:
        return [c.mask for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def __getitem__(self, k: int) -> ModelSet:
        """Class ``k``; indexes past the end denote empty classes."""
        if 0 <= k < len(self.classes):
            return self.classes[k]
        if k < 0:
            raise IndexError(k)
        return ModelSet(self.alphabet, 0)

    def rank(self, model: int) -> int:
        for k, c in enumerate(self.classes):
            if c.mask >> model & 1:
                return k
        raise PreorderError(f"model {model} not in any class")  # pragma: no cover

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.classes) + "]"


def empty_preorder(alphabet: Alphabet, cap: int = DEFAULT_ORACLE_CAP) -> TotalPreorder:
    alphabet.check_cap(cap)
    return TotalPreorder(alphabet, (ModelSet.everything(alphabet),))


def _models(C: TotalPreorder, P: Formula, cap: int) -> int:
    return enumerate_models(P, C.alphabet, cap).mask


def _min_index(masks: Sequence[int], p: int) -> int | None:
    for i, m in enumerate(masks):
        if m & p:
            return i
    return None


def min_models(C: TotalPreorder, P: Formula, cap: int = DEFAULT_ORACLE_CAP) -> ModelSet:
    p = _models(C, P, cap)
    i = _min_index(C.masks, p)
    return ModelSet(C.alphabet, 0 if i is None else C.masks[i] & p)


def base(C: TotalPreorder) -> ModelSet:
    return min_models(C, TOP)


def normalize(C: TotalPreorder) -> TotalPreorder:
    return TotalPreorder(C.alphabet, tuple(c for c in C.classes if c))


def equivalent_preorders(C1: TotalPreorder, C2: TotalPreorder) -> bool:
    if C1.alphabet != C2.alphabet:
        raise PreorderError("preorders over different alphabets")
    return normalize(C1).masks == normalize(C2).masks


# -- operators ----------------------------------------------------------------


def _union(masks: Iterable[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def _lex(c, p, full):
    return [m & p for m in c] + [m & ~p for m in c]


def _refi(c, p, full):
    out = []
    for m in c:
        out += [m & p, m & ~p]
    return out


def _sev(c, p, full, i):
    return [_union(c[: i + 1])] + c[i + 1:]


def _nat(c, p, full, i):
    return [c[i] & p] + c[:i] + [c[i] & ~p] + c[i + 1:]


def _res(c, p, full, i):
    return [c[i] & p] + _refi(c[:i], p, full) + [c[i] & ~p] + _refi(c[i + 1:], p, full)


def _rad(c, p, full):
    return [m & p for m in c] + [full & ~p]


def _sevr(c, p, full, i):
    return [c[i] & p, _union(c[: i + 1]) & ~p] + c[i + 1:]


def _msev(c, p, full, i):
    return [m & p for m in c] + [_union(c[: i + 1]) & ~p] + [m & ~p for m in c[i + 1:]]


def _psev(c, p, full, i):
    j = next((k for k in range(i + 1, len(c)) if c[k]), i + 1)
    cj = c[j] if j < len(c) else 0
    return [c[i] & p, _union(c[:i]) | (c[i] & ~p) | cj] + c[j + 1:]


def _full(c, p, full, i):
    return [c[i] & p, full & ~(c[i] & p)]


_NEEDS_INDEX = {"sev": _sev, "nat": _nat, "res": _res, "sevr": _sevr,
                "msev": _msev, "psev": _psev, "full": _full}
_NO_INDEX = {"lex": _lex, "refi": _refi, "rad": _rad}


def apply(C: TotalPreorder, op: ChangeOp, cap: int = DEFAULT_ORACLE_CAP) -> TotalPreorder:
    """``C op(P)``: the class sequence of the operator's defining equation."""
    p = _models(C, op.formula, cap)
    if not p:
        raise InconsistentFormulaError(op)
    full = C.alphabet.full_mask
    c = C.masks
    if op.kind in _NO_INDEX:
        out = _NO_INDEX[op.kind](c, p, full)
    else:
        out = _NEEDS_INDEX[op.kind](c, p, full, _min_index(c, p))
    return TotalPreorder.from_masks(C.alphabet, [m & full for m in out])


@dataclass
class OracleRun:
    final: TotalPreorder
    trace: list[TotalPreorder] = field(default_factory=list)


def run_sequence_oracle(seq: ChangeSequence | Iterable[ChangeOp],
                        alphabet: Alphabet | None = None,
                        cap: int = DEFAULT_ORACLE_CAP,
                        keep_trace: bool = False,
                        raw: bool = False) -> TotalPreorder | OracleRun:
    """Fold ``apply`` over the empty preorder.

    With ``keep_trace`` the result is an ``OracleRun`` whose trace holds the
    initial preorder followed by the preorder after every step.  Empty
    classes are dropped after each step unless ``raw`` is set: the result is
    equivalent either way, but raw class lists can double in length with
    every lex.
    """
    if isinstance(seq, ChangeSequence):
        alphabet, ops = seq.alphabet, seq.ops
    else:
        ops = tuple(seq)
        if alphabet is None:
            raise PreorderError("an alphabet is required for a bare op list")
    C = empty_preorder(alphabet, cap)
    trace = [C]
    for k, op in enumerate(ops, 1):
        try:
            C = apply(C, op, cap)
            if not raw:
                C = normalize(C)
        except ValueError as exc:
            exc.step = k
            raise
        if keep_trace:
            trace.append(C)
    if keep_trace:
        return OracleRun(C, trace)
    return C


def is_bottom_refining_instance(C: TotalPreorder, P: Formula, kind: str,
                                cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """Whether ``C kind(P)`` puts C(0)∩P first and C(0)∖P second.

    Class indexes are those of the raw defining equation (no normalisation).
    """
    p = _models(C, P, cap)
    c0 = C[0].mask
    if not c0 & p:
        raise PreorderError("C(0) has no model of the revising formula")
    out = apply(C, ChangeOp(kind, P), cap)
    return out[0].mask == c0 & p and out[1].mask == c0 & ~p
