"""Symbolic min/base computation over core sequences without building preorders.

A core sequence mixes ``lex``, ``refi`` and ``sev``.  Every query is one
traversal: walk backward from the end conjoining lex formulas that keep the
running formula consistent; at a ``sev`` whose underformula is consistent with
it, conjoin the underformula and turn around; at the start turn around
unconditionally; walking forward, conjoin the refi formulas met after the
turning point.

The underformula of a ``sev(S)`` at position p is produced by the same walk
over positions < p, starting from S, except that an inconsistent addend is
disjoined instead of skipped.  Refinements met on the way forward behave like
lex formulas placed at the very front, oldest first.

SAT budget: one traversal over k positions makes at most k + 1 calls (one per
lex or sev on the way back, one per refi on the way forward, plus the check
that the starting formula is consistent).  See ``SAT_CALL_CONSTANT``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import TOP, Formula, conj, dag_size, disj, format_formula
from .preorder import CORE_KINDS, ChangeOp, ChangeSequence, InconsistentFormulaError
from .sat import SatBackend, SolverError

# calls(entails_after) <= SAT_CALL_CONSTANT * n**2 for n >= 1 original ops,
# per-step trace bases excluded; derivation in the README.
SAT_CALL_CONSTANT = 10


class SymbolicError(ValueError):
    pass


class MissingUnderformulaError(SymbolicError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"no underformula cached for the sev at position {position}")


def _backend(backend: SatBackend | None) -> SatBackend:
    return backend if backend is not None else SatBackend()


def _require_consistent(f: Formula, kind: str, sat: SatBackend) -> None:
    if not sat.is_consistent(f):
        raise InconsistentFormulaError(ChangeOp(kind, f))


# -- the list-based constructions ------------------------------------------


def _fold_items(items: Sequence[tuple[bool, Formula]]) -> Formula:
    """Right fold of (is_conjunct, F) pairs onto ``T``.

    ``(True, F)`` contributes ``F & rest`` and ``(False, F)`` contributes
    ``F | rest``.  Runs of the same connective are flattened.
    """
    parts: deque[Formula] = deque()
    is_and = True  # empty conjunction is T
    for kind, f in reversed(items):
        if kind != is_and:
            done = conj(*parts) if is_and else disj(*parts)
            parts = deque([done])
            is_and = kind
        parts.appendleft(f)
    return conj(*parts) if is_and else disj(*parts)


def maxset(P: Formula, Ls: Iterable[Formula], backend: SatBackend | None = None) -> Formula:
    """Greedy consistent conjunction of ``P`` with ``Ls`` (newest first)."""
    sat = _backend(backend)
    _require_consistent(P, "lex", sat)
    parts = [P]
    for L in Ls:
        cand = conj(*parts, L)
        if sat.is_consistent(cand):
            parts.append(L)
    return conj(*parts)


def under(S: Formula, Ls: Iterable[Formula], backend: SatBackend | None = None) -> Formula:
    """Underformula of ``S`` over ``Ls`` (newest first)."""
    sat = _backend(backend)
    _require_consistent(S, "sev", sat)
    items: list[tuple[bool, Formula]] = []
    parts = [S]
    for L in Ls:
        ok = sat.is_consistent(conj(*parts, L))
        if ok:
            parts.append(L)
        items.append((ok, L))
    return _fold_items(items)


def longest(Ls: Sequence[Formula], backend: SatBackend | None = None) -> Formula:
    """Prefix conjunction of ``Ls`` (in the given order) up to the first clash."""
    sat = _backend(backend)
    if not Ls:
        raise SymbolicError("longest of an empty list")
    _require_consistent(Ls[0], "lex", sat)
    parts = [Ls[0]]
    for L in Ls[1:]:
        if not sat.is_consistent(conj(*parts, L)):
            break
        parts.append(L)
    return conj(*parts)


# -- traversals --------------------------------------------------------------


@dataclass
class CoreSequence:
    """A sequence over the core kinds only."""

    ops: list[ChangeOp] = field(default_factory=list)

    def __post_init__(self):
        self.ops = list(self.ops)
        for op in self.ops:
            if op.kind not in CORE_KINDS:
                raise SymbolicError(f"{op.kind} is not a core operator")

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __getitem__(self, k):
        return self.ops[k]

    def __str__(self) -> str:
        return "0 " + " ".join(map(str, self.ops))


class UnderformulaCache:
    """Underformula of each ``sev`` position, filled strictly left to right."""

    def __init__(self) -> None:
        self._b: dict[int, Formula] = {}
        self._last = -1

    def put(self, position: int, b: Formula) -> None:
        if position <= self._last:
            raise SymbolicError(
                f"underformula for position {position} after position {self._last}"
            )
        self._b[position] = b
        self._last = position

    def get(self, position: int) -> Formula:
        try:
            return self._b[position]
        except KeyError:
            raise MissingUnderformulaError(position) from None

    def __contains__(self, position: int) -> bool:
        return position in self._b

    def __len__(self) -> int:
        return len(self._b)

    def items(self):
        return sorted(self._b.items())

    def copy(self) -> "UnderformulaCache":
        out = UnderformulaCache()
        out._b = dict(self._b)
        out._last = self._last
        return out


@dataclass
class Bounce:
    """Where a traversal turned around: a sev position, or -1 for the start."""

    position: int
    sat_calls: int


def _walk(ops: Sequence[ChangeOp], start: Formula, cache: UnderformulaCache,
          sat: SatBackend, disjoin: bool) -> tuple[Formula, Bounce]:
    """Shared back/bounce/forth walk.

    With ``disjoin`` false this computes the min formula, otherwise the
    underformula of ``start`` over ``ops``.
    """
    before = sat.calls
    parts = [start]
    items: list[tuple[bool, Formula]] = []
    turn = -1
    for p in range(len(ops) - 1, -1, -1):
        op = ops[p]
        if op.kind == "refi":
            continue
        f = op.formula if op.kind == "lex" else cache.get(p)
        ok = sat.is_consistent(conj(*parts, f))
        if ok:
            parts.append(f)
        if disjoin:
            items.append((ok, f))
        if ok and op.kind == "sev":
            turn = p
            break
    for q in range(turn + 1, len(ops)):
        op = ops[q]
        if op.kind != "refi":
            continue
        ok = sat.is_consistent(conj(*parts, op.formula))
        if ok:
            parts.append(op.formula)
        if disjoin:
            items.append((ok, op.formula))
    result = _fold_items(items) if disjoin else conj(*parts)
    return result, Bounce(turn, sat.calls - before)


def back_and_forth(core: CoreSequence | Sequence[ChangeOp], P: Formula,
                   backend: SatBackend | None = None) -> Formula:
    """Min formula of ``P`` after a lex/refi-only sequence."""
    ops = list(core)
    if any(op.kind == "sev" for op in ops):
        raise SymbolicError("back_and_forth takes lex and refi only")
    sat = _backend(backend)
    _require_consistent(P, "lex", sat)
    return _walk(ops, P, UnderformulaCache(), sat, disjoin=False)[0]


def compute_underformulae(core: CoreSequence | Sequence[ChangeOp],
                          backend: SatBackend | None = None) -> UnderformulaCache:
    sat = _backend(backend)
    ops = list(core)
    cache = UnderformulaCache()
    for p, op in enumerate(ops):
        if op.kind == "sev":
            _require_consistent(op.formula, "sev", sat)
            cache.put(p, _walk(ops[:p], op.formula, cache, sat, disjoin=True)[0])
    return cache


def back_bounce_forth(core: CoreSequence | Sequence[ChangeOp], P: Formula,
                      cache: UnderformulaCache,
                      backend: SatBackend | None = None) -> Formula:
    """Formula whose models are min(core, P)."""
    sat = _backend(backend)
    _require_consistent(P, "lex", sat)
    return _walk(list(core), P, cache, sat, disjoin=False)[0]


# -- incremental engine and traces --------------------------------------------


@dataclass
class StepRecord:
    step: int
    op: ChangeOp
    base: Formula
    underformula: Formula | None
    sat_calls: int

    def as_dict(self) -> dict:
        out = {"step": self.step, "op": self.op.kind,
               "formula": format_formula(self.op.formula), "base": format_formula(self.base)}
        if self.underformula is not None:
            out["underformula"] = format_formula(self.underformula)
        out["sat_calls"] = self.sat_calls
        return out


@dataclass
class QueryTrace:
    steps: list[StepRecord] = field(default_factory=list)
    underformulae: dict[int, Formula] = field(default_factory=dict)
    bounces: list[Bounce] = field(default_factory=list)
    sat_calls: int = 0

    @property
    def bases(self) -> list[Formula]:
        return [s.base for s in self.steps]


class SymbolicEngine:
    """A growing core sequence with its underformula cache.

    Appending a ``sev`` computes its underformula immediately, so the cache
    always covers the whole sequence and is filled left to right.
    """

    def __init__(self, backend: SatBackend | None = None,
                 trace: QueryTrace | None = None):
        self.sat = _backend(backend)
        self.ops: list[ChangeOp] = []
        self.cache = UnderformulaCache()
        self.trace = trace

    @property
    def core(self) -> CoreSequence:
        return CoreSequence(self.ops)

    def underformula(self, S: Formula) -> Formula:
        """Underformula a ``sev(S)`` would get if appended now."""
        _require_consistent(S, "sev", self.sat)
        b, bounce = _walk(self.ops, S, self.cache, self.sat, disjoin=True)
        self._note(bounce)
        return b

    def min_formula(self, P: Formula) -> Formula:
        _require_consistent(P, "lex", self.sat)
        m, bounce = _walk(self.ops, P, self.cache, self.sat, disjoin=False)
        self._note(bounce)
        return m

    def base(self) -> Formula:
        return self.min_formula(TOP)

    def append(self, op: ChangeOp, underformula: Formula | None = None,
               checked: bool = False) -> Formula | None:
        """Add a core op; returns the new underformula for a ``sev``.

        ``underformula`` supplies a value already obtained from
        ``self.underformula(op.formula)``; ``checked`` skips the consistency
        check of a lex or refi formula known to be consistent.
        """
        if op.kind not in CORE_KINDS:
            raise SymbolicError(f"{op.kind} is not a core operator")
        b = None
        if op.kind == "sev":
            b = underformula if underformula is not None else self.underformula(op.formula)
            self.cache.put(len(self.ops), b)
            if self.trace is not None:
                self.trace.underformulae[len(self.ops)] = b
        elif not checked:
            _require_consistent(op.formula, op.kind, self.sat)
        self.ops.append(op)
        return b

    def extend(self, ops: Iterable[ChangeOp]) -> None:
        for op in ops:
            self.append(op)

    def copy(self) -> "SymbolicEngine":
        out = SymbolicEngine(self.sat, self.trace)
        out.ops = list(self.ops)
        out.cache = self.cache.copy()
        return out

    def _note(self, bounce: Bounce) -> None:
        if self.trace is not None:
            self.trace.bounces.append(bounce)


def underformula_sizes(cache: UnderformulaCache) -> list[int]:
    return [dag_size(b) for _, b in cache.items()]


def base_after(seq: ChangeSequence | Sequence[ChangeOp],
               backend: SatBackend | None = None,
               trace: QueryTrace | None = None,
               per_step: bool = False) -> Formula:
    """Base of the preorder obtained from the empty one by ``seq``.

    Every op is expanded into core ops on the fly.  With ``per_step`` the
    trace also records the base after every original step.
    """
    from .reduce import expand_into

    sat = _backend(backend)
    start = sat.calls
    engine = SymbolicEngine(sat, trace)
    for k, op in enumerate(seq, 1):
        before = sat.calls
        known = len(engine.cache)
        try:
            expand_into(engine, op)
        except (ValueError, SolverError) as exc:
            exc.step = k  # provenance for error reports
            raise
        new_b = engine.cache.items()[-1][1] if len(engine.cache) > known else None
        if trace is not None and per_step:
            base = engine.base()
            trace.steps.append(StepRecord(k, op, base, new_b, sat.calls - before))
    result = engine.base()
    if trace is not None:
        trace.sat_calls += sat.calls - start
    return result


def entails_after(seq: ChangeSequence | Sequence[ChangeOp], Q: Formula,
                  backend: SatBackend | None = None,
                  trace: QueryTrace | None = None) -> bool:
    sat = _backend(backend)
    b = base_after(seq, sat, trace)
    before = sat.calls
    verdict = sat.entails(b, Q)
    if trace is not None:
        trace.sat_calls += sat.calls - before
    return verdict

