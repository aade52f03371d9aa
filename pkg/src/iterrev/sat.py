"""Consistency, entailment and equivalence checks with call counting.

The builtin backend runs DPLL over a Tseitin encoding.  Gate clauses encode
full equivalences, so once every input variable is fixed unit propagation
decides every gate; branching on inputs first therefore bounds the search
by 2^|inputs| leaves regardless of formula size.
"""
from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field

from .formula import And, Const, Formula, Iff, Implies, Not, Or, Var, conj, negate, postorder

SOLVER_ENV = "ITERREV_SOLVER"


class SolverError(RuntimeError):
    """The external solver failed; distinct from an UNSAT verdict."""


# -- Tseitin encoding --------------------------------------------------------


@dataclass
class CNF:
    num_vars: int
    clauses: list[list[int]]
    var_map: dict[str, int]
    num_inputs: int = 0

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


def tseitin(f: Formula, names: list[str] | None = None) -> CNF:
    """Equisatisfiable CNF of ``f``; input variables get the lowest indices.

    ``names`` fixes the numbering of input variables (extra names are
    allowed); by default variables are numbered by first occurrence.
    """
    nodes = postorder(f)
    var_map: dict[str, int] = {}
    for name in names or ():
        var_map.setdefault(name, len(var_map) + 1)
    for node in nodes:
        if isinstance(node, Var):
            var_map.setdefault(node.name, len(var_map) + 1)
    next_var = len(var_map) + 1
    num_inputs = len(var_map)
    clauses: list[list[int]] = []
    lit: dict[int, int] = {}
    true_lit = 0

    for node in nodes:
        if isinstance(node, Var):
            lit[id(node)] = var_map[node.name]
            continue
        if isinstance(node, Const):
            if not true_lit:
                true_lit = next_var
                next_var += 1
                clauses.append([true_lit])
            lit[id(node)] = true_lit if node.value else -true_lit
            continue
        if isinstance(node, Not):
            lit[id(node)] = -lit[id(node.arg)]
            continue
        kids = [lit[id(c)] for c in node.children()]
        if isinstance(node, (And, Or)) and len(kids) == 1:
            lit[id(node)] = kids[0]
            continue
        g = next_var
        next_var += 1
        lit[id(node)] = g
        if isinstance(node, And):
            if not kids:
                clauses.append([g])
            for k in kids:
                clauses.append([-g, k])
            clauses.append([g] + [-k for k in kids])
        elif isinstance(node, Or):
            if not kids:
                clauses.append([-g])
            for k in kids:
                clauses.append([g, -k])
            clauses.append([-g] + kids)
        elif isinstance(node, Implies):
            a, b = kids
            clauses += [[-g, -a, b], [g, a], [g, -b]]
        elif isinstance(node, Iff):
            a, b = kids
            clauses += [[-g, -a, b], [-g, a, -b], [g, a, b], [g, -a, -b]]
        else:  # pragma: no cover
            raise TypeError(f"unknown formula node {node!r}")

    clauses.append([lit[id(f)]])
    clauses = [c for c in clauses if not _tautology(c)]
    return CNF(next_var - 1, clauses, var_map, num_inputs)


def _tautology(clause: list[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


def export_dimacs(f: Formula, names: list[str] | None = None) -> tuple[str, dict[str, int]]:
    cnf = tseitin(f, names)
    return cnf.to_dimacs(), dict(cnf.var_map)


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(current)
                current = []
            else:
                current.append(v)
    if current:
        clauses.append(current)
    return num_vars, clauses


# -- DPLL --------------------------------------------------------------------


def dpll(num_vars: int, clauses: list[list[int]]) -> bool:
    """Complete DPLL with two-watched-literal unit propagation.

    Decisions go in index order, so a Tseitin CNF branches on inputs first.
    """
    value = [0] * (num_vars + 1)  # 0 unassigned, 1 true, -1 false
    watches: dict[int, list[int]] = {}
    units: list[int] = []
    cls: list[list[int]] = []
    for c in clauses:
        c = list(dict.fromkeys(c))
        if not c:
            return False
        if len(c) == 1:
            units.append(c[0])
            continue
        idx = len(cls)
        cls.append(c)
        watches.setdefault(c[0], []).append(idx)
        watches.setdefault(c[1], []).append(idx)

    trail: list[int] = []

    def val(l: int) -> int:
        v = value[l if l > 0 else -l]
        return v if l > 0 else -v

    def assign(l: int) -> None:
        value[l if l > 0 else -l] = 1 if l > 0 else -1
        trail.append(l)

    def propagate(start: int) -> bool:
        head = start
        while head < len(trail):
            falsified = -trail[head]
            head += 1
            watching = watches.get(falsified)
            if not watching:
                continue
            keep = []
            conflict = False
            for idx in watching:
                if conflict:
                    keep.append(idx)
                    continue
                c = cls[idx]
                if c[0] == falsified:
                    c[0], c[1] = c[1], c[0]
                if val(c[0]) == 1:
                    keep.append(idx)
                    continue
                for k in range(2, len(c)):
                    if val(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches.setdefault(c[1], []).append(idx)
                        break
                else:
                    keep.append(idx)
                    other = val(c[0])
                    if other == -1:
                        conflict = True
                    elif other == 0:
                        assign(c[0])
            watches[falsified] = keep
            if conflict:
                return False
        return True

    for u in units:
        v = val(u)
        if v == -1:
            return False
        if v == 0:
            assign(u)
    if not propagate(0):
        return False

    order = list(range(1, num_vars + 1))
    # decision stack entries: (trail length before decision, literal, flipped)
    decisions: list[tuple[int, int, bool]] = []
    cursor = 0
    while True:
        while cursor < len(order) and value[order[cursor]] != 0:
            cursor += 1
        if cursor == len(order):
            return True
        lit = order[cursor]
        decisions.append((len(trail), lit, False))
        assign(lit)
        ok = propagate(len(trail) - 1)
        while not ok:
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return False
            mark, lit, _ = decisions.pop()
            for l in trail[mark:]:
                value[abs(l)] = 0
            del trail[mark:]
            cursor = 0
            decisions.append((mark, -lit, True))
            assign(-lit)
            ok = propagate(len(trail) - 1)


# -- backends ----------------------------------------------------------------


@dataclass
class SatBackend:
    """Decision procedure plus a monotone count of consistency queries.

    ``command`` selects the external route: a shell-style template where
    ``{input}`` is replaced by the DIMACS file path (appended if absent).
    """

    command: str | None = None
    calls: int = field(default=0)
    timeout: float | None = 60.0

    @classmethod
    def from_env(cls) -> "SatBackend":
        return cls(command=os.environ.get(SOLVER_ENV) or None)

    @property
    def kind(self) -> str:
        return "builtin" if self.command is None else "external"

    def fresh(self) -> "SatBackend":
        return SatBackend(self.command, timeout=self.timeout)

    def is_consistent(self, f: Formula) -> bool:
        self.calls += 1
        if isinstance(f, Const):
            return f.value
        cnf = tseitin(f)
        if self.command is None:
            return dpll(cnf.num_vars, cnf.clauses)
        return self._run_external(cnf.to_dimacs())

    def entails(self, f: Formula, g: Formula) -> bool:
        return not self.is_consistent(conj(f, negate(g)))

    def equivalent(self, f: Formula, g: Formula) -> bool:
        return self.entails(f, g) and self.entails(g, f)

    def _run_external(self, dimacs: str) -> bool:
        with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as fh:
            fh.write(dimacs)
            path = fh.name
        try:
            argv = shlex.split(self.command)
            if any("{input}" in a for a in argv):
                argv = [a.replace("{input}", path) for a in argv]
            else:
                argv.append(path)
            try:
                proc = subprocess.run(argv, capture_output=True, text=True,
                                      timeout=self.timeout)
            except (OSError, subprocess.SubprocessError) as exc:
                raise SolverError(f"cannot run solver {self.command!r}: {exc}") from exc
        finally:
            os.unlink(path)
        for line in proc.stdout.splitlines():
            tokens = line.split()
            if len(tokens) >= 2 and tokens[0] == "s":
                if tokens[1] == "SATISFIABLE":
                    return True
                if tokens[1] == "UNSATISFIABLE":
                    return False
                raise SolverError(f"solver answered {line.strip()!r}")
        raise SolverError(
            f"no 's SATISFIABLE'/'s UNSATISFIABLE' line from {self.command!r} "
            f"(exit status {proc.returncode})"
        )


def is_consistent(f: Formula, backend: SatBackend | None = None) -> bool:
    return (backend or SatBackend()).is_consistent(f)


def entails(f: Formula, g: Formula, backend: SatBackend | None = None) -> bool:
    return (backend or SatBackend()).entails(f, g)


def equivalent(f: Formula, g: Formula, backend: SatBackend | None = None) -> bool:
    return (backend or SatBackend()).equivalent(f, g)
