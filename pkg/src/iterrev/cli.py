"""Command line front end.

Sequence files are line oriented::

    # comment
    vars x y z
    lex: y
    nat: !x
    ? !z

Large formulas may name shared parts on ``let $k = <formula>`` lines (or
inline, ``let $k = ...; <formula>``) and refer to them as ``$k``.

Exit status: 0 success, 1 usage or parse error, 2 engine error,
3 failed entailment assertion or oracle disagreement.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .formula import (
    DEFAULT_ORACLE_CAP,
    Alphabet,
    Formula,
    FormulaError,
    FormulaSyntaxError,
    UndeclaredVariableError,
    dag_size,
    enumerate_models,
    format_formula,
    parse_formula,
    render_shared,
)
from .preorder import (
    KINDS,
    ChangeOp,
    ChangeSequence,
    TotalPreorder,
    base as oracle_base,
    equivalent_preorders,
    run_sequence_oracle,
)
from .reduce import expand_sequence
from .sat import SOLVER_ENV, SatBackend, SolverError
from .symbolic import (
    SAT_CALL_CONSTANT,
    QueryTrace,
    base_after,
)

EXIT_OK, EXIT_USAGE, EXIT_ENGINE, EXIT_ASSERT = 0, 1, 2, 3
REF = re.compile(r"\$[A-Za-z0-9_]+\Z")


class DocumentError(ValueError):
    def __init__(self, message: str, path: str, line: int, column: int):
        self.path, self.line, self.column = path, line, column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass
class SequenceDocument:
    alphabet: Alphabet
    sequence: ChangeSequence
    queries: list[Formula] = field(default_factory=list)
    op_lines: list[int] = field(default_factory=list)
    query_lines: list[int] = field(default_factory=list)
    path: str = "<input>"


def loads(text: str, path: str = "<input>") -> SequenceDocument:
    alphabet: Alphabet | None = None
    ops: list[ChangeOp] = []
    op_lines: list[int] = []
    queries: list[Formula] = []
    query_lines: list[int] = []
    defs: dict[str, Formula] = {}

    def formula_at(src: str, offset: int, lineno: int) -> Formula:
        try:
            return parse_formula(src, alphabet, defs)
        except FormulaSyntaxError as exc:
            raise DocumentError(exc.message, path, lineno, offset + exc.position + 1) from None
        except UndeclaredVariableError as exc:
            col = offset + (exc.position or 0) + 1
            raise DocumentError(f"undeclared variable {exc.name!r}", path, lineno, col) from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        if alphabet is None:
            head, _, rest = stripped.partition(" ")
            if head != "vars":
                raise DocumentError("expected 'vars' declaration first", path, lineno, indent + 1)
            try:
                alphabet = Alphabet(rest.split())
            except ValueError as exc:
                raise DocumentError(str(exc), path, lineno, indent + 6) from None
            continue
        if stripped.startswith("vars"):
            raise DocumentError("duplicate 'vars' declaration", path, lineno, indent + 1)
        if stripped.startswith("let ") and stripped[4:].lstrip().startswith("$"):
            name, eq, body = line[indent + 4:].partition("=")
            name = name.strip()
            if not eq or not REF.match(name):
                raise DocumentError("expected 'let $name = <formula>'", path, lineno, indent + 1)
            if name in defs:
                raise DocumentError(f"{name} is already defined", path, lineno, indent + 5)
            defs[name] = formula_at(body, len(line) - len(body), lineno)
            continue
        if stripped.startswith("?"):
            body = line[indent + 1:]
            queries.append(formula_at(body, indent + 1, lineno))
            query_lines.append(lineno)
            continue
        kind, colon, body = line.partition(":")
        kind = kind.strip()
        if not colon:
            raise DocumentError("expected '<operator>: <formula>'", path, lineno, indent + 1)
        if kind not in KINDS:
            raise DocumentError(f"unknown operator {kind!r}", path, lineno, indent + 1)
        ops.append(ChangeOp(kind, formula_at(body, len(line) - len(body), lineno)))
        op_lines.append(lineno)
    if alphabet is None:
        raise DocumentError("missing 'vars' declaration", path, 1, 1)
    return SequenceDocument(alphabet, ChangeSequence(alphabet, ops), queries,
                            op_lines, query_lines, path)


def load(path: str | Path) -> SequenceDocument:
    p = Path(path)
    return loads(p.read_text(), str(p))


def dumps(alphabet: Alphabet, ops, queries=()) -> str:
    """Document text; shared subformulas of large inputs become ``let`` lines."""
    ops, queries = list(ops), list(queries)
    bindings, texts = render_shared([op.formula for op in ops] + queries)
    lines = ["vars " + " ".join(alphabet.names)]
    lines += [f"let {name} = {text}" for name, text in bindings]
    lines += [f"{op.kind}: {t}" for op, t in zip(ops, texts)]
    lines += [f"? {t}" for t in texts[len(ops):]]
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def _out(args, text: str = "") -> None:
    args.stdout.write(text + "\n")


def _json(args, obj) -> None:
    args.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _backend(args) -> SatBackend:
    return SatBackend(command=args.solver)


def cmd_base(args, doc: SequenceDocument) -> int:
    sat = _backend(args)
    b = base_after(doc.sequence, sat)
    if args.json:
        _json(args, {"base": format_formula(b), "sat_calls": sat.calls})
    else:
        _out(args, format_formula(b))
    return EXIT_OK


def _check_queries(args, doc: SequenceDocument, queries: list[Formula]):
    sat = _backend(args)
    b = base_after(doc.sequence, sat)

    def one(q: Formula) -> tuple[bool, int]:
        own = sat.fresh()
        return own.entails(b, q), own.calls

    if args.jobs > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, queries))
    else:
        results = [one(q) for q in queries]
    return b, sat.calls, results


def cmd_entails(args, doc: SequenceDocument) -> int:
    extra = [parse_formula(q, doc.alphabet) for q in args.query or ()]
    queries = doc.queries + extra
    b, base_calls, results = _check_queries(args, doc, queries)
    if args.json:
        _json(args, {"base": format_formula(b), "sat_calls": base_calls + sum(c for _, c in results),
                     "queries": [{"query": format_formula(q), "entailed": v}
                                 for q, (v, _) in zip(queries, results)]})
    else:
        for q, (v, _) in zip(queries, results):
            _out(args, f"{format_formula(q)}: {'true' if v else 'false'}")
    if args.assert_ and not all(v for v, _ in results):
        return EXIT_ASSERT
    return EXIT_OK


def cmd_trace(args, doc: SequenceDocument) -> int:
    sat = _backend(args)
    trace = QueryTrace()
    base_after(doc.sequence, sat, trace, per_step=True)
    records = [s.as_dict() for s in trace.steps]
    if args.json:
        _json(args, records)
        return EXIT_OK
    for r in records:
        _out(args, f"step {r['step']}: {r['op']}({r['formula']})")
        _out(args, f"  base: {r['base']}")
        if "underformula" in r:
            _out(args, f"  underformula: {r['underformula']}")
        _out(args, f"  sat_calls: {r['sat_calls']}")
    return EXIT_OK


def cmd_expand(args, doc: SequenceDocument) -> int:
    core = expand_sequence(doc.sequence, _backend(args))
    if args.json:
        _json(args, [{"op": op.kind, "formula": format_formula(op.formula)} for op in core])
    else:
        args.stdout.write(dumps(doc.alphabet, core, doc.queries))
    return EXIT_OK


def _classes(C: TotalPreorder) -> list[list[str]]:
    return [[str(m) for m in c] for c in C.classes]


def cmd_oracle(args, doc: SequenceDocument) -> int:
    run = run_sequence_oracle(doc.sequence, cap=args.oracle_cap, keep_trace=True,
                              raw=args.raw)
    shown = run.trace
    labels = ["initial"] + [str(op) for op in doc.sequence]
    if args.json:
        _json(args, [{"step": k, "op": labels[k], "classes": _classes(C)}
                     for k, C in enumerate(shown)])
        return EXIT_OK
    for k, C in enumerate(shown):
        _out(args, f"step {k}: {labels[k]}")
        for i, c in enumerate(C.classes):
            _out(args, f"  C({i}) = {c}")
    return EXIT_OK


def cmd_compare(args, doc: SequenceDocument) -> int:
    A = doc.alphabet
    run = run_sequence_oracle(doc.sequence, cap=args.oracle_cap, keep_trace=True)
    sat = _backend(args)
    trace = QueryTrace()
    base_after(doc.sequence, sat, trace, per_step=True)
    failures = 0
    for step, C in zip(trace.steps, run.trace[1:]):
        ok = enumerate_models(step.base, A, args.oracle_cap) == oracle_base(C)
        failures += not ok
        _out(args, f"step {step.step} {step.op}: base {'ok' if ok else 'MISMATCH'}")
    core = expand_sequence(doc.sequence, sat.fresh())
    core_final = run_sequence_oracle(list(core), A, cap=args.oracle_cap)
    ok = equivalent_preorders(core_final, run.final)
    failures += not ok
    _out(args, f"expansion: {'ok' if ok else 'MISMATCH'}")
    if doc.queries:
        final_models = oracle_base(run.final)
        _, _, results = _check_queries(args, doc, doc.queries)
        for q, (v, _) in zip(doc.queries, results):
            expected = final_models.issubset(enumerate_models(q, A, args.oracle_cap))
            ok = v == expected
            failures += not ok
            _out(args, f"query {format_formula(q)}: {'ok' if ok else 'MISMATCH'}")
    _out(args, "all ok" if not failures else f"{failures} mismatch(es)")
    return EXIT_OK if not failures else EXIT_ASSERT


def cmd_stats(args, doc: SequenceDocument) -> int:
    sat = _backend(args)
    trace = QueryTrace()
    base_after(doc.sequence, sat, trace)
    core = expand_sequence(doc.sequence, sat.fresh())
    n = len(doc.sequence)
    info = {
        "ops": n,
        "core_ops": len(core),
        "sevs": len(trace.underformulae),
        "sat_calls": trace.sat_calls,
        "sat_call_bound": SAT_CALL_CONSTANT * n * n,
        "underformula_dag_sizes": [dag_size(trace.underformulae[k])
                                   for k in sorted(trace.underformulae)],
        "solver": sat.kind,
    }
    if args.json:
        _json(args, info)
    else:
        for key, value in info.items():
            _out(args, f"{key}: {value}")
    return EXIT_OK


COMMANDS = {
    "base": (cmd_base, "print the base after the whole sequence"),
    "entails": (cmd_entails, "check whether the base entails each query"),
    "trace": (cmd_trace, "base and underformula after every step"),
    "expand": (cmd_expand, "rewrite into lex, refi and sev (a loadable document)"),
    "oracle": (cmd_oracle, "explicit class lists by brute force"),
    "compare": (cmd_compare, "check the symbolic engine against the oracle"),
    "stats": (cmd_stats, "SAT call counts and underformula sizes"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", nargs="?", help="sequence file (or use --file)")
    common.add_argument("--file", "-f", dest="file", help="sequence file")
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP,
                        help="largest alphabet the brute-force oracle accepts")
    common.add_argument("--solver", default=None,
                        help=f"external solver command; '{{input}}' is the DIMACS path "
                             f"(default: ${SOLVER_ENV}, else the builtin DPLL)")
    common.add_argument("--jobs", type=int, default=1, help="parallel query workers")

    parser = argparse.ArgumentParser(prog="iterrev", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "entails":
            p.add_argument("--query", "-q", action="append",
                           help="extra query formula (repeatable)")
            p.add_argument("--assert", dest="assert_", action="store_true",
                           help="exit 3 unless every query is entailed")
        if name == "oracle":
            p.add_argument("--raw", action="store_true", help="keep the empty classes each definition produces "
                                "(their number can double with every lex)")
    return parser


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    import os

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.stdout = stdout
    if args.solver is None:
        args.solver = os.environ.get(SOLVER_ENV) or None
    path = args.file or args.path
    if path is None:
        stderr.write("iterrev: a sequence file is required (positional or --file)\n")
        return EXIT_USAGE
    if args.jobs < 1:
        stderr.write("iterrev: --jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        doc = load(path)
    except OSError as exc:
        stderr.write(f"iterrev: cannot read {path}: {exc.strerror or exc}\n")
        return EXIT_USAGE
    except DocumentError as exc:
        stderr.write(f"iterrev: {exc}\n")
        return EXIT_USAGE
    handler = COMMANDS[args.command][0]
    try:
        return handler(args, doc)
    except FormulaSyntaxError as exc:  # from --query
        stderr.write(f"iterrev: query: {exc}\n")
        return EXIT_USAGE
    except UndeclaredVariableError as exc:
        stderr.write(f"iterrev: query: {exc}\n")
        return EXIT_USAGE
    except (FormulaError, SolverError, ValueError) as exc:
        step = getattr(exc, "step", None)
        where = ""
        if step is not None and 0 < step <= len(doc.op_lines):
            where = f"{doc.path}:{doc.op_lines[step - 1]}: step {step}: "
        stderr.write(f"iterrev: {where}{exc}\n")
        return EXIT_ENGINE


def main_entry() -> None:
    sys.exit(main())
