"""Walk through the four-step running example: symbolic trace, core expansion, oracle classes."""
from iterrev.formula import Alphabet, format_formula, parse_formula
from iterrev.preorder import ChangeOp, ChangeSequence, run_sequence_oracle
from iterrev.reduce import expand_sequence
from iterrev.symbolic import QueryTrace, base_after

A = Alphabet(["x", "y", "z"])
STEPS = [("lex", "y"), ("nat", "!x"), ("res", "x & z"), ("rad", "!z")]


def main() -> None:
    seq = ChangeSequence(A, [ChangeOp(k, parse_formula(t, A)) for k, t in STEPS])

    trace = QueryTrace()
    base_after(seq, trace=trace, per_step=True)
    print("symbolic trace")
    for rec in trace.steps:
        print(f"  {rec.step}. {str(rec.op):<14} base = {format_formula(rec.base)}  ({rec.sat_calls} SAT calls)")

    print("core expansion")
    for op in expand_sequence(seq):
        print(f"  {op}")

    print("oracle classes")
    run = run_sequence_oracle(seq, keep_trace=True)
    for k, C in enumerate(run.trace):
        print(f"  step {k}: " + "  ".join(str(c) for c in C.classes if c.mask))


if __name__ == "__main__":
    main()
