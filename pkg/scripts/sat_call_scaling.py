"""SAT calls of base_after against sequence length, with a power-law fit.

    python3 scripts/sat_call_scaling.py --lengths 4 8 16 32 64 --samples 4
"""
import argparse
import json

from iterrev.experiments import ScalingConfig, sat_call_scaling
from iterrev.symbolic import SAT_CALL_CONSTANT


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", type=int, nargs="+", default=list(ScalingConfig.lengths))
    ap.add_argument("--samples", type=int, default=ScalingConfig.samples)
    ap.add_argument("--vars", type=int, default=ScalingConfig.num_vars)
    ap.add_argument("--seed", type=int, default=ScalingConfig.seed)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    cfg = ScalingConfig(lengths=tuple(a.lengths), samples=a.samples, num_vars=a.vars, seed=a.seed)
    res = sat_call_scaling(cfg)
    if a.json:
        print(json.dumps({"lengths": res.lengths, "mean_calls": res.mean_calls,
                          "max_calls": res.max_calls, "exponent": res.exponent,
                          "seconds": res.seconds}, indent=2))
        return
    print(f"{'n':>4} {'mean calls':>11} {'max calls':>10} {'c*n^2':>8}")
    for n, m, mx in zip(res.lengths, res.mean_calls, res.max_calls):
        print(f"{n:>4} {m:>11.1f} {mx:>10} {SAT_CALL_CONSTANT * n * n:>8}")
    print(f"fitted exponent: {res.exponent:.3f}  ({res.seconds:.1f}s)")


if __name__ == "__main__":
    main()
