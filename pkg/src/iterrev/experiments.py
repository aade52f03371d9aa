"""Reusable experiment drivers (called from scripts/ and the acceptance tests)."""
from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass, field

from .generate import GenConfig, random_sequence
from .preorder import CORE_KINDS
from .sat import SatBackend
from .symbolic import QueryTrace, base_after


@dataclass
class ScalingConfig:
    lengths: tuple[int, ...] = (4, 8, 16, 32, 64)
    samples: int = 4
    num_vars: int = 10
    max_depth: int = 3
    kinds: tuple[str, ...] = CORE_KINDS
    seed: int = 2024


@dataclass
class ScalingResult:
    lengths: list[int] = field(default_factory=list)
    mean_calls: list[float] = field(default_factory=list)
    max_calls: list[int] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def exponent(self) -> float:
        return power_law_exponent(self.lengths, self.mean_calls)


def power_law_exponent(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    fit = statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])
    return fit.slope


def sat_call_scaling(cfg: ScalingConfig = ScalingConfig()) -> ScalingResult:
    gen = GenConfig(num_vars=cfg.num_vars, max_depth=cfg.max_depth, kinds=cfg.kinds)
    rng = random.Random(cfg.seed)
    out = ScalingResult()
    start = time.perf_counter()
    for n in cfg.lengths:
        counts = []
        for _ in range(cfg.samples):
            seq = random_sequence(rng, gen, length=n, backend=SatBackend())
            trace = QueryTrace()
            base_after(seq, SatBackend(), trace)
            counts.append(trace.sat_calls)
        out.lengths.append(n)
        out.mean_calls.append(statistics.fmean(counts))
        out.max_calls.append(max(counts))
    out.seconds = time.perf_counter() - start
    return out
