"""Binomial proportion confidence intervals and exact coverage evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .binom import (
    SeededStream,
    binom_pmf_vector,
    binom_tail_invert,
    check_prob,
    check_trials,
)


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float
    alpha: float
    n: int
    y: int

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(
                f"invalid interval [{self.lower}, {self.upper}]: endpoints must "
                "satisfy 0 <= lower <= upper <= 1"
            )

    def contains(self, b: float) -> bool:
        return self.lower <= b <= self.upper


def clopper_pearson(n: int, y: int, alpha: float) -> IntervalEstimate:
    """Exact (conservatively valid) interval by inverting the binomial tails.

    Endpoints at y=0 and y=n are pinned to 0 and 1 (one-sided convention).
    """
    n = check_trials(n)
    y = int(y)
    if not (0 <= y <= n):
        raise ValueError(f"successes must lie in [0, {n}], got {y}")
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    lower = 0.0 if y == 0 else binom_tail_invert(n, y, alpha / 2, "lower")
    upper = 1.0 if y == n else binom_tail_invert(n, y, alpha / 2, "upper")
    return IntervalEstimate(lower=lower, upper=upper, alpha=alpha, n=n, y=y)


class ClopperPearson:
    """Interval estimator y -> Clopper-Pearson interval for fixed (n, alpha)."""

    def __init__(self, n: int, alpha: float):
        self.n = check_trials(n)
        if not (0.0 < alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = float(alpha)
        self._cache: dict[int, IntervalEstimate] = {}

    def interval(self, y: int) -> IntervalEstimate:
        y = int(y)
        if y not in self._cache:
            self._cache[y] = clopper_pearson(self.n, y, self.alpha)
        return self._cache[y]


class FullInterval:
    """Trivial estimator returning [0, 1] for every outcome; used in tests."""

    def __init__(self, n: int | None = None, alpha: float = 0.0):
        self.n = n
        self.alpha = alpha

    def interval(self, y: int) -> IntervalEstimate:
        n = self.n if self.n is not None else max(int(y), 1)
        return IntervalEstimate(lower=0.0, upper=1.0, alpha=self.alpha, n=n, y=int(y))


@dataclass
class CoverageReport:
    b: float
    coverage: float
    covering_set: frozenset[int]


def coverage_probability(estimator, b: float, n: int) -> CoverageReport:
    """Exact coverage at b by enumerating all n+1 outcomes."""
    n = check_trials(n)
    b = check_prob(b, "b")
    covering = frozenset(y for y in range(n + 1) if estimator.interval(y).contains(b))
    if len(covering) == n + 1:
        coverage = 1.0  # covering every outcome is certain coverage
    else:
        pmf = binom_pmf_vector(n, b)
        coverage = min(math.fsum(pmf[y] for y in covering), 1.0)
    return CoverageReport(b=b, coverage=coverage, covering_set=covering)


@dataclass
class ValidityReport:
    valid: bool
    worst_b: float
    worst_coverage: float
    alpha: float
    n: int


def endpoint_augmented_grid(estimator, n: int, step: float = 0.001, eps: float = 1e-9) -> list[float]:
    """Uniform b-grid plus every interval endpoint +- eps.

    Coverage as a function of b is piecewise with breakpoints exactly at the
    estimator endpoints; probing them catches dips a uniform grid misses.
    """
    points = {round(k * step, 12) for k in range(int(round(1.0 / step)) + 1)}
    for y in range(n + 1):
        iv = estimator.interval(y)
        for p in (iv.lower, iv.upper):
            for q in (p - eps, p, p + eps):
                if 0.0 <= q <= 1.0:
                    points.add(q)
    points.update((0.0, 1.0))
    return sorted(points)


def verify_conservative_validity(
    estimator, n: int, alpha: float, b_grid: list[float] | None = None
) -> ValidityReport:
    """True iff exact coverage >= 1 - alpha at every grid point."""
    if b_grid is None:
        b_grid = endpoint_augmented_grid(estimator, n)
    if not b_grid:
        raise ValueError("b_grid must be nonempty")
    worst_b, worst_cov = None, 2.0
    for b in b_grid:
        cov = coverage_probability(estimator, b, n).coverage
        if cov < worst_cov:
            worst_b, worst_cov = b, cov
    return ValidityReport(
        valid=worst_cov >= 1.0 - alpha,
        worst_b=worst_b,
        worst_coverage=worst_cov,
        alpha=alpha,
        n=n,
    )


def pac_form_check(
    estimator, b: float, n: int, mc_trials: int, stream: SeededStream
) -> float:
    """Monte Carlo coverage: fraction of simulated calibration sets whose
    interval contains b.  Converges to the exact enumeration value."""
    n = check_trials(n)
    b = check_prob(b, "b")
    mc_trials = int(mc_trials)
    if mc_trials < 1:
        raise ValueError(f"mc_trials must be >= 1, got {mc_trials}")
    rng = stream.rng()
    contains = [estimator.interval(y).contains(b) for y in range(n + 1)]
    hits = 0
    chunk = 1 << 16
    done = 0
    while done < mc_trials:
        m = min(chunk, mc_trials - done)
        ys = (rng.random((m, n)) < b).sum(axis=1)
        hits += sum(contains[y] for y in ys)
        done += m
    return hits / mc_trials
