"""Closed-form analysis of the indicator special case.

With indicator scores the predicted set is one of four symbolic kinds; only
the measure b of the target set matters, so everything here is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .binom import binom_cdf, check_prob, check_trials
from .conformal import PacBound, PacParams, as_fraction, theorem1_bound


class PredictionSetKind(Enum):
    Q = "Q"
    Q_COMPLEMENT = "Q_complement"
    FULL_SPACE = "full_space"
    EMPTY = "empty"


@dataclass(frozen=True)
class IndicatorModel:
    b: float  # probability of the target set Q
    n: int  # calibration size

    def __post_init__(self):
        check_prob(self.b, "b")
        check_trials(self.n)


class ClaimNeverIssuedError(ValueError):
    """The conditional coverage of the naive interval rule is undefined:
    the informative prediction is issued with probability zero."""


def inp_closed_form(n: int, ones_count: int, epsilon) -> PredictionSetKind:
    """Predicted set as a function of the number of score-1 calibration points.

    Score-0 candidates have p = 1 and are included whenever epsilon < 1;
    score-1 candidates have p = (ones_count + 1)/(n + 1).
    """
    n = check_trials(n)
    ones_count = int(ones_count)
    if not (0 <= ones_count <= n):
        raise ValueError(f"ones_count must lie in [0, {n}], got {ones_count}")
    eps = as_fraction(epsilon)
    if not (0 <= eps <= 1):
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    if eps == 1:
        return PredictionSetKind.EMPTY
    if Fraction(ones_count + 1, n + 1) > eps:
        return PredictionSetKind.FULL_SPACE
    return PredictionSetKind.Q_COMPLEMENT


@dataclass(frozen=True)
class ExactSEResult:
    prob_SE: float
    prob_fullspace: float
    prob_qbar_covering: float
    bound: PacBound


def _require_eps_below_one(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if not (0 <= eps < 1):
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    return eps


def exact_SE_probability(model: IndicatorModel, epsilon, coverage_E: float) -> ExactSEResult:
    """Exact probability that the realized predictor attains coverage >= 1 - E.

    Inner coverage is 1 for the full space and 1 - b for the complement
    prediction, so the event holds always when b <= E and exactly when the
    full space is predicted when b > E.
    """
    eps = _require_eps_below_one(epsilon)
    E = check_prob(coverage_E, "coverage_E")
    params = PacParams(epsilon=eps, coverage_E=E, n=model.n)
    j = params.J
    # predictor is the full space iff ones_count >= J + 1
    prob_fullspace = 1.0 - binom_cdf(model.n, model.b, j) if j >= 0 else 1.0
    if model.b <= E:
        prob_qbar_covering = 1.0 - prob_fullspace
        prob_SE = 1.0
    else:
        prob_qbar_covering = 0.0
        prob_SE = prob_fullspace
    return ExactSEResult(
        prob_SE=prob_SE,
        prob_fullspace=prob_fullspace,
        prob_qbar_covering=prob_qbar_covering,
        bound=theorem1_bound(params),
    )


@dataclass(frozen=True)
class Example1Case:
    label: str
    probability: float
    prediction: PredictionSetKind
    inner_coverage: float
    in_SE: bool


@dataclass(frozen=True)
class Example1Table:
    cases: tuple[Example1Case, ...]
    prob_SE: float


def enumerate_example1(b: float, epsilon, coverage_E: float) -> Example1Table:
    """Full case table for calibration size 2: outcome classes with
    probabilities (1-b)^2, 2b(1-b), b^2, the realized prediction under
    epsilon, each class's inner coverage, and membership in the coverage
    event.  Aggregates to the same value as the closed form."""
    b = check_prob(b, "b")
    _require_eps_below_one(epsilon)
    E = check_prob(coverage_E, "coverage_E")
    classes = [
        ("no calibration point in Q", (1.0 - b) ** 2, 0),
        ("one calibration point in Q", 2.0 * b * (1.0 - b), 1),
        ("both calibration points in Q", b**2, 2),
    ]
    cases = []
    for label, prob, ones in classes:
        pred = inp_closed_form(2, ones, epsilon)
        cover = 1.0 if pred is PredictionSetKind.FULL_SPACE else 1.0 - b
        cases.append(
            Example1Case(
                label=label,
                probability=prob,
                prediction=pred,
                inner_coverage=cover,
                in_SE=cover >= 1.0 - E,
            )
        )
    prob_SE = math.fsum(c.probability for c in cases if c.in_SE)
    return Example1Table(cases=tuple(cases), prob_SE=min(prob_SE, 1.0))


@dataclass(frozen=True)
class NaiveIntervalReport:
    conditional_coverage: float
    claim_rate: float


def naive_interval_coverage(b: float, coverage_E: float, n: int, epsilon) -> NaiveIntervalReport:
    """Coverage of the fallacious rule "whenever the predictor returns the
    complement of Q, claim b <= E".

    The claim, when issued, is right always (b <= E) or never (b > E): the
    rule is not a valid confidence procedure at any nominal level.
    """
    b = check_prob(b, "b")
    E = check_prob(coverage_E, "coverage_E")
    n = check_trials(n)
    eps = _require_eps_below_one(epsilon)
    j = PacParams(epsilon=eps, coverage_E=E, n=n).J
    claim_rate = binom_cdf(n, b, j) if j >= 0 else 0.0
    if claim_rate == 0.0:
        raise ClaimNeverIssuedError(
            f"the complement prediction is never issued for b={b}, n={n}, epsilon={epsilon}"
        )
    return NaiveIntervalReport(
        conditional_coverage=1.0 if b <= E else 0.0,
        claim_rate=claim_rate,
    )


def indicator_sampler(b: float):
    """Point sampler over {0, 1} matching an indicator measure with P(Q) = b."""
    b = check_prob(b, "b")

    def sample(rng, count):
        return (rng.random(count) < b).astype(int)

    return sample
