"""Exact and numerically stable Bernoulli/binomial computations plus seeded sampling.

Small trial counts use exact rational arithmetic so test oracles can rely on
exactness; larger counts switch to log-space evaluation with log-gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

# Below this trial count pmf/cdf values are computed with exact rationals.
EXACT_N_MAX = 30

# Working precision for large-n evaluation; double-precision log-gamma alone
# cannot reach 1e-12 relative error once n is in the tens of thousands.
_WORK_DPS = 40

_MASK64 = 0xFFFFFFFFFFFFFFFF


def check_prob(p: float, name: str = "probability") -> float:
    """Validate that ``p`` lies in [0, 1] and return it as a float."""
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def check_trials(n: int, name: str = "n") -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")
    return n


def binom_pmf(n: int, b: float, y: int) -> float:
    """Pr(Y = y) for Y ~ Bin(n, b).

    Exact rational arithmetic for n <= EXACT_N_MAX, log-space otherwise.
    """
    n = check_trials(n)
    b = check_prob(b, "b")
    y = int(y)
    if not (0 <= y <= n):
        raise ValueError(f"y must lie in [0, {n}], got {y}")
    if b == 0.0:
        return 1.0 if y == 0 else 0.0
    if b == 1.0:
        return 1.0 if y == n else 0.0
    if n <= EXACT_N_MAX:
        bf = Fraction(b)
        return float(math.comb(n, y) * bf**y * (1 - bf) ** (n - y))
    return _pmf_large(n, b, y)


def _pmf_large(n: int, b: float, y: int) -> float:
    with mp.workdps(_WORK_DPS):
        bb = mp.mpf(b)
        value = mp.binomial(n, y) * bb**y * (mp.mpf(1) - bb) ** (n - y)
        return float(value)


def binom_pmf_vector(n: int, b: float) -> np.ndarray:
    """All pmf values Pr(Y = y) for y = 0..n as a float array."""
    n = check_trials(n)
    b = check_prob(b, "b")
    if b == 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if b == 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    if n <= EXACT_N_MAX:
        return np.array([binom_pmf(n, b, y) for y in range(n + 1)])
    # extended-precision recurrence anchored at the mode; values that
    # underflow in the far tails are negligible at double precision anyway
    mode = min(max(int((n + 1) * b), 0), n)
    out = np.zeros(n + 1, dtype=np.longdouble)
    out[mode] = np.longdouble(_pmf_large(n, b, mode))
    ratio_b = np.longdouble(b) / np.longdouble(1.0 - b)
    for y in range(mode, n):
        out[y + 1] = out[y] * ratio_b * np.longdouble(n - y) / np.longdouble(y + 1)
    for y in range(mode, 0, -1):
        out[y - 1] = out[y] / ratio_b * np.longdouble(y) / np.longdouble(n - y + 1)
    return out.astype(float)


def binom_cdf(n: int, b: float, j: int) -> float:
    """Pr(Y <= j) for Y ~ Bin(n, b); total on integers (j < 0 -> 0, j >= n -> 1)."""
    n = check_trials(n)
    b = check_prob(b, "b")
    j = int(j)
    if j < 0:
        return 0.0
    if j >= n:
        return 1.0
    if n <= EXACT_N_MAX and b not in (0.0, 1.0):
        bf = Fraction(b)
        total = sum(math.comb(n, y) * bf**y * (1 - bf) ** (n - y) for y in range(j + 1))
        return float(total)
    return min(1.0, math.fsum(binom_pmf_vector(n, b)[: j + 1]))


def binom_tail_invert(n: int, y: int, target: float, side: str) -> float:
    """Solve a binomial tail equation for the success probability b.

    side="upper" returns the b with Pr(Y <= y) = target; side="lower" the b
    with Pr(Y >= y) = target.  The tails are monotone in b, so bisection to
    absolute tolerance 1e-12 finds the unique root.  Degenerate cases with no
    sign change on [0, 1] return the boundary value 0 or 1.
    """
    n = check_trials(n)
    y = int(y)
    if not (0 <= y <= n):
        raise ValueError(f"y must lie in [0, {n}], got {y}")
    target = float(target)
    if not (0.0 < target < 1.0):
        raise ValueError(f"target must lie in (0, 1), got {target}")
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")

    if side == "upper":
        if y == n:  # Pr(Y <= n) == 1 for every b: no root
            return 1.0
        f = lambda b: binom_cdf(n, b, y) - target  # decreasing in b
        lo, hi = 0.0, 1.0
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if f(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    else:
        if y == 0:  # Pr(Y >= 0) == 1 for every b: no root
            return 0.0
        g = lambda b: (1.0 - binom_cdf(n, b, y - 1)) - target  # increasing in b
        lo, hi = 0.0, 1.0
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if g(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def _mix64(a: int, b: int) -> int:
    """SplitMix64-style finalizer combining two 64-bit words."""
    x = (a * 0x9E3779B97F4A7C15 + b) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class SeededStream:
    """Value-semantics random stream: (master_seed, stream_id) fully determines it.

    Substreams are derived by mixing the stream id, so parallel consumers get
    independent streams regardless of evaluation order.
    """

    master_seed: int
    stream_id: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence([self.master_seed & _MASK64, self.stream_id & _MASK64])
        )

    def substream(self, child_id: int) -> "SeededStream":
        return SeededStream(self.master_seed, _mix64(self.stream_id, child_id))


def draw_bernoulli(stream: SeededStream, b: float, count: int) -> np.ndarray:
    """i.i.d. 0/1 draws with success probability b."""
    b = check_prob(b, "b")
    count = int(count)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return (stream.rng().random(count) < b).astype(np.int64)
