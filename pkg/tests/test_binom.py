"""Tests for exact binomial computations and seeded streams."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from berncert.binom import (
    SeededStream,
    binom_cdf,
    binom_pmf,
    binom_pmf_vector,
    binom_tail_invert,
    draw_bernoulli,
)


def exact_pmf(n: int, b: Fraction, y: int) -> Fraction:
    return math.comb(n, y) * b**y * (1 - b) ** (n - y)


class TestPmf:
    def test_all_successes(self):
        assert binom_pmf(2, 0.3, 2) == pytest.approx(0.09, abs=1e-15)

    def test_one_success_of_two(self):
        assert binom_pmf(2, 0.3, 1) == pytest.approx(0.42, abs=1e-15)

    def test_exact_rational_value(self):
        # 252/1024 by exact rational arithmetic
        assert binom_pmf(10, 0.5, 5) == 0.24609375

    def test_degenerate_parameters(self):
        assert binom_pmf(5, 0.0, 0) == 1.0
        assert binom_pmf(5, 0.0, 3) == 0.0
        assert binom_pmf(5, 1.0, 5) == 1.0

    def test_y_out_of_range(self):
        with pytest.raises(ValueError):
            binom_pmf(5, 0.3, 6)
        with pytest.raises(ValueError):
            binom_pmf(5, 0.3, -1)

    def test_b_out_of_range(self):
        with pytest.raises(ValueError):
            binom_pmf(5, 1.3, 2)

    @pytest.mark.parametrize("n", [100, 1000, 100_000])
    def test_large_n_matches_log_oracle(self, n):
        # independent oracle: exact rational arithmetic at the float b
        b = Fraction(0.3)
        y = n // 3
        expected = float(exact_pmf(n, b, y))
        assert binom_pmf(n, 0.3, y) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 7, 30, 100, 1000, 10_000])
    def test_normalization(self, n):
        for b in (0.0, 0.01, 0.3, 0.5, 0.97, 1.0):
            total = math.fsum(binom_pmf_vector(n, b))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestCdf:
    def test_matches_eq8_tail(self):
        # cdf(2, E, 1) = 1 - E^2
        for E in np.arange(0.0, 1.0001, 0.05):
            assert binom_cdf(2, E, 1) == pytest.approx(1 - E**2, abs=1e-14)

    def test_all_mass_at_zero(self):
        assert binom_cdf(5, 0.0, 0) == 1.0

    def test_exact_summation(self):
        # frozen from exact rational summation of 7 pmf terms
        assert binom_cdf(20, 0.3, 6) == pytest.approx(0.608009812200924, abs=1e-14)

    def test_total_on_integers(self):
        assert binom_cdf(4, 0.3, -1) == 0.0
        assert binom_cdf(4, 0.3, -7) == 0.0
        assert binom_cdf(4, 0.3, 4) == 1.0
        assert binom_cdf(4, 0.3, 100) == 1.0

    @given(
        n=st.integers(1, 40),
        b=st.floats(0, 1),
        j=st.integers(0, 40),
    )
    @settings(max_examples=100)
    def test_pmf_consistency(self, n, b, j):
        j = min(j, n)
        diff = binom_cdf(n, b, j) - binom_cdf(n, b, j - 1)
        assert diff == pytest.approx(binom_pmf(n, b, j), abs=1e-12)

    @given(n=st.integers(1, 25), b=st.floats(0, 1))
    @settings(max_examples=50)
    def test_monotone_in_j(self, n, b):
        values = [binom_cdf(n, b, j) for j in range(-1, n + 1)]
        assert all(a <= c + 1e-15 for a, c in zip(values, values[1:]))


class TestTailInvert:
    def test_upper_closed_form(self):
        # (1 - b)^10 = 0.05
        expected = 1 - 0.05 ** (1 / 10)
        assert binom_tail_invert(10, 0, 0.05, "upper") == pytest.approx(expected, abs=1e-10)

    def test_lower_closed_form(self):
        expected = 0.05 ** (1 / 10)
        assert binom_tail_invert(10, 10, 0.05, "lower") == pytest.approx(expected, abs=1e-10)

    def test_single_trial(self):
        assert binom_tail_invert(1, 0, 0.5, "upper") == pytest.approx(0.5, abs=1e-11)

    def test_boundary_no_sign_change(self):
        assert binom_tail_invert(5, 5, 0.3, "upper") == 1.0
        assert binom_tail_invert(5, 0, 0.3, "lower") == 0.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            binom_tail_invert(5, 6, 0.3, "upper")
        with pytest.raises(ValueError):
            binom_tail_invert(5, 2, 0.0, "upper")
        with pytest.raises(ValueError):
            binom_tail_invert(5, 2, 0.3, "sideways")

    @pytest.mark.parametrize("n,y,t", [(10, 3, 0.025), (25, 12, 0.2), (7, 0, 0.6)])
    def test_round_trip(self, n, y, t):
        b = binom_tail_invert(n, y, t, "upper")
        assert binom_cdf(n, b, y) == pytest.approx(t, abs=1e-10)

    @pytest.mark.parametrize("n,y,t", [(10, 3, 0.025), (25, 12, 0.2), (7, 7, 0.6)])
    def test_round_trip_lower(self, n, y, t):
        b = binom_tail_invert(n, y, t, "lower")
        assert 1 - binom_cdf(n, b, y - 1) == pytest.approx(t, abs=1e-10)


class TestSeededStream:
    def test_determinism(self):
        a = draw_bernoulli(SeededStream(42, 3), 0.3, 1000)
        b = draw_bernoulli(SeededStream(42, 3), 0.3, 1000)
        assert np.array_equal(a, b)

    def test_distinct_substreams(self):
        s = SeededStream(42)
        a = draw_bernoulli(s.substream(0), 0.5, 1000)
        b = draw_bernoulli(s.substream(1), 0.5, 1000)
        assert not np.array_equal(a, b)

    def test_substream_order_insensitive(self):
        s = SeededStream(7)
        first = [s.substream(i).rng().random(4).tolist() for i in range(5)]
        second = [s.substream(i).rng().random(4).tolist() for i in reversed(range(5))]
        assert first == second[::-1]

    def test_degenerate_draws(self):
        assert draw_bernoulli(SeededStream(0), 0.0, 100).sum() == 0
        assert draw_bernoulli(SeededStream(0), 1.0, 100).sum() == 100
        assert draw_bernoulli(SeededStream(0), 0.5, 0).size == 0

    def test_empirical_mean_hoeffding(self):
        # 5 sigma two-sided Hoeffding tolerance at n = 1e5
        n = 100_000
        delta = 2 * math.exp(-0.5 * 5**2)
        tol = math.sqrt(math.log(2 / delta) / (2 * n))
        mean = draw_bernoulli(SeededStream(123), 0.3, n).mean()
        assert abs(mean - 0.3) <= tol

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            draw_bernoulli(SeededStream(0), 0.5, -1)
