"""Tests for Gauss-Hermite rules and the ensemble-average integral."""
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdcsqueeze.errors import ValidationError
from pdcsqueeze.quad import MAX_ORDER, ensemble_average, hermite_rule
from pdcsqueeze.series import variance_tau0_series

SQRT_PI = math.sqrt(math.pi)


class TestHermiteRule:
    def test_two_point(self):
        rule = hermite_rule(2)
        assert np.allclose(rule.nodes, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
        assert np.allclose(rule.weights, [SQRT_PI / 2] * 2, atol=1e-15)

    @pytest.mark.parametrize("n", [2, 5, 17, 40, 100, MAX_ORDER])
    def test_invariants(self, n):
        rule = hermite_rule(n)
        assert np.array_equal(rule.nodes, -rule.nodes[::-1])
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(SQRT_PI, abs=1e-13)
        assert rule.integrate(lambda u: u**2) == pytest.approx(SQRT_PI / 2, abs=1e-12)

    def test_gaussian_cosine(self):
        assert hermite_rule(40).integrate(np.cos) == pytest.approx(SQRT_PI * math.exp(-0.25), abs=1e-12)

    def test_cached_and_read_only(self):
        rule = hermite_rule(12)
        assert hermite_rule(12) is rule
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0

    @pytest.mark.parametrize("n", [1, 201, 2.5])
    def test_invalid_order(self, n):
        with pytest.raises(ValidationError):
            hermite_rule(n)


class TestEnsembleAverage:
    @pytest.mark.parametrize("xi", [0.0, 0.3, 2.0, 50.0])
    def test_zero_squeezing(self, xi):
        for sign in (1, -1):
            assert ensemble_average(0.0, xi, sign) == pytest.approx(0.5, rel=1e-13)

    @pytest.mark.parametrize("Xi", [0.5, 2.0, 7.0])
    def test_xi_zero(self, Xi):
        for sign in (1, -1):
            assert ensemble_average(Xi, 0.0, sign) == pytest.approx(0.5 * math.exp(sign * Xi), rel=1e-12)

    def test_reference_value(self):
        assert ensemble_average(1.0, 2.0, -1) == pytest.approx(0.256964562063574, rel=1e-12)

    def test_monotone_in_xi(self):
        for Xi in (1.0, 3.0):
            values = [ensemble_average(Xi, xi, -1) for xi in (0.0, 0.5, 2.0, 8.0)]
            assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("Xi", [0.5, 1.0, 3.0])
    def test_negligible_averaging(self, Xi):
        for sign in (1, -1):
            ideal = 0.5 * math.exp(sign * Xi)
            assert abs(ensemble_average(Xi, 0.01, sign) - ideal) / ideal < 1e-2

    def test_invalid(self):
        with pytest.raises(ValidationError):
            ensemble_average(1.0, -1.0, 1)
        with pytest.raises(ValidationError):
            ensemble_average(1.0, 1.0, 0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 30), st.floats(0, 100), st.sampled_from([1, -1]))
    def test_against_mpmath(self, Xi, xi, sign):
        with mpmath.workdps(50):
            ref = mpmath.quad(lambda x: mpmath.exp(-2 * x * x + sign * Xi * mpmath.exp(-xi * x * x)),
                              [-mpmath.inf, -1, 0, 1, mpmath.inf]) / mpmath.sqrt(2 * mpmath.pi)
        assert ensemble_average(Xi, xi, sign) == pytest.approx(float(ref), rel=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 10), st.floats(0, 20), st.sampled_from([1, -1]))
    def test_matches_series(self, Xi, xi, sign):
        assert ensemble_average(Xi, xi, sign) == pytest.approx(variance_tau0_series(xi, Xi, sign), rel=1e-8)
