"""Tests for the grid oracle of kernel broadening and overlap factors."""
import math

import numpy as np
import pytest

from pdcsqueeze.errors import GridError, ValidationError
from pdcsqueeze.kernel_oracle import (
    contract,
    diagnostic_scales,
    fit_gaussian_width,
    gaussian_kernel,
    identity_kernel,
    iterated_power,
    kernel_width,
    overlap_factor,
    predicted_width,
    reconstructed_terms,
    spectral_overlap_factor,
    transverse_width,
    uniform_grid,
    broadening_reports,
)
from pdcsqueeze.params import PhysicalConfig
from pdcsqueeze.series import variance_general
from pdcsqueeze.params import ReducedParams


@pytest.fixture(scope="module")
def grid():
    return uniform_grid(8.0 * 3, 512)


class TestSampledKernel:
    def test_symmetric(self, grid):
        for coord in ("sum", "difference"):
            k = gaussian_kernel(grid, 1.0, coord)
            assert k.is_symmetric()
            assert k.boundary_ratio() < 1e-10

    def test_identity(self, grid):
        k = gaussian_kernel(grid, 1.0, "sum")
        assert np.max(np.abs(contract(identity_kernel(grid), k).values - k.values)) < 1e-8
        assert np.max(np.abs(contract(k, identity_kernel(grid)).values - k.values)) < 1e-8

    def test_associative(self, grid):
        a = gaussian_kernel(grid, 1.0, "sum")
        b = gaussian_kernel(grid, 1.5, "difference")
        c = gaussian_kernel(grid, 0.7, "sum")
        left = contract(contract(a, b), c).values
        right = contract(a, contract(b, c)).values
        assert np.max(np.abs(left - right)) <= 1e-10 * np.max(np.abs(left))

    def test_two_fold_law(self, grid):
        """exp(-(x1+x2)^2/2) contracted with itself is a difference Gaussian of width sqrt(2)"""
        k2 = contract(gaussian_kernel(grid, 1.0, "sum"), gaussian_kernel(grid, 1.0, "sum"))
        assert kernel_width(k2) == pytest.approx(math.sqrt(2), rel=1e-8)
        ref = gaussian_kernel(grid, math.sqrt(2), "difference").values
        mid = slice(128, 384)
        assert np.allclose(k2.values[mid, mid], ref[mid, mid], atol=1e-12)

    def test_grid_mismatch(self, grid):
        other = uniform_grid(10.0, 512)
        with pytest.raises(GridError):
            contract(gaussian_kernel(grid, 1.0), gaussian_kernel(other, 1.0))

    def test_power_one(self, grid):
        k = gaussian_kernel(grid, 1.0)
        assert iterated_power(k, 1) is k

    def test_power_four_transverse(self):
        base = transverse_width(1e-3, 1.6, 1.6)
        g = uniform_grid(8 * predicted_width(base, 4), 512)
        k4 = iterated_power(gaussian_kernel(g, base, "difference"), 4)
        fitted = kernel_width(k4)
        assert abs(fitted - 2 * base) / (2 * base) < 1e-4

    def test_power_spectral(self):
        g = uniform_grid(8 * math.sqrt(6), 512)
        k = iterated_power(gaussian_kernel(g, 1.0, "difference"), 6)
        assert abs(kernel_width(k) - math.sqrt(6)) / math.sqrt(6) < 1e-4

    def test_invalid_power(self, grid):
        with pytest.raises(ValidationError):
            iterated_power(gaussian_kernel(grid, 1.0), 0)


class TestFitWidth:
    def test_exact(self):
        x = np.linspace(-12, 12, 801)
        assert fit_gaussian_width(x, np.exp(-x**2 / 2)) == pytest.approx(1.0, abs=1e-8)

    def test_half_sampled(self):
        """sigma = 3 sampled on one side of the peak only: the tail fallback"""
        x = np.linspace(0, 30, 301)
        assert fit_gaussian_width(x, np.exp(-x**2 / 18)) == pytest.approx(3.0, rel=1e-4)

    def test_truncated_tails(self):
        x = np.linspace(-4, 4, 161)
        assert fit_gaussian_width(x, np.exp(-x**2 / 18)) == pytest.approx(3.0, rel=1e-4)

    def test_flat(self):
        with pytest.raises(ValidationError, match="flat"):
            fit_gaussian_width(np.linspace(-1, 1, 50), np.ones(50))

    @pytest.mark.parametrize("profile", [np.zeros(20), -np.ones(20)])
    def test_non_positive(self, profile):
        with pytest.raises(ValidationError):
            fit_gaussian_width(np.linspace(-1, 1, 20), profile)


class TestBroadening:
    def test_reports(self):
        reports = broadening_reports()
        assert [r.order for r in reports if r.sector == "transverse-even"] == [2, 4, 6, 8]
        assert [r.order for r in reports if r.sector == "transverse-odd"] == [1, 3, 5, 7]
        assert [r.order for r in reports if r.sector == "spectral"] == list(range(1, 9))
        for r in reports:
            assert r.rel_dev < 1e-4
            assert r.rel_dev == abs(r.fitted_width - r.predicted_width) / r.predicted_width

    def test_physical_units(self):
        reports = broadening_reports(pump_waist=1e-3, index_pump=1.6, index_degenerate=1.7,
                                     pump_bandwidth=2e12)
        assert max(r.rel_dev for r in reports) < 1e-4

    def test_even_coefficient_uses_index_ratio_squared(self):
        """With n_p != n_d the even-order exponent scales with (n_d/n_p)^2"""
        wp, n_p, n_d = 1e-3, 1.66, 1.5
        base = transverse_width(wp, n_p, n_d)
        g = uniform_grid(8 * predicted_width(base, 2), 512)
        k2 = iterated_power(gaussian_kernel(g, base, "sum"), 2)
        coeff = 1 / (2 * kernel_width(k2) ** 2)
        assert coeff == pytest.approx(wp**2 * n_d**2 / (4 * 2 * n_p**2), rel=1e-6)
        assert coeff != pytest.approx(wp**2 * n_d / (4 * 2 * n_p), rel=1e-3)


class TestOverlap:
    @pytest.mark.parametrize("tau", [0.1, 1.0, 5.0])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_transverse(self, m, tau):
        assert overlap_factor(m, "even", tau) == pytest.approx(1 / (1 + m * tau), abs=1e-5)
        assert overlap_factor(m, "odd", tau) == pytest.approx(2 / (2 + (2 * m - 1) * tau), abs=1e-5)

    def test_examples(self):
        assert overlap_factor(1, "even", 1.0) == pytest.approx(0.5, abs=1e-5)
        assert overlap_factor(1, "odd", 1.0) == pytest.approx(2 / 3, abs=1e-5)

    def test_small_tau(self):
        assert overlap_factor(1, "even", 0.01) == pytest.approx(1.0, abs=0.011)
        assert overlap_factor(1, "odd", 0.01) == pytest.approx(1.0, abs=0.006)

    @pytest.mark.parametrize("xi", [0.1, 1.0, 4.0])
    def test_spectral(self, xi):
        for m in (1, 2):
            assert spectral_overlap_factor(m, "even", xi) == pytest.approx((1 + m * xi) ** -0.5, abs=1e-5)
            assert spectral_overlap_factor(m, "odd", xi) == pytest.approx(
                (1 + (2 * m - 1) * xi / 2) ** -0.5, abs=1e-5)

    def test_unresolvable_grid(self):
        with pytest.raises(GridError):
            overlap_factor(1, "even", 1e5)

    @pytest.mark.parametrize("bad", [dict(m=0, parity="even", tau=1.0), dict(m=1, parity="both", tau=1.0),
                                     dict(m=1, parity="odd", tau=0.0)])
    def test_invalid(self, bad):
        with pytest.raises(ValidationError):
            overlap_factor(**bad)


class TestSeriesReconstruction:
    @pytest.mark.parametrize("tau,Xi", [(1.0, 1.0), (0.3, 2.5)])
    def test_first_six_terms(self, tau, Xi):
        terms = reconstructed_terms(tau, Xi, -1)
        expected = [0.5] + [
            (1 / (2 * (1 + n // 2 * tau)) if n % 2 == 0 else -1 / (2 + n * tau)) * Xi**n / math.factorial(n)
            for n in range(1, 6)
        ]
        assert terms == pytest.approx(expected, rel=1e-6)

    def test_partial_sum_approaches_series(self):
        terms = reconstructed_terms(0.5, 0.3, 1, n_terms=6, xi=0.5)
        full = variance_general(ReducedParams(0.5, 0.5, 0.3)).sigma_plus_sq
        assert sum(terms) == pytest.approx(full, rel=1e-6)


def test_diagnostic_scales():
    cfg = PhysicalConfig(1e-3, 1e-4, 1e12, 1e13, 4e-7, 1e-3, 1.0, 1e-12, 1.6, 1.6)
    scales = diagnostic_scales(cfg)
    assert scales.M_e > 0 and scales.M_o > 0 and scales.M_1 > 0
    assert scales.M_e == pytest.approx(scales.M_o)
