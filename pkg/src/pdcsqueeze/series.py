"""Quadrature variances of multimode squeezed vacuum seen by a homodyne LO.

Four regimes are covered, all for a Gaussian (or petal) local oscillator:

* the general case, arbitrary ``xi`` and ``tau``
  (:func:`variance_general`);
* the ideal limit ``xi = tau = 0`` (:func:`variance_ideal`);
* ``xi = 0``, where the variance is a Kummer function (:func:`variance_xi0`);
* ``tau = 0``, as a series or as a Gaussian ensemble average
  (:func:`variance_tau0_series`, :func:`variance_tau0_integral`);

and the ``xi = 0`` variance for Laguerre-Gauss petal modes
(:func:`variance_petal`).  ``sign=+1`` selects the anti-squeezed quadrature
(sin 2 theta = +1), ``sign=-1`` the squeezed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import hypergeom, quad
from .errors import FlatFunctionError, ValidationError
from .params import ReducedParams
from .summation import SeriesSum, TruncationPolicy, power_series_terms, sum_series

DEFAULT_TAU_RANGE = (0.01, 50.0)


@dataclass(frozen=True)
class VarianceResult:
    """Quadrature variances in units where vacuum noise is 1/2.

    Attributes:
        sigma_plus_sq: anti-squeezed variance (sin 2 theta = +1).
        sigma_minus_sq: squeezed variance (sin 2 theta = -1).
        sigma_theta_sq: variance at the requested LO phase, if any.
        area: uncertainty area sigma_plus * sigma_minus.
        terms_used: largest number of series terms summed.
        est_rel_err: estimated relative error of the worst series.
        regime: which evaluator produced the numbers.
    """

    sigma_plus_sq: float
    sigma_minus_sq: float
    sigma_theta_sq: Optional[float] = None
    area: float = float("nan")
    terms_used: int = 0
    est_rel_err: float = 0.0
    regime: str = ""


def _check_sign(sign):
    if sign not in (1, -1):
        raise ValidationError("sign", "must be +1 or -1")


def _nonneg(name, value):
    if not value >= 0:
        raise ValidationError(name, "must be non-negative")


def _from_sums(plus: SeriesSum, minus: SeriesSum, regime: str,
               theta: Optional[SeriesSum] = None) -> VarianceResult:
    sums = [s for s in (plus, minus, theta) if s is not None]
    return VarianceResult(
        sigma_plus_sq=plus.value,
        sigma_minus_sq=minus.value,
        sigma_theta_sq=None if theta is None else theta.value,
        area=uncertainty_area(plus.value, minus.value),
        terms_used=max(s.terms for s in sums),
        est_rel_err=max(s.est_rel_err for s in sums),
        regime=regime,
    )


def uncertainty_area(sigma_plus_sq: float, sigma_minus_sq: float) -> float:
    """Product of standard deviations, sqrt(sigma_+^2 sigma_-^2)."""
    return math.sqrt(sigma_plus_sq * sigma_minus_sq)


# -- general (xi, tau) ------------------------------------------------------

def _general_sum(xi, tau, Xi, odd_weight, policy):
    """Sum 1/2 + even series + odd_weight * odd series as one power series.

    Even orders n = 2m contribute (1 + m xi)^(-1/2) / (2 (1 + m tau));
    odd orders n = 2m - 1 contribute [1 + n xi / 2]^(-1/2) / (2 + n tau).
    Folding ``odd_weight`` into the coefficient keeps the cancellation inside
    a single extended-precision accumulation.
    """

    def coefficient(n, ctx):
        if n == 0:
            return ctx.mpf(0.5)
        if n % 2 == 0:
            m = n // 2
            return 1 / (ctx.sqrt(1 + m * ctx.mpf(xi)) * 2 * (1 + m * ctx.mpf(tau)))
        return ctx.mpf(odd_weight) / (ctx.sqrt(1 + n * ctx.mpf(xi) / 2) * (2 + n * ctx.mpf(tau)))

    return sum_series(power_series_terms(coefficient, Xi), policy, scale=Xi)


def variance_general(rp: ReducedParams, policy: TruncationPolicy = None) -> VarianceResult:
    """Quadrature variance for arbitrary ``xi`` and ``tau``.

    ``sigma_q^2 = 1/2 + sum_m Xi^2m (1+m xi)^-1/2 / [2 (1+m tau) (2m)!]
    + sin(2 theta) sum_m Xi^(2m-1) [1+(2m-1) xi/2]^-1/2 / {[2+(2m-1) tau] (2m-1)!}``

    The extremes sigma_+^2 and sigma_-^2 are the values at sin 2 theta = +-1.
    """
    policy = policy or TruncationPolicy()
    xi, tau, Xi = rp.xi, rp.tau, rp.Xi
    plus = _general_sum(xi, tau, Xi, 1.0, policy)
    minus = _general_sum(xi, tau, Xi, -1.0, policy)
    s2t = math.sin(2 * rp.theta)
    if s2t == 1.0:
        theta = plus
    elif s2t == -1.0:
        theta = minus
    else:
        theta = _general_sum(xi, tau, Xi, s2t, policy)
    return _from_sums(plus, minus, "general", theta)


# -- ideal limit ------------------------------------------------------------

def variance_ideal(Xi: float, theta: float = 0.0) -> VarianceResult:
    """Single-mode result ``cosh(Xi)/2 + sin(2 theta) sinh(Xi)/2``.

    The state stays a minimum-uncertainty state, so ``area`` is exactly 1/2.
    """
    _nonneg("Xi", Xi)
    return VarianceResult(
        sigma_plus_sq=0.5 * math.exp(Xi),
        sigma_minus_sq=0.5 * math.exp(-Xi),
        sigma_theta_sq=0.5 * math.cosh(Xi) + 0.5 * math.sin(2 * theta) * math.sinh(Xi),
        area=0.5,
        terms_used=0,
        est_rel_err=0.0,
        regime="ideal",
    )


# -- xi = 0 -----------------------------------------------------------------

def _xi0_sum(tau, Xi, sign, policy):
    if not tau > 0:
        raise ValidationError("tau", "must be positive in the xi = 0 closed form")
    _nonneg("Xi", Xi)
    _check_sign(sign)
    M = 2.0 / tau
    s = hypergeom.hyp1f1_sum(M, 1.0 + M, sign * Xi, policy)
    return SeriesSum(0.5 * s.value, s.terms, 0.5 * s.last_term, 0.5 * s.abs_sum,
                     s.digits, s.est_rel_err)


def variance_xi0(tau: float, Xi: float, sign: int, policy: TruncationPolicy = None) -> float:
    """``(1/2) 1F1(2/tau; 1 + 2/tau; sign * Xi)``, the xi = 0 variance."""
    return _xi0_sum(tau, Xi, sign, policy or TruncationPolicy()).value


def xi0_result(tau: float, Xi: float, policy: TruncationPolicy = None) -> VarianceResult:
    policy = policy or TruncationPolicy()
    return _from_sums(_xi0_sum(tau, Xi, 1, policy), _xi0_sum(tau, Xi, -1, policy), "xi0")


# -- tau = 0 ----------------------------------------------------------------

def _tau0_sum(xi, Xi, sign, policy):
    _nonneg("xi", xi)
    _nonneg("Xi", Xi)
    _check_sign(sign)

    def coefficient(n, ctx):
        return 1 / (ctx.sqrt(2) * ctx.sqrt(2 + n * ctx.mpf(xi)))

    return sum_series(power_series_terms(coefficient, sign * Xi), policy, scale=Xi)


def variance_tau0_series(xi: float, Xi: float, sign: int,
                         policy: TruncationPolicy = None) -> float:
    """``sum_n (sign Xi)^n / (n! sqrt(2) sqrt(2 + n xi))``, the tau = 0 variance."""
    return _tau0_sum(xi, Xi, sign, policy or TruncationPolicy()).value


def variance_tau0_integral(xi: float, Xi: float, sign: int) -> float:
    """tau = 0 variance as a Gaussian average over squeezing ``Xi exp(-xi x^2)``."""
    _nonneg("xi", xi)
    _nonneg("Xi", Xi)
    _check_sign(sign)
    return quad.ensemble_average(Xi, xi, sign)


def tau0_result(xi: float, Xi: float, policy: TruncationPolicy = None) -> VarianceResult:
    policy = policy or TruncationPolicy()
    return _from_sums(_tau0_sum(xi, Xi, 1, policy), _tau0_sum(xi, Xi, -1, policy), "tau0")


# -- petal modes --------------------------------------------------------------

def _check_ell(ell):
    if int(ell) != ell or ell < 0:
        raise ValidationError("ell", "must be a non-negative integer")


def _petal_sum(ell, tau, Xi, sign, policy):
    _check_ell(ell)
    if not tau > 0:
        raise ValidationError("tau", "must be positive for petal modes")
    _nonneg("Xi", Xi)
    _check_sign(sign)
    ell = int(ell)

    def coefficient(n, ctx):
        d = n * ctx.mpf(tau) + 2
        return (2 / d) ** ell / d

    return sum_series(power_series_terms(coefficient, sign * Xi), policy, scale=Xi)


def variance_petal(ell: int, tau: float, Xi: float, sign: int,
                   policy: TruncationPolicy = None) -> float:
    """Variance seen by a petal-mode LO with azimuthal index ``|ell|``.

    ``sum_n (sign Xi)^n 2^|ell| / ((n tau + 2)^(|ell|+1) n!)`` at xi = 0 and
    radial index 0.  ``ell = 0`` reproduces :func:`variance_xi0`.
    """
    return _petal_sum(ell, tau, Xi, sign, policy or TruncationPolicy()).value


def variance_petal_hypergeom(ell: int, tau: float, Xi: float, sign: int,
                             policy: TruncationPolicy = None) -> float:
    """Same quantity as :func:`variance_petal` via ``(1/2) tFt(M..; N..; +-Xi)``."""
    _check_ell(ell)
    _check_sign(sign)
    _nonneg("Xi", Xi)
    spec = hypergeom.HypergeomSpec.for_petal(int(ell), tau, sign * Xi)
    return 0.5 * hypergeom.hyp_repeated(spec, policy)


def petal_result(ell: int, tau: float, Xi: float,
                 policy: TruncationPolicy = None) -> VarianceResult:
    policy = policy or TruncationPolicy()
    return _from_sums(_petal_sum(ell, tau, Xi, 1, policy),
                      _petal_sum(ell, tau, Xi, -1, policy), "petal")


# -- uncertainty-area maximum ---------------------------------------------------

@dataclass(frozen=True)
class AreaPeak:
    """Location of the maximum of sigma_+ sigma_- over ``tau``."""

    tau: float
    area: float
    interior: bool


_INV_PHI = (math.sqrt(5) - 1) / 2


def _golden_max(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def area_peak(
    Xi: float,
    ell: int = 0,
    tau_range: Tuple[float, float] = DEFAULT_TAU_RANGE,
    rel_tol: float = 1e-4,
    scan_points: int = 41,
    policy: TruncationPolicy = None,
) -> AreaPeak:
    """Locate the ``tau`` maximising the uncertainty area at fixed ``Xi``.

    A log-spaced scan brackets the maximum, then golden-section search in
    ``log tau`` refines it to relative ``tau`` tolerance ``rel_tol``.
    ``interior`` is False when the maximum sits on an end of ``tau_range``.

    Raises:
        FlatFunctionError: the area does not vary over the interval
            (e.g. ``Xi = 0``, where it is identically 1/2).
    """
    _check_ell(ell)
    lo, hi = tau_range
    if not 0 < lo < hi:
        raise ValidationError("tau_range", "need 0 < lo < hi")
    policy = policy or TruncationPolicy()

    def area_at_log(t):
        return petal_result(ell, math.exp(t), Xi, policy).area

    grid = np.linspace(math.log(lo), math.log(hi), scan_points)
    values = [area_at_log(t) for t in grid]
    top, bottom = max(values), min(values)
    if top - bottom <= 1e-12 * top:
        raise FlatFunctionError(f"area is flat over tau in [{lo}, {hi}] at Xi={Xi}")
    i = int(np.argmax(values))
    if i == 0 or i == len(grid) - 1:
        return AreaPeak(tau=math.exp(grid[i]), area=values[i], interior=False)
    t, a = _golden_max(area_at_log, grid[i - 1], grid[i + 1], math.log1p(rel_tol))
    return AreaPeak(tau=math.exp(t), area=a, interior=True)
