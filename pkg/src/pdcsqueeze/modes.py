"""Laguerre-Gauss and petal local-oscillator modes.

Angular spectra come from the generating function

    G(k, mu, nu, s) = w0 / (1 + nu) * exp[i w0 (kx + i s ky) mu / (2 (1 + nu))]
                      * exp[-w0^2 |k|^2 (1 - nu) / (4 (1 + nu))]

whose coefficient of ``mu^|l| nu^p``, times ``N_{l,p} |l|! (-1)^p``, is the
normalised LG spectrum (unit norm under ``d^2k``).  Coefficients are extracted
from truncated power series, never by numerical differentiation.

The petal variance is computed a second way through the same mechanism: the
overlap of two generating functions with every kernel order gives

    J_n = (+-Xi)^n / (d_n n!) exp[mu1 mu2 c / d_n],
    d_n = n tau (1 - nu1)(1 - nu2) + 2 (1 - nu1 nu2),

with ``c = (1 + s1 s2)/2`` for even ``n`` and ``(1 - s1 s2)/2`` for odd
``n``.  The variance is the ``(mu1 mu2)^|l| (nu1 nu2)^p`` coefficient scaled
by ``2 pi N^2 (|l|!)^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import ValidationError
from .summation import TruncationPolicy, power_series_terms, sum_series

MAX_ELL = 32
KINDS = ("gaussian", "lg_single", "lg_petal")


@dataclass(frozen=True)
class ModeSpec:
    """Transverse mode of the local oscillator.

    Attributes:
        abs_ell: azimuthal index magnitude, at most 32.
        p: radial index.
        w0: LO waist [m].
        theta: LO phase, applied as a global factor ``exp(i theta)``.
        kind: ``gaussian``, ``lg_single`` or ``lg_petal``.
        sign: sign ``s`` of the azimuthal index for ``lg_single``.
        relative_phase: phase of the ``-|l|`` component of a petal mode.
    """

    abs_ell: int = 0
    p: int = 0
    w0: float = 1.0
    theta: float = 0.0
    kind: str = "gaussian"
    sign: int = 1
    relative_phase: float = 0.0

    def __post_init__(self):
        if int(self.abs_ell) != self.abs_ell or not 0 <= self.abs_ell <= MAX_ELL:
            raise ValidationError("abs_ell", f"must be an integer in [0, {MAX_ELL}]")
        if int(self.p) != self.p or self.p < 0:
            raise ValidationError("p", "must be a non-negative integer")
        if not self.w0 > 0:
            raise ValidationError("w0", "must be positive")
        if self.kind not in KINDS:
            raise ValidationError("kind", f"must be one of {KINDS}")
        if self.kind == "gaussian" and (self.abs_ell or self.p):
            raise ValidationError("kind", "a gaussian mode has abs_ell = p = 0")
        if self.sign not in (1, -1):
            raise ValidationError("sign", "must be +1 or -1")


@dataclass(frozen=True)
class GeneratingEval:
    """Value of the overlap generating function at one parameter point."""

    mu1: complex
    mu2: complex
    nu1: float
    nu2: float
    value: complex

    def __post_init__(self):
        if not (abs(self.nu1) < 1 and abs(self.nu2) < 1):
            raise ValidationError("nu", "radial generating parameters need |nu| < 1")


def lg_norm(ell: int, p: int = 0) -> float:
    """``N_{l,p} = sqrt(2^(|l|-1) p! / (pi (p+|l|)!))`` via log-factorials."""
    if int(p) != p or p < 0:
        raise ValidationError("p", "must be a non-negative integer")
    a = abs(int(ell))
    log_sq = (a - 1) * math.log(2) + math.lgamma(p + 1) - math.log(math.pi) - math.lgamma(p + a + 1)
    return math.exp(0.5 * log_sq)


# -- truncated series in one variable ------------------------------------------

def _mul(a, b, order):
    out = [0 * a[0]] * (order + 1)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            out[i + j] = out[i + j] + a[i] * b[j]
    return out


def _exp(f, order):
    """Coefficients of ``exp(f(nu))`` from those of ``f`` (g' = f' g)."""
    g = [np.exp(f[0])] + [0 * f[0]] * order
    for k in range(1, order + 1):
        acc = 0 * f[0]
        for j in range(1, k + 1):
            acc = acc + j * f[j] * g[k - j]
        g[k] = acc / k
    return g


def generating_coefficient(kx, ky, ell: int, p: int, s: int, w0: float, depth: int = None):
    """Coefficient of ``mu^|l| nu^p`` in ``G(k, mu, nu, s)`` (without ``N``).

    Both exponentials are expanded in ``nu`` to order ``depth`` (default
    ``p``); the ``mu`` dependence ``exp(A mu / (1 + nu))`` contributes
    ``A^|l| (1 + nu)^-|l| / |l|!`` exactly.

    Raises:
        ValidationError: ``depth`` below the requested radial order.
    """
    a = abs(int(ell))
    depth = p if depth is None else depth
    if depth < p:
        raise ValidationError("depth", f"truncation depth {depth} is below p = {p}")
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    amp = 1j * w0 * (kx + 1j * s * ky) / 2
    X = w0 * w0 * (kx * kx + ky * ky) / 4
    inv = [(-1.0) ** k for k in range(depth + 1)]  # 1 / (1 + nu)
    one_minus = [1.0, -1.0] + [0.0] * max(0, depth - 1)
    gauss_arg = [-X * c for c in _mul(one_minus[: depth + 1], inv, depth)]
    series = _exp([g * np.ones_like(X) for g in gauss_arg], depth)
    prefactor = inv
    for _ in range(a):
        prefactor = _mul(prefactor, inv, depth)
    total = _mul(series, [c * np.ones_like(X) for c in prefactor], depth)
    return w0 * amp**a / math.factorial(a) * total[p]


def lg_spectrum(spec: ModeSpec, kx, ky, depth: int = None):
    """Normalised LG angular spectrum ``N |l|! (-1)^p [mu^|l| nu^p] G``.

    A ``gaussian`` spec gives the fundamental mode; ``lg_petal`` delegates to
    :func:`petal_spectrum`.
    """
    if spec.kind == "lg_petal":
        return petal_spectrum(spec, kx, ky, depth)
    coeff = generating_coefficient(kx, ky, spec.abs_ell, spec.p, spec.sign, spec.w0, depth)
    scale = lg_norm(spec.abs_ell, spec.p) * math.factorial(spec.abs_ell) * (-1) ** spec.p
    return cmath.exp(1j * spec.theta) * scale * coeff


def petal_spectrum(spec: ModeSpec, kx, ky, depth: int = None):
    """``[LG(+l) + exp(i beta) LG(-l)] / sqrt(2)``; for ``l = 0`` the Gaussian itself."""
    if spec.kind != "lg_petal":
        raise ValidationError("kind", "petal_spectrum needs kind 'lg_petal'")
    plus = ModeSpec(spec.abs_ell, spec.p, spec.w0, spec.theta, "lg_single", 1)
    if spec.abs_ell == 0:
        return lg_spectrum(plus, kx, ky, depth)
    minus = ModeSpec(spec.abs_ell, spec.p, spec.w0, spec.theta, "lg_single", -1)
    return (lg_spectrum(plus, kx, ky, depth)
            + cmath.exp(1j * spec.relative_phase) * lg_spectrum(minus, kx, ky, depth)) / math.sqrt(2)


def grid_inner_product(a: ModeSpec, b: ModeSpec, half_width: float = None,
                       n_points: int = 401) -> complex:
    """``int conj(a(k)) b(k) d^2k`` on a square grid (trapezoid rule)."""
    w0 = min(a.w0, b.w0)
    if half_width is None:
        half_width = 14.0 / w0
    k = np.linspace(-half_width, half_width, n_points)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    h = k[1] - k[0]
    return complex(np.sum(np.conj(lg_spectrum(a, kx, ky)) * lg_spectrum(b, kx, ky)) * h * h)


# -- variance through coefficient extraction -----------------------------------

def exponent_factor(parity: str, s1: int, s2: int) -> float:
    """Weight of ``mu1 mu2`` in the exponent of the order-``n`` overlap.

    ``(1 + s1 s2)/2`` for even orders, ``(1 - s1 s2)/2`` for odd orders.  For
    a single LG mode (``s1 = s2``) the odd orders lose all ``mu`` dependence.
    """
    if parity == "even":
        return (1 + s1 * s2) / 2
    if parity == "odd":
        return (1 - s1 * s2) / 2
    raise ValidationError("parity", "must be 'even' or 'odd'")


def _bivariate_inverse_power(n, tau, power, p, ctx):
    """``[nu1^p nu2^p] d_n(nu1, nu2)^-power`` by a truncated binomial series."""
    D = n * ctx.mpf(tau) + 2
    if p == 0:
        return D ** (-power)
    size = p + 1
    # e = d/D - 1 = (-n tau (nu1 + nu2) + (n tau - 2) nu1 nu2) / D
    e = [[ctx.mpf(0)] * size for _ in range(size)]
    e[1][0] = e[0][1] = -n * ctx.mpf(tau) / D
    e[1][1] = (n * ctx.mpf(tau) - 2) / D

    def mul(a, b):
        out = [[ctx.mpf(0)] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                if a[i][j]:
                    for k in range(size - i):
                        for m in range(size - j):
                            out[i + k][j + m] += a[i][j] * b[k][m]
        return out

    total = ctx.mpf(0)
    e_power = [[ctx.mpf(0)] * size for _ in range(size)]
    e_power[0][0] = ctx.mpf(1)
    binom = ctx.mpf(1)
    for k in range(2 * p + 1):
        if k:
            e_power = mul(e_power, e)
            binom = binom * (-power - k + 1) / k
        total += binom * e_power[p][p]
    return total * D ** (-power)


def _mode_weights(abs_ell, relative_phase):
    """Superposition weights over the azimuthal sign ``s``."""
    if abs_ell == 0:
        return {1: 1.0}
    r = 1 / math.sqrt(2)
    return {1: r, -1: r * cmath.exp(1j * relative_phase)}


def _order_weights(abs_ell, weights):
    """Net weight of the ``(mu1 mu2)^|l|`` coefficient for even and odd orders.

    Even orders pair a mode with its conjugate, odd orders with itself.
    """
    even = odd = 0j
    for s1, w1 in weights.items():
        for s2, w2 in weights.items():
            ce = exponent_factor("even", s1, s2)
            co = exponent_factor("odd", s1, s2)
            even += complex(w1).conjugate() * w2 * ce**abs_ell
            odd += w1 * w2 * co**abs_ell
    return even, odd


def _generating_sum(abs_ell, tau, Xi, sign, p, xi, weights, policy, depth):
    if depth < abs_ell:
        raise ValidationError("depth", f"depth {depth} is below |ell| = {abs_ell}")
    if tau < 0 or Xi < 0 or xi < 0:
        raise ValidationError("tau", "tau, Xi and xi must be non-negative")
    if sign not in (1, -1):
        raise ValidationError("sign", "must be +1 or -1")
    even_w, odd_w = _order_weights(abs_ell, weights)
    even_w, odd_w = abs(even_w), abs(odd_w)
    norm_sq = lg_norm(abs_ell, p) ** 2
    fact = math.factorial(abs_ell)

    def coefficient(n, ctx):
        # exp(y u) u = sum_k y^k u^(k+1) / k! with y = mu1 mu2, u = 1/d,
        # truncated at k = depth; only k = |ell| survives extraction
        y_coeffs = [ctx.mpf(1)]
        for k in range(1, depth + 1):
            y_coeffs.append(y_coeffs[-1] / k)
        y_coeff = y_coeffs[abs_ell]
        nu_part = _bivariate_inverse_power(n, tau, abs_ell + 1, p, ctx)
        weight = even_w if n % 2 == 0 else odd_w
        spectral = 1 / ctx.sqrt(1 + n * ctx.mpf(xi) / 2) if xi else 1
        return 2 * ctx.pi * norm_sq * fact * fact * weight * y_coeff * nu_part * spectral

    return sum_series(power_series_terms(coefficient, sign * Xi), policy, scale=Xi)


def petal_variance_via_generating(
    ell: int,
    tau: float,
    Xi: float,
    sign: int,
    depth: int = None,
    p: int = 0,
    xi: float = 0.0,
    relative_phase: float = 0.0,
    policy: TruncationPolicy = None,
) -> float:
    """Petal-mode variance by coefficient extraction from the overlap generator.

    Independent of :func:`pdcsqueeze.series.variance_petal`, which sums the
    closed series; the two agree to 1e-10.  ``p > 0`` (through the ``nu``
    expansion) and ``xi > 0`` are experimental extensions.  The relative
    phase of the two petal components only rotates the odd-order amplitude
    and so leaves the variance unchanged.

    Raises:
        ValidationError: ``depth < |ell|`` or invalid parameters.
    """
    a = abs(int(ell))
    if a > MAX_ELL:
        raise ValidationError("ell", f"|ell| must not exceed {MAX_ELL}")
    depth = a if depth is None else int(depth)
    weights = _mode_weights(a, relative_phase)
    result = _generating_sum(a, tau, Xi, sign, p, xi, weights, policy or TruncationPolicy(), depth)
    return result.value


def single_lg_variance(ell: int, tau: float, Xi: float,
                       policy: TruncationPolicy = None) -> Tuple[float, float]:
    """``(sigma_plus^2, sigma_minus^2)`` for a single LG mode with ``|ell| >= 1``.

    The odd orders carry no ``(mu1 mu2)^|l|`` term, so only the even sum
    survives and the two variances coincide: no squeezing.
    """
    a = abs(int(ell))
    if a < 1:
        raise ValidationError("ell", "single LG variance needs |ell| >= 1")
    policy = policy or TruncationPolicy()
    plus = _generating_sum(a, tau, Xi, 1, 0, 0.0, {1: 1.0}, policy, a).value
    minus = _generating_sum(a, tau, Xi, -1, 0, 0.0, {1: 1.0}, policy, a).value
    return plus, minus


def overlap_generator(mu1: complex, mu2: complex, nu1: float, nu2: float,
                      s1: int, s2: int, tau: float, Xi: float, sign: int,
                      part: str = "both", n_terms: int = 80,
                      ell: int = 0, p: int = 0) -> GeneratingEval:
    """Direct evaluation of the overlap generating function at one point.

    Sums ``2 pi N^2 (+-Xi)^n / (d_n n!) exp(mu1 mu2 c_n / d_n)`` over the even
    orders, the odd orders, or both (``part``).  Meant for inspection and for
    checking the selection rule, not for precision work.
    """
    if part not in ("even", "odd", "both"):
        raise ValidationError("part", "must be 'even', 'odd' or 'both'")
    ev = GeneratingEval(mu1, mu2, nu1, nu2, 0j)
    total = 0j
    x = sign * Xi
    term_power = 1.0
    for n in range(n_terms):
        if n:
            term_power *= x / n
        parity = "even" if n % 2 == 0 else "odd"
        if part != "both" and part != parity:
            continue
        d = n * tau * (1 - nu1) * (1 - nu2) + 2 * (1 - nu1 * nu2)
        c = exponent_factor(parity, s1, s2)
        total += term_power / d * cmath.exp(mu1 * mu2 * c / d)
    value = 2 * math.pi * lg_norm(ell, p) ** 2 * total
    return GeneratingEval(ev.mu1, ev.mu2, ev.nu1, ev.nu2, value)


def petal_minimum_variances(ells: List[int], tau: float, Xi: float) -> List[float]:
    """``sigma_minus^2`` of petal modes for each ``|ell|`` in ``ells``."""
    return [petal_variance_via_generating(ell, tau, Xi, -1) for ell in ells]
