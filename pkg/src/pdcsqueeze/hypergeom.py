"""Confluent hypergeometric series by direct summation.

Only two shapes are needed: the Kummer function 1F1(a; b; x) and the
repeated-parameter function tFt(M, ..., M; N, ..., N; x) with N = M + 1.
Both are entire in x and are summed term by term; Pochhammer ratios are
updated incrementally so no gamma function is evaluated, which keeps large
parameters (M = 2/tau with small tau) from overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .summation import SeriesSum, TruncationPolicy, sum_series


@dataclass(frozen=True)
class HypergeomSpec:
    """Parameters of tFt(M, ..., M; N, ..., N; x), each repeated ``t`` times."""

    t: int
    M: float
    N: float
    x: float

    def __post_init__(self):
        if int(self.t) != self.t or self.t < 1:
            raise ValidationError("t", "must be an integer >= 1")
        if not self.M > 0:
            raise ValidationError("M", "must be positive")
        if not math.isclose(self.N, self.M + 1.0, rel_tol=1e-14, abs_tol=1e-14):
            raise ValidationError("N", "must equal M + 1")

    @classmethod
    def for_petal(cls, abs_ell: int, tau: float, x: float) -> "HypergeomSpec":
        """Parameters for a petal mode of azimuthal index ``abs_ell``."""
        if not tau > 0:
            raise ValidationError("tau", "must be positive")
        M = 2.0 / tau
        return cls(t=abs_ell + 1, M=M, N=1.0 + M, x=x)


def _check_b(b):
    if b <= 0 and float(b).is_integer():
        raise ValidationError("b", "must not be a non-positive integer")


def hyp1f1_sum(a: float, b: float, x: float, policy: TruncationPolicy = None) -> SeriesSum:
    """Kummer series with convergence diagnostics; see :func:`hyp1f1`."""
    _check_b(b)
    policy = policy or TruncationPolicy()

    def factory(ctx):
        ac, bc, xc = ctx.mpf(a), ctx.mpf(b), ctx.mpf(x)
        term = ctx.mpf(1)
        n = 0
        while True:
            yield term
            term = term * (ac + n) / (bc + n) * xc / (n + 1)
            n += 1

    return sum_series(factory, policy, scale=x)


def hyp1f1(a: float, b: float, x: float, policy: TruncationPolicy = None) -> float:
    r"""Confluent hypergeometric function :math:`{}_1F_1(a; b; x)`.

    Args:
        a: numerator parameter.
        b: denominator parameter; non-positive integers are rejected.
        x: argument.
        policy: truncation and precision settings.

    Returns:
        float: the function value.
    """
    return hyp1f1_sum(a, b, x, policy).value


def repeated_terms(spec: HypergeomSpec):
    """Term factory for tFt: ``factory(ctx)`` yields ``(M/(M+n))^t x^n / n!``."""
    t, M, x = spec.t, spec.M, spec.x

    def factory(ctx):
        Mc, xc = ctx.mpf(M), ctx.mpf(x)
        term = ctx.mpf(1)
        n = 0
        while True:
            yield term
            # (M)_n / (M+1)_n = M / (M+n), so the ratio of consecutive
            # Pochhammer quotients is (M+n) / (M+n+1)
            term = term * ((Mc + n) / (Mc + n + 1)) ** t * xc / (n + 1)
            n += 1

    return factory


def hyp_repeated_sum(spec: HypergeomSpec, policy: TruncationPolicy = None) -> SeriesSum:
    """Repeated-parameter series with convergence diagnostics."""
    return sum_series(repeated_terms(spec), policy or TruncationPolicy(), scale=spec.x)


def hyp_repeated(spec: HypergeomSpec, policy: TruncationPolicy = None) -> float:
    """Evaluate tFt(M, ..., M; M+1, ..., M+1; x).

    The n-th term is ``(M / (M + n))**t * x**n / n!``.
    """
    return hyp_repeated_sum(spec, policy).value
