"""Truncated summation of entire power series with cancellation control.

Every series in this package has the shape ``sum_n c_n x**n / n!`` with
bounded coefficients.  For ``x < 0`` the terms alternate and grow to roughly
``exp(|x|)`` before decaying, while the sum itself can be as small as
``exp(-|x|)``.  The summation runs first in double precision with a
compensated accumulator; when the measured cancellation would eat into the
requested tolerance it is repeated in software extended precision.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import mpmath

from .errors import PrecisionError, TruncationError, ValidationError

PRECISION_ENV = "SQZ_PRECISION_DIGITS"

# consecutive sub-tolerance terms required before stopping
_QUIET_TERMS = 3


def _env_digits() -> Optional[int]:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        digits = int(raw)
    except ValueError:
        raise ValidationError(PRECISION_ENV, f"not an integer: {raw!r}") from None
    if digits < 16:
        raise ValidationError(PRECISION_ENV, "must be at least 16 digits")
    return digits


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule and precision budget for series evaluation.

    ``precision_digits=None`` selects the automatic budget
    ``20 + ceil(|x| log10 e)``, which is raised further if the measured
    cancellation demands it.  An explicit value is a hard budget: exceeding it
    raises :class:`PrecisionError`.  The environment variable
    ``SQZ_PRECISION_DIGITS`` overrides the default.
    """

    rel_tol: float = 1e-12
    max_terms: int = 400
    precision_digits: Optional[int] = field(default_factory=_env_digits)

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValidationError("rel_tol", "must lie in (0, 1)")
        if self.max_terms < 10:
            raise ValidationError("max_terms", "must be at least 10")
        if self.precision_digits is not None and self.precision_digits < 16:
            raise ValidationError("precision_digits", "must be at least 16")

    @property
    def auto_precision(self) -> bool:
        return self.precision_digits is None

    def digits_for(self, x: float) -> int:
        if self.precision_digits is not None:
            return self.precision_digits
        return 20 + math.ceil(abs(x) * math.log10(math.e))


class _FloatContext:
    """Duck-typed stand-in for an mpmath context using machine floats."""

    dps = 15
    eps = 2.0**-52
    pi = math.pi
    mpf = float
    sqrt = staticmethod(math.sqrt)
    exp = staticmethod(math.exp)
    fabs = staticmethod(abs)


FLOAT_CONTEXT = _FloatContext()

_local = threading.local()


def mp_context(dps: int) -> mpmath.MPContext:
    """Thread-private mpmath context at ``dps`` decimal digits.

    The global ``mpmath.mp`` context is shared mutable state, so each thread
    keeps its own contexts.
    """
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(dps)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = dps
        cache[dps] = ctx
    return ctx


class NeumaierSum:
    """Compensated running sum (Neumaier's variant of Kahan summation)."""

    def __init__(self):
        self.total = 0.0
        self.carry = 0.0

    def add(self, value):
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.carry += (self.total - t) + value
        else:
            self.carry += (value - t) + self.total
        self.total = t

    @property
    def value(self):
        return self.total + self.carry


class _ExactSum:
    """Plain accumulator for extended-precision numbers."""

    def __init__(self, ctx):
        self.value = ctx.mpf(0)

    def add(self, v):
        self.value += v


@dataclass(frozen=True)
class SeriesSum:
    """Outcome of one truncated summation."""

    value: float
    terms: int
    last_term: float
    abs_sum: float
    digits: int
    est_rel_err: float


TermFactory = Callable[[object], Iterator[object]]


def _run(factory, ctx, policy, min_terms):
    if ctx is FLOAT_CONTEXT:
        acc = NeumaierSum()
    else:
        acc = _ExactSum(ctx)
    abs_sum = 0.0
    quiet = 0
    prev = math.inf
    non_increasing = 0
    last = 0.0
    n = 0
    for n, term in enumerate(factory(ctx)):
        if n >= policy.max_terms:
            raise TruncationError(
                f"series not converged after {policy.max_terms} terms "
                f"(last |term| = {last:.3e})"
            )
        acc.add(term)
        mag = float(abs(term))
        abs_sum += mag
        if mag == 0.0:
            # exact zeros (e.g. odd orders at sin 2 theta = 0) carry no
            # information about the decay of the tail
            non_increasing += 1
        else:
            non_increasing = non_increasing + 1 if mag <= prev else 0
            prev = mag
        last = mag
        if n + 1 < min_terms:
            continue
        partial = abs(float(acc.value))
        if mag <= max(policy.rel_tol * partial, ctx.eps * abs_sum):
            quiet += 1
        else:
            quiet = 0
        # require the tail to be decaying, not merely passing a zero
        if quiet >= _QUIET_TERMS and non_increasing >= _QUIET_TERMS:
            break
    return acc.value, n + 1, last, abs_sum


def sum_series(
    factory: TermFactory,
    policy: TruncationPolicy,
    scale: float,
) -> SeriesSum:
    """Sum the terms produced by ``factory(ctx)`` until converged.

    ``factory`` receives a numeric context (machine floats or an mpmath
    context) and must yield the terms computed in that context.  ``scale`` is
    the magnitude of the series argument; it sets the minimum number of
    terms, ``ceil(3 |x|) + 10``, which carries the sum past the hump of the
    term magnitudes before the stopping test is applied.

    Raises:
        TruncationError: ``policy.max_terms`` reached first.
        PrecisionError: cancellation exceeds a fixed precision budget.
    """
    min_terms = math.ceil(3 * abs(scale)) + 10
    ctx = FLOAT_CONTEXT
    digits = policy.digits_for(scale)
    escalated = False
    while True:
        value, terms, last, abs_sum = _run(factory, ctx, policy, min_terms)
        mag = abs(float(value))
        # rounding error is bounded by a few ulps of the largest partial sums
        round_err = abs_sum * float(ctx.eps) * 4
        if mag > 0 and round_err <= policy.rel_tol * mag:
            break
        if ctx is FLOAT_CONTEXT:
            ctx = mp_context(digits)
            continue
        needed = _digits_needed(abs_sum, mag, policy.rel_tol)
        if policy.auto_precision and not escalated and needed > ctx.dps:
            escalated = True
            digits = needed
            ctx = mp_context(digits)
            continue
        raise PrecisionError(
            f"cancellation needs ~{needed} digits; budget is {ctx.dps}"
        )
    used_digits = 15 if ctx is FLOAT_CONTEXT else ctx.dps
    return SeriesSum(
        value=float(value),
        terms=terms,
        last_term=last,
        abs_sum=abs_sum,
        digits=used_digits,
        est_rel_err=(last + round_err) / mag,
    )


def _digits_needed(abs_sum, mag, rel_tol):
    if mag == 0.0:
        return 10**6
    return math.ceil(math.log10(abs_sum / mag) - math.log10(rel_tol)) + 4


def power_series_terms(
    coefficient: Callable[[int, object], object], x: float
) -> TermFactory:
    """Factory for ``sum_n coefficient(n) x**n / n!``.

    ``x**n / n!`` is built by recurrence so no factorial is ever formed.
    """

    def factory(ctx):
        xc = ctx.mpf(x)
        power = ctx.mpf(1)
        n = 0
        while True:
            yield coefficient(n, ctx) * power
            n += 1
            power = power * xc / n

    return factory
