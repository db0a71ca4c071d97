"""Gauss-Hermite quadrature and the tau = 0 ensemble-average integral."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .errors import QuadratureError, ValidationError

MIN_ORDER = 2
MAX_ORDER = 200


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integrals against ``exp(-u**2)`` on the real line."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        """Approximate ``int f(u) exp(-u**2) du``; ``f`` must accept arrays."""
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=None)
def _rule(n):
    nodes, weights = hermgauss(n)
    # symmetrise explicitly so that even integrands see exact pairs
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order=n, nodes=nodes, weights=weights)


def hermite_rule(n: int) -> QuadratureRule:
    """Gauss-Hermite rule of order ``n`` (2 <= n <= 200).

    Rules are cached and their arrays are read-only.
    """
    if int(n) != n or not MIN_ORDER <= n <= MAX_ORDER:
        raise ValidationError("n", f"order must be an integer in [{MIN_ORDER}, {MAX_ORDER}]")
    return _rule(int(n))


def ensemble_average(
    Xi: float,
    xi: float,
    sign: int,
    n: int = 20,
    rel_tol: float = 1e-10,
) -> float:
    """Average of ``exp(+-Xi exp(-xi x**2))`` over a Gaussian density.

    Computes ``int exp(-2 x**2) / sqrt(2 pi) * exp(sign * Xi * exp(-xi x**2)) dx``
    after the substitution ``u = sqrt(2) x`` when that places the integrand's
    structure on the Hermite weight (sign -1, ``xi < 1``).  Otherwise the
    constant part of the integrand is integrated exactly and the remainder is
    rescaled to its narrowest feature.  The order starts at ``n`` and is
    doubled until two successive values agree to ``rel_tol``.

    Raises:
        QuadratureError: no agreement before the maximum order.
    """
    if xi < 0:
        raise ValidationError("xi", "must be non-negative")
    if Xi < 0:
        raise ValidationError("Xi", "must be non-negative")
    if sign not in (1, -1):
        raise ValidationError("sign", "must be +1 or -1")

    if sign < 0 and xi < 1.0:
        # u = sqrt(2) x puts the density exactly on the Hermite weight
        def integrand(u):
            return np.exp(-Xi * np.exp(-xi * u * u / 2))

        offset, norm = 0.0, 1 / (2 * math.sqrt(math.pi))
    else:
        # Split off the constant part and rescale by u = sqrt(s) x, with s
        # matched to the narrower of exp(-xi x**2) and, for sign +1, the
        # central peak of width ~ 1/sqrt(xi Xi).
        s = 2 + xi * (max(1.0, Xi) if sign > 0 else 1.0)
        a, b = (s - 2) / s, xi / s

        def integrand(u):
            u2 = u * u
            return np.exp(a * u2) * np.expm1(sign * Xi * np.exp(-b * u2))

        offset, norm = 0.5, 1 / math.sqrt(2 * math.pi * s)

    order = max(MIN_ORDER, min(int(n), MAX_ORDER))
    previous = offset + norm * hermite_rule(order).integrate(integrand)
    while order < MAX_ORDER:
        order = min(2 * order, MAX_ORDER)
        current = offset + norm * hermite_rule(order).integrate(integrand)
        if abs(current - previous) <= rel_tol * abs(current):
            return current
        previous = current
    raise QuadratureError(
        f"ensemble average not converged at order {MAX_ORDER} "
        f"(Xi={Xi}, xi={xi}, sign={sign:+d})"
    )
