"""Grid verification of iterated-kernel broadening and LO overlap factors.

The down-conversion kernels factorise into independent one-dimensional
Gaussians in the sum or difference of the two arguments (per transverse axis
and in frequency), so each factor is checked on its own 1D grid.  A kernel
``K(x1, x2)`` is stored as a matrix on a uniform grid; the contraction of
two kernels is the matrix product scaled by the grid step, which is the
trapezoid rule for integrands that vanish at the grid ends.

Kernels are normalised to unit integral along either argument.  Their
physical scale factors only rescale the squeezing parameter and are reported
separately by :func:`diagnostic_scales`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import GridError, ValidationError
from .params import SPEED_OF_LIGHT, PhysicalConfig

DEFAULT_POINTS = 512
#: grid half-width in units of the widest feature
WIDTH_FACTOR = 8.0
#: minimum samples per standard deviation of the narrowest integrand; the
#: trapezoid error on a Gaussian is ~exp(-2 pi^2 k^2) at k samples per width
SAMPLES_PER_WIDTH = 3.0

OVERLAP_TOL = 1e-5
#: largest grid the overlap check will build (dense matrices are N x N)
MAX_POINTS = 2049


@dataclass(frozen=True)
class SampledKernel:
    """A kernel ``K(x1, x2)`` sampled on ``grid`` x ``grid``.

    ``measure_weight`` is the quadrature weight of one grid cell; the
    constant ``1/omega`` of the integration measure is folded into it.
    """

    grid: np.ndarray
    values: np.ndarray
    measure_weight: float

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        scale = np.max(np.abs(self.values))
        return bool(np.max(np.abs(self.values - self.values.T)) <= tol * scale)

    def boundary_ratio(self) -> float:
        """Edge value of the centre row and column relative to the peak.

        Sum and difference kernels have a ridge that always reaches the
        matrix corners, so decay is judged along the profile through the
        grid centre.
        """
        v = np.abs(self.values)
        c = len(self.grid) // 2
        edge = max(v[c, 0], v[c, -1], v[0, c], v[-1, c])
        return float(edge / v.max())


@dataclass(frozen=True)
class BroadeningReport:
    """Fitted against predicted width of one iterated kernel."""

    sector: str
    order: int
    fitted_width: float
    predicted_width: float

    @property
    def rel_dev(self) -> float:
        return abs(self.fitted_width - self.predicted_width) / self.predicted_width


@dataclass(frozen=True)
class DiagnosticScales:
    """Amplitude scale factors of the iterated kernels at degeneracy."""

    M_e: float
    M_o: float
    M_1: float


def uniform_grid(half_width: float, n_points: int = DEFAULT_POINTS) -> np.ndarray:
    if n_points < 3:
        raise ValidationError("n_points", "need at least 3 grid points")
    if not half_width > 0:
        raise ValidationError("half_width", "must be positive")
    return np.linspace(-half_width, half_width, n_points)


def _step(grid):
    return float(grid[1] - grid[0])


def identity_kernel(grid: np.ndarray) -> SampledKernel:
    """Discrete unit of the contraction: a diagonal of height ``1/h``."""
    h = _step(grid)
    return SampledKernel(grid, np.eye(len(grid)) / h, h)


def gaussian_kernel(grid: np.ndarray, width: float, coordinate: str = "sum") -> SampledKernel:
    """Unit-integral Gaussian in ``x1 + x2`` or ``x1 - x2``.

    ``width`` is the standard deviation of the profile in either argument at
    fixed other argument.
    """
    if coordinate not in ("sum", "difference"):
        raise ValidationError("coordinate", "must be 'sum' or 'difference'")
    if not width > 0:
        raise ValidationError("width", "must be positive")
    x1, x2 = np.meshgrid(grid, grid, indexing="ij")
    u = x1 + x2 if coordinate == "sum" else x1 - x2
    values = np.exp(-0.5 * (u / width) ** 2) / (math.sqrt(2 * math.pi) * width)
    return SampledKernel(grid, values, _step(grid))


def contract(a: SampledKernel, b: SampledKernel) -> SampledKernel:
    """``C(x1, x2) = sum_k a(x1, x_k) b(x_k, x2) * weight``."""
    if (a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid)
            or a.measure_weight != b.measure_weight):
        raise GridError("kernels are sampled on different grids")
    return SampledKernel(a.grid, (a.values @ b.values) * a.measure_weight, a.measure_weight)


def iterated_power(h0: SampledKernel, m: int) -> SampledKernel:
    """``m``-fold contraction of ``h0`` with itself."""
    if int(m) != m or m < 1:
        raise ValidationError("m", "must be an integer >= 1")
    result = h0
    for _ in range(int(m) - 1):
        result = contract(result, h0)
    return result


def fit_gaussian_width(x: np.ndarray, profile: np.ndarray) -> float:
    """Standard deviation of a sampled Gaussian-like profile.

    Uses the second moment when both tails have decayed below ``1e-10`` of
    the peak.  Otherwise the tails are truncated and a parabola is fitted to
    the logarithm of the profile around its peak.

    Raises:
        ValidationError: the profile is not positive, or is flat so that no
            width can be defined.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(profile, dtype=float)
    if x.shape != p.shape or x.ndim != 1 or len(x) < 3:
        raise ValidationError("profile", "need matching 1D arrays of length >= 3")
    peak = p.max()
    if not peak > 0:
        raise ValidationError("profile", "profile is not positive")
    if np.any(p < -1e-12 * peak):
        raise ValidationError("profile", "profile has negative samples")
    if max(p[0], p[-1]) <= 1e-10 * peak:
        w = np.clip(p, 0, None)
        w = w / w.sum()
        mean = np.dot(w, x)
        return float(math.sqrt(np.dot(w, (x - mean) ** 2)))
    # truncated tails: log-parabola through the samples near the peak
    i = int(np.argmax(p))
    sel = np.arange(max(0, i - 7), min(len(p), i + 8))
    sel = sel[p[sel] > 1e-3 * peak]
    if len(sel) < 3:
        raise ValidationError("profile", "too few samples near the peak to fit")
    a = np.polyfit(x[sel], np.log(p[sel]), 2)[0]
    if not a < -1e-12 * np.ptp(np.log(p[sel]) + 1.0):
        raise ValidationError("profile", "profile is flat; no width can be fitted")
    return float(math.sqrt(-1 / (2 * a)))


def _centre_row(kernel: SampledKernel) -> np.ndarray:
    return kernel.values[len(kernel.grid) // 2]


def kernel_width(kernel: SampledKernel) -> float:
    """Width of a sum- or difference-coordinate kernel from its centre row."""
    return fit_gaussian_width(kernel.grid, _centre_row(kernel))


# -- physical sectors ---------------------------------------------------------

def transverse_width(pump_waist: float, index_pump: float, index_degenerate: float) -> float:
    """Width of the first-order transverse kernel along one axis.

    The vertex kernel decays as ``exp(-w_p^2 |n_d (K1 + K2)|^2 / (4 n_p^2))``,
    a Gaussian of standard deviation ``sqrt(2) n_p / (w_p n_d)`` in ``K1 + K2``.
    """
    return math.sqrt(2) * index_pump / (pump_waist * index_degenerate)


def predicted_width(base_width: float, order: int) -> float:
    """Width after ``order`` contractions: the exponent coefficient scales as 1/order."""
    return base_width * math.sqrt(order)


def _coordinate(order):
    return "sum" if order % 2 else "difference"


def broadening_reports(
    max_order: int = 8,
    n_points: int = DEFAULT_POINTS,
    pump_waist: float = 2.0,
    index_pump: float = 1.0,
    index_degenerate: float = 1.0,
    pump_bandwidth: float = 1.0,
) -> List[BroadeningReport]:
    """Fit the widths of iterated transverse and spectral kernels.

    Transverse kernels are checked at even orders 2, 4, ... and odd orders
    1, 3, ... up to ``max_order``; the spectral kernel at every order.  The
    defaults are dimensionless (``w_p = 2``, equal indices, unit bandwidth);
    any physical values may be passed instead.
    """
    reports = []
    sectors = (
        ("transverse", transverse_width(pump_waist, index_pump, index_degenerate)),
        ("spectral", pump_bandwidth),
    )
    for sector, base in sectors:
        grid = uniform_grid(WIDTH_FACTOR * predicted_width(base, max_order), n_points)
        h0 = gaussian_kernel(grid, base, "sum")
        power = h0
        for order in range(1, max_order + 1):
            if order > 1:
                power = contract(power, h0)
            kind = "even" if order % 2 == 0 else "odd"
            label = f"{sector}-{kind}" if sector == "transverse" else sector
            reports.append(BroadeningReport(
                sector=label,
                order=order,
                fitted_width=kernel_width(power),
                predicted_width=predicted_width(base, order),
            ))
    return reports


def _order(m, parity):
    if int(m) != m or m < 1:
        raise ValidationError("m", "must be an integer >= 1")
    if parity == "even":
        return 2 * int(m)
    if parity == "odd":
        return 2 * int(m) - 1
    raise ValidationError("parity", "must be 'even' or 'odd'")


def _overlap_grid(order, base_width, lo_width, n_points):
    widest = max(predicted_width(base_width, order), lo_width)
    half = WIDTH_FACTOR * widest
    narrowest = min(base_width, lo_width) / math.sqrt(2)
    needed = int(math.ceil(2 * half * SAMPLES_PER_WIDTH / narrowest)) + 1
    n = max(n_points, needed)
    if n > MAX_POINTS:
        raise GridError(f"resolving this overlap needs {n} points (cap {MAX_POINTS})")
    return half, n


def _normalised_overlap(order, base_width, lo_width, half, n):
    """1D overlap ``<g|K^order|g> / <g|g>`` for a Gaussian LO of std ``lo_width``."""
    grid = uniform_grid(half, n)
    h = _step(grid)
    lo = np.exp(-0.25 * (grid / lo_width) ** 2)  # |lo|^2 has std lo_width
    kernel = gaussian_kernel(grid, base_width, _coordinate(order))
    # K^order applied to the LO one contraction at a time (matrix-vector,
    # identical to contracting the powers first, but O(N^2) per order)
    v = lo
    for _ in range(order):
        v = (kernel.values @ v) * h
    return float(lo @ v) * h / (float(lo @ lo) * h)


def _checked_overlap(order, base_width, lo_width, n_points):
    half, n = _overlap_grid(order, base_width, lo_width, n_points)
    coarse = _normalised_overlap(order, base_width, lo_width, half, n)
    fine = _normalised_overlap(order, base_width, lo_width, half, 2 * n - 1)
    if abs(coarse - fine) > OVERLAP_TOL:
        raise GridError(
            f"overlap not resolved: {coarse!r} vs {fine!r} on the refined grid"
        )
    return coarse


def overlap_factor(m: int, parity: str, tau: float, n_points: int = DEFAULT_POINTS) -> float:
    """Transverse LO overlap of the order-``2m`` (even) or ``2m-1`` (odd) kernel.

    Computed on the grid from iterated contractions of the vertex kernel, for
    a Gaussian LO whose waist ratio to the pump gives ``tau``, and normalised
    by the LO norm.  Both transverse axes contribute the same 1D factor.
    The series implies ``1/(1 + m tau)`` (even) and ``2/(2 + (2m-1) tau)``
    (odd).

    Raises:
        GridError: the value moves by more than 1e-5 under grid refinement.
    """
    order = _order(m, parity)
    if not tau > 0:
        raise ValidationError("tau", "must be positive")
    # units with w_p = 2 and n_p = n_d: vertex width 1/sqrt(2) per axis,
    # LO amplitude exp(-tau x^2), so |LO|^2 has std 1/(2 sqrt(tau))
    base = transverse_width(2.0, 1.0, 1.0)
    lo_width = 1 / (2 * math.sqrt(tau))
    return _checked_overlap(order, base, lo_width, n_points) ** 2


def spectral_overlap_factor(m: int, parity: str, xi: float,
                            n_points: int = DEFAULT_POINTS) -> float:
    """Spectral LO overlap of the order-``2m`` or ``2m-1`` kernel.

    The series implies ``(1 + order * xi / 2)^(-1/2)``.
    """
    order = _order(m, parity)
    if not xi > 0:
        raise ValidationError("xi", "must be positive")
    # pump bandwidth 1; LO amplitude bandwidth 1/sqrt(xi)
    lo_width = 1 / math.sqrt(2 * xi)
    return _checked_overlap(order, 1.0, lo_width, n_points)


def reconstructed_terms(tau: float, Xi: float, sign: int, n_terms: int = 6,
                        xi: Optional[float] = None,
                        n_points: int = DEFAULT_POINTS) -> List[float]:
    """First ``n_terms`` terms of the variance series built from grid overlaps.

    Term ``n`` is ``(1/2) * overlap_n * (sign Xi)^n / n!`` with the zeroth
    overlap equal to one.  ``xi`` adds the spectral overlap when given.
    """
    terms = []
    for n in range(n_terms):
        if n == 0:
            factor = 1.0
        else:
            parity = "even" if n % 2 == 0 else "odd"
            m = (n + 1) // 2 if parity == "odd" else n // 2
            factor = overlap_factor(m, parity, tau, n_points)
            if xi:
                factor *= spectral_overlap_factor(m, parity, xi, n_points)
        terms.append(0.5 * factor * (sign * Xi) ** n / math.factorial(n))
    return terms


def diagnostic_scales(cfg: PhysicalConfig) -> DiagnosticScales:
    """Kernel amplitude factors at the degenerate frequency (diagnostic only)."""
    c = SPEED_OF_LIGHT
    wp, dwp = cfg.pump_waist, cfg.pump_bandwidth
    n_p, n_d = cfg.index_pump, cfg.index_degenerate
    omega_p, omega_d = cfg.pump_frequency, cfg.degenerate_frequency
    M_e = math.pi**1.25 * wp**2 * n_d**2 * omega_d / (c * n_p**2 * math.sqrt(dwp))
    M_o = math.pi**1.25 * wp**2 * n_d * n_d * omega_d / (c * n_p**2 * math.sqrt(dwp))
    M_1 = (4 * cfg.pump_amplitude * cfg.nonlinear_cross_section
           * math.sqrt(2 * omega_p * omega_d * omega_d * dwp)
           / (math.pi**0.75 * wp * c**2 * n_d * n_d))
    return DiagnosticScales(M_e=M_e, M_o=M_o, M_1=M_1)
