"""Quadrature variances of multimode squeezed light from parametric down-conversion.

The prediction for a homodyne measurement with a Gaussian or Laguerre-Gauss
petal local oscillator depends on three dimensionless numbers: the squared
bandwidth ratio ``xi``, the squared beam-width ratio ``tau`` and the
squeezing parameter ``Xi``.  See :mod:`pdcsqueeze.params` for the reduction
from lab parameters and :mod:`pdcsqueeze.series` for the variances.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    FlatFunctionError,
    GridError,
    PrecisionError,
    QuadratureError,
    SqueezeError,
    TruncationError,
    ValidationError,
)
from .params import PhysicalConfig, ReducedParams, load_config, reduce  # noqa: E402
from .series import (  # noqa: E402
    VarianceResult,
    area_peak,
    variance_general,
    variance_ideal,
    variance_petal,
    variance_tau0_integral,
    variance_tau0_series,
    variance_xi0,
)
from .summation import TruncationPolicy  # noqa: E402

__all__ = [
    "__version__",
    "FlatFunctionError",
    "GridError",
    "PhysicalConfig",
    "PrecisionError",
    "QuadratureError",
    "ReducedParams",
    "SqueezeError",
    "TruncationError",
    "TruncationPolicy",
    "ValidationError",
    "VarianceResult",
    "area_peak",
    "load_config",
    "reduce",
    "variance_general",
    "variance_ideal",
    "variance_petal",
    "variance_tau0_integral",
    "variance_tau0_series",
    "variance_xi0",
]
