"""Physical experiment parameters and their reduction to (xi, tau, Xi).

All quantities are SI.  The prediction depends on the experiment only through
three dimensionless numbers:

* ``xi  = (pump bandwidth / LO bandwidth)**2``
* ``tau = (n_p w_0 / (n_d w_p))**2``
* ``Xi``, the down-conversion efficiency, which plays the role of the
  squeezing parameter,

plus the local-oscillator phase ``theta``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Union

from .errors import ValidationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

#: advisory threshold on ``2 c L / (w_p**2 omega_p)``
THIN_CRYSTAL_THRESHOLD = 0.1

_LENGTH, _RATE, _AREA, _ONE = "m", "rad/s", "m^2", "1"


@dataclass(frozen=True)
class PhysicalConfig:
    """Lab-frame parameters of the down-converter and local oscillator.

    Attributes:
        pump_waist: pump beam waist radius w_p [m].
        lo_waist: LO waist radius w_0 imaged to the crystal plane [m].
        pump_bandwidth: pump spectral width [rad/s].
        lo_bandwidth: LO spectral width [rad/s].
        pump_wavelength: pump centre wavelength [m].
        crystal_length: nonlinear crystal length L [m].
        pump_amplitude: |zeta_0|, dimensionless.
        nonlinear_cross_section: sigma_ooe [m^2].
        index_pump: refractive index at the pump frequency.
        index_degenerate: refractive index at the degenerate frequency.
    """

    pump_waist: float
    lo_waist: float
    pump_bandwidth: float
    lo_bandwidth: float
    pump_wavelength: float
    crystal_length: float
    pump_amplitude: float
    nonlinear_cross_section: float
    index_pump: float
    index_degenerate: float

    UNITS = {
        "pump_waist": _LENGTH,
        "lo_waist": _LENGTH,
        "pump_bandwidth": _RATE,
        "lo_bandwidth": _RATE,
        "pump_wavelength": _LENGTH,
        "crystal_length": _LENGTH,
        "pump_amplitude": _ONE,
        "nonlinear_cross_section": _AREA,
        "index_pump": _ONE,
        "index_degenerate": _ONE,
    }

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f.name, f"expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f.name, "must be finite")
        # L = 0 is allowed: it is the trivial no-interaction limit
        for name in ("pump_waist", "lo_waist", "pump_bandwidth", "lo_bandwidth",
                     "pump_wavelength", "pump_amplitude", "nonlinear_cross_section"):
            if not getattr(self, name) > 0:
                raise ValidationError(name, "must be strictly positive")
        if self.crystal_length < 0:
            raise ValidationError("crystal_length", "must be non-negative")
        for name in ("index_pump", "index_degenerate"):
            if getattr(self, name) < 1:
                raise ValidationError(name, "refractive index must be >= 1")
        if not 0 < self.fractional_bandwidth < 1:
            raise ValidationError(
                "pump_bandwidth", "fractional bandwidth delta_p must lie in (0, 1)"
            )

    @property
    def pump_frequency(self) -> float:
        """omega_p = 2 pi c / lambda_p [rad/s]."""
        return 2 * math.pi * SPEED_OF_LIGHT / self.pump_wavelength

    @property
    def degenerate_frequency(self) -> float:
        """omega_d = omega_p / 2 [rad/s]."""
        return self.pump_frequency / 2

    @property
    def fractional_bandwidth(self) -> float:
        """delta_p = delta omega_p / omega_p."""
        return self.pump_bandwidth / self.pump_frequency

    def replace(self, **changes) -> "PhysicalConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless parameters that fully determine the prediction.

    ``theta`` is reduced to [0, 2 pi) on construction.  Instances can be built
    directly, which bypasses any convention linking |zeta_0| to pump power.
    """

    xi: float
    tau: float
    Xi: float
    theta: float = 0.0

    def __post_init__(self):
        for name in ("xi", "tau", "Xi", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(name, "must be finite")
        for name in ("xi", "tau", "Xi"):
            if getattr(self, name) < 0:
                raise ValidationError(name, "must be non-negative")
        object.__setattr__(self, "theta", math.fmod(self.theta, 2 * math.pi) % (2 * math.pi))

    def replace(self, **changes) -> "ReducedParams":
        return dataclasses.replace(self, **changes)


def reduce(cfg: PhysicalConfig, theta: float = 0.0) -> ReducedParams:
    """Map a physical configuration to (xi, tau, Xi, theta)."""
    xi = (cfg.pump_bandwidth / cfg.lo_bandwidth) ** 2
    tau = (cfg.index_pump * cfg.lo_waist / (cfg.index_degenerate * cfg.pump_waist)) ** 2
    Xi = (
        2**3.5 * math.pi**1.25
        * cfg.crystal_length * cfg.pump_amplitude * cfg.nonlinear_cross_section
        * math.sqrt(cfg.fractional_bandwidth)
        / (cfg.pump_waist * cfg.index_degenerate**2 * cfg.pump_wavelength**2)
    )
    return ReducedParams(xi=xi, tau=tau, Xi=Xi, theta=theta)


def thin_crystal_margin(cfg: PhysicalConfig) -> float:
    """Ratio of crystal length to the pump Rayleigh-type length.

    Returns ``2 c L / (w_p**2 omega_p)``.  The model assumes this is much
    smaller than one; see :func:`thin_crystal_weak`.
    """
    return 2 * SPEED_OF_LIGHT * cfg.crystal_length / (cfg.pump_waist**2 * cfg.pump_frequency)


def thin_crystal_weak(margin: float) -> bool:
    """True when the thin-crystal assumption should be flagged."""
    return margin >= THIN_CRYSTAL_THRESHOLD


def config_from_mapping(data: Mapping[str, Any]) -> PhysicalConfig:
    """Build a :class:`PhysicalConfig` from a parsed JSON document.

    The document must hold a ``physical`` object whose keys are exactly the
    field names of :class:`PhysicalConfig`.  An optional ``units`` object may
    declare the unit of any field; each declaration must match the SI unit
    the field is stored in.
    """
    if not isinstance(data, Mapping):
        raise ValidationError(None, "configuration must be a JSON object")
    unknown_top = set(data) - {"physical", "units"}
    if unknown_top:
        raise ValidationError(sorted(unknown_top)[0], "unknown top-level key")
    physical = data.get("physical")
    if not isinstance(physical, Mapping):
        raise ValidationError("physical", "missing or not an object")
    names = [f.name for f in dataclasses.fields(PhysicalConfig)]
    for key in physical:
        if key not in names:
            raise ValidationError(key, "unknown parameter")
    for name in names:
        if name not in physical:
            raise ValidationError(name, "missing parameter")
    units = data.get("units", {})
    if not isinstance(units, Mapping):
        raise ValidationError("units", "must be an object")
    for key, unit in units.items():
        if key not in PhysicalConfig.UNITS:
            raise ValidationError(key, "unit given for unknown parameter")
        expected = PhysicalConfig.UNITS[key]
        if unit != expected:
            raise ValidationError(key, f"unit {unit!r} is not the SI unit {expected!r}")
    return PhysicalConfig(**{name: physical[name] for name in names})


def load_config(path: Union[str, Path]) -> PhysicalConfig:
    """Read a JSON configuration file; see :func:`config_from_mapping`."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(None, f"{path}: invalid JSON ({exc})") from None
    return config_from_mapping(data)
