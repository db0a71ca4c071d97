"""Parameter sweeps over one axis with deterministic CSV output.

Each row is evaluated independently (optionally on a thread pool); rows are
assembled in input order and then sorted by axis value, so the output does
not depend on scheduling.  A row whose evaluation fails is kept, with ``nan``
outputs, and the failure is reported in the JSON sidecar written next to the
CSV.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import __version__
from .errors import SqueezeError, ValidationError
from .params import ReducedParams
from .series import VarianceResult, petal_result, variance_general, variance_ideal
from .summation import TruncationPolicy

log = logging.getLogger(__name__)

AXES = ("Xi", "tau", "xi", "ell", "theta")
OUTPUTS = ("sigma_minus_sq", "sigma_plus_sq", "area")
COLUMNS = ("axis", "value", "sigma_minus_sq", "sigma_plus_sq", "area", "terms_used", "est_rel_err")
DEFAULT_FIXED = {"Xi": 1.0, "tau": 0.0, "xi": 0.0, "ell": 0, "theta": 0.0}


def fmt(x: float) -> str:
    """Serialise a float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def _check_ell(value):
    if float(value) != int(value) or value < 0:
        raise ValidationError("ell", f"ell values must be non-negative integers, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep; parameters not on the axis are taken from ``fixed``."""

    axis: str
    values: Tuple[float, ...]
    fixed: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValidationError("axis", f"must be one of {AXES}")
        if len(self.values) < 1:
            raise ValidationError("values", "need at least one value")
        for key, _ in self.fixed:
            if key not in AXES:
                raise ValidationError(key, "unknown fixed parameter")
        if self.axis == "ell":
            for v in self.values:
                _check_ell(v)

    @classmethod
    def from_range(cls, axis: str, lo: float, hi: float, points: int,
                   fixed: Optional[Mapping[str, float]] = None, log_spaced: bool = False) -> "SweepSpec":
        if not lo < hi:
            raise ValidationError("range", f"need min < max, got [{lo}, {hi}]")
        if points < 2:
            raise ValidationError("points", "need at least 2 points")
        if log_spaced:
            if lo <= 0:
                raise ValidationError("range", "log spacing needs a positive minimum")
            values = np.geomspace(lo, hi, points)
        else:
            values = np.linspace(lo, hi, points)
        if axis == "ell":
            values = np.unique(np.round(values))
        return cls(axis, tuple(float(v) for v in values), tuple(sorted((fixed or {}).items())))

    @classmethod
    def from_values(cls, axis: str, values: Sequence[float],
                    fixed: Optional[Mapping[str, float]] = None) -> "SweepSpec":
        return cls(axis, tuple(float(v) for v in values), tuple(sorted((fixed or {}).items())))

    def point(self, value: float) -> Dict[str, float]:
        params = dict(DEFAULT_FIXED)
        params.update(dict(self.fixed))
        params[self.axis] = value
        params["ell"] = _check_ell(params["ell"])
        return params


def evaluate(params: Mapping[str, float], policy: Optional[TruncationPolicy] = None) -> VarianceResult:
    """Variances at one parameter point, choosing the regime.

    ``ell > 0`` uses the petal series (``xi`` must be 0); ``xi = tau = 0``
    is the ideal limit, for any ``ell``; everything else is the general
    Gaussian-LO series.
    """
    policy = policy or TruncationPolicy()
    xi, tau, Xi = params["xi"], params["tau"], params["Xi"]
    theta, ell = params.get("theta", 0.0), int(params.get("ell", 0))
    if ell > 0 and xi != 0:
        raise ValidationError("xi", "petal modes are only evaluated at xi = 0")
    if xi == 0 and tau == 0:
        ReducedParams(xi, tau, Xi, theta)  # validation
        return variance_ideal(Xi, theta)
    if ell > 0:
        return petal_result(ell, tau, Xi, policy)
    return variance_general(ReducedParams(xi, tau, Xi, theta), policy)


@dataclass(frozen=True)
class SweepRow:
    value: float
    result: Optional[VarianceResult]
    error: Optional[str] = None

    def cells(self, axis: str) -> List[str]:
        r = self.result
        if r is None:
            return [axis, fmt(self.value)] + ["nan"] * 5
        return [axis, fmt(self.value), fmt(r.sigma_minus_sq), fmt(r.sigma_plus_sq),
                fmt(r.area), str(r.terms_used), fmt(r.est_rel_err)]


@dataclass
class SweepTable:
    """Rows of a sweep plus the metadata needed to reproduce them."""

    axis: str
    rows: List[SweepRow]
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def failures(self) -> List[SweepRow]:
        return [r for r in self.rows if r.result is None]

    def column(self, name: str) -> np.ndarray:
        if name == "value":
            return np.array([r.value for r in self.rows])
        return np.array([getattr(r.result, name) if r.result else math.nan for r in self.rows])

    def csv_lines(self) -> List[str]:
        return [",".join(COLUMNS)] + [",".join(r.cells(self.axis)) for r in self.rows]

    def write(self, path: Union[str, Path]) -> Path:
        """Write the CSV and ``<path>.meta.json``; returns the CSV path."""
        path = Path(path)
        path.write_text("\n".join(self.csv_lines()) + "\n", encoding="utf-8")
        meta = dict(self.meta)
        meta["failures"] = [{"value": r.value, "error": r.error} for r in self.failures]
        sidecar = path.with_name(path.name + ".meta.json")
        sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def _policy_meta(policy):
    return {"rel_tol": policy.rel_tol, "max_terms": policy.max_terms,
            "precision_digits": policy.precision_digits}


def run_sweep(spec: SweepSpec, policy: Optional[TruncationPolicy] = None,
              workers: int = 1) -> SweepTable:
    """Evaluate every point of ``spec``.

    Failures (validation, truncation or precision errors) become ``nan``
    rows and are logged; the sweep carries on.
    """
    policy = policy or TruncationPolicy()
    points = [spec.point(v) for v in spec.values]

    def one(params):
        try:
            return evaluate(params, policy), None
        except SqueezeError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, points))
    else:
        outcomes = [one(p) for p in points]

    rows = []
    for value, (result, error) in zip(spec.values, outcomes):
        if error:
            log.warning("%s=%s failed: %s", spec.axis, fmt(value), error)
        rows.append(SweepRow(value, result, error))
    rows.sort(key=lambda r: r.value)
    regimes = sorted({r.result.regime for r in rows if r.result})
    meta = {
        "tool_version": __version__,
        "axis": spec.axis,
        "fixed": {k: v for k, v in sorted(spec.point(spec.values[0]).items()) if k != spec.axis},
        "regimes": regimes,
        "truncation_policy": _policy_meta(policy),
    }
    return SweepTable(spec.axis, rows, meta)


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Parse a sweep CSV into a list of column-name to string mappings."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:] if line]
