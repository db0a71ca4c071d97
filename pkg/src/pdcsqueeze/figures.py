"""Regeneration of the six variance and uncertainty-area figures.

All figures are evaluated at ``xi = 0``.

==== ======================= ================ =========================
name y quantity              x axis           curves
==== ======================= ================ =========================
F1   sigma_-^2               Xi               tau = 0.1, 1, 10
F2   sigma_+ sigma_-         Xi               tau = 0.1, 1, 10
F3   sigma_+ sigma_-         tau (log)        Xi = 1, 3, 10
F4   sigma_-^2               Xi               tau = 1, ell = 0..5
F5   sigma_+ sigma_-         Xi               tau = 1, ell = 0..5
F6   sigma_+ sigma_-         tau (log)        Xi = 7, ell = 0..5
==== ======================= ================ =========================

Each figure is written as ``<name>.csv`` (the sweep columns preceded by a
``curve`` column) and ``<name>.svg``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .sweep import COLUMNS, SweepSpec, SweepTable, run_sweep
from .summation import TruncationPolicy
from .svg import line_chart

DEFAULT_POINTS = 121
DEFAULT_XI_RANGE = (0.0, 6.0)
DEFAULT_TAU_RANGE = (0.01, 50.0)

ELLS = tuple(range(6))


@dataclass(frozen=True)
class FigureSpec:
    name: str
    title: str
    axis: str
    quantity: str
    curves: Tuple[Tuple[str, Tuple[Tuple[str, float], ...]], ...]

    @property
    def log_x(self) -> bool:
        return self.axis == "tau"


def _curves(key, values, extra=()):
    return tuple((f"{key}={v:g}", tuple(sorted(((key, v),) + tuple(extra)))) for v in values)


FIGURES: Dict[str, FigureSpec] = {
    "F1": FigureSpec("F1", "Minimum variance vs squeezing parameter", "Xi", "sigma_minus_sq",
                     _curves("tau", (0.1, 1.0, 10.0))),
    "F2": FigureSpec("F2", "Uncertainty area vs squeezing parameter", "Xi", "area",
                     _curves("tau", (0.1, 1.0, 10.0))),
    "F3": FigureSpec("F3", "Uncertainty area vs beam width ratio", "tau", "area",
                     _curves("Xi", (1.0, 3.0, 10.0))),
    "F4": FigureSpec("F4", "Petal-mode minimum variance, tau = 1", "Xi", "sigma_minus_sq",
                     _curves("ell", ELLS, (("tau", 1.0),))),
    "F5": FigureSpec("F5", "Petal-mode uncertainty area, tau = 1", "Xi", "area",
                     _curves("ell", ELLS, (("tau", 1.0),))),
    "F6": FigureSpec("F6", "Petal-mode uncertainty area, Xi = 7", "tau", "area",
                     _curves("ell", ELLS, (("Xi", 7.0),))),
}

_YLABEL = {"sigma_minus_sq": "sigma_-^2", "area": "sigma_+ sigma_-"}


@dataclass
class FigureData:
    spec: FigureSpec
    tables: List[Tuple[str, SweepTable]]

    def csv_lines(self) -> List[str]:
        lines = ["curve," + ",".join(COLUMNS)]
        for label, table in self.tables:
            lines.extend(f"{label},{row}" for row in table.csv_lines()[1:])
        return lines

    def svg(self) -> str:
        curves = [(label, list(t.column("value")), list(t.column(self.spec.quantity)))
                  for label, t in self.tables]
        return line_chart(curves, f"{self.spec.name}: {self.spec.title}",
                          self.spec.axis, _YLABEL[self.spec.quantity], log_x=self.spec.log_x)

    @property
    def failures(self) -> int:
        return sum(len(t.failures) for _, t in self.tables)


def figure_names(which: Union[str, int]) -> List[str]:
    """``'all'``, ``'3'``, ``3`` or ``'F3'`` to a list of figure names."""
    w = str(which).strip().upper()
    if w == "ALL":
        return list(FIGURES)
    name = w if w.startswith("F") else f"F{w}"
    if name not in FIGURES:
        raise ValueError(f"unknown figure {which!r}; choose 1-6 or all")
    return [name]


def build_figure(
    name: str,
    points: int = DEFAULT_POINTS,
    xi_range: Sequence[float] = DEFAULT_XI_RANGE,
    tau_range: Sequence[float] = DEFAULT_TAU_RANGE,
    policy: Optional[TruncationPolicy] = None,
    workers: int = 1,
) -> FigureData:
    """Evaluate every curve of figure ``name``."""
    spec = FIGURES[name]
    lo, hi = xi_range if spec.axis == "Xi" else tau_range
    tables = []
    for label, fixed in spec.curves:
        sweep = SweepSpec.from_range(spec.axis, lo, hi, points, dict(fixed),
                                     log_spaced=spec.log_x)
        tables.append((label, run_sweep(sweep, policy, workers)))
    return FigureData(spec, tables)


def write_figure(data: FigureData, outdir: Union[str, Path]) -> Tuple[Path, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{data.spec.name}.csv"
    svg_path = outdir / f"{data.spec.name}.svg"
    csv_path.write_text("\n".join(data.csv_lines()) + "\n", encoding="utf-8")
    svg_path.write_text(data.svg(), encoding="utf-8")
    return csv_path, svg_path
