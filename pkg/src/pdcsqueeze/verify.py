"""Self-check suites run by ``pdcsqueeze verify``.

Each suite is a list of named checks against independent references
(closed forms, mpmath, regime cross-validation, grid oracles).  A check that
raises counts as a failure; the exception text becomes its detail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
import numpy as np

from . import hypergeom, kernel_oracle, modes, quad, series
from .params import ReducedParams

SUITES = ("series", "hypergeom", "quad", "kernel", "modes")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a)


def _worst(pairs) -> Tuple[float, str]:
    """Largest relative deviation over ``(label, value, reference)`` triples."""
    worst, where = 0.0, ""
    for label, a, b in pairs:
        d = _rel(a, b)
        if d > worst or not where:
            worst, where = d, label
    return worst, where


def _within(pairs, tol) -> Tuple[bool, str]:
    worst, where = _worst(pairs)
    return worst <= tol, f"max rel dev {worst:.2e} at {where} (tol {tol:g})"


# -- series ---------------------------------------------------------------------

def _ideal():
    pairs = []
    for Xi in (0, 0.5, 1, 2, 5, 10):
        r = series.variance_general(ReducedParams(0.0, 0.0, Xi))
        pairs += [(f"Xi={Xi}+", r.sigma_plus_sq, 0.5 * math.exp(Xi)),
                  (f"Xi={Xi}-", r.sigma_minus_sq, 0.5 * math.exp(-Xi)),
                  (f"Xi={Xi} area", r.area, 0.5)]
    return _within(pairs, 1e-12)


_GRID = [(Xi, v) for Xi in (0.1, 1, 3, 10) for v in (0.1, 1, 10)]


def _general_vs_xi0():
    pairs = []
    for Xi, tau in _GRID:
        r = series.variance_general(ReducedParams(0.0, tau, Xi))
        pairs += [(f"Xi={Xi},tau={tau}+", r.sigma_plus_sq, series.variance_xi0(tau, Xi, 1)),
                  (f"Xi={Xi},tau={tau}-", r.sigma_minus_sq, series.variance_xi0(tau, Xi, -1))]
    return _within(pairs, 1e-10)


def _general_vs_tau0():
    pairs = []
    for Xi, xi in _GRID:
        r = series.variance_general(ReducedParams(xi, 0.0, Xi))
        pairs += [(f"Xi={Xi},xi={xi}+", r.sigma_plus_sq, series.variance_tau0_series(xi, Xi, 1)),
                  (f"Xi={Xi},xi={xi}-", r.sigma_minus_sq, series.variance_tau0_series(xi, Xi, -1))]
    return _within(pairs, 1e-10)


def _integral_vs_series():
    pairs = []
    for Xi, xi in _GRID:
        for s in (1, -1):
            pairs.append((f"Xi={Xi},xi={xi},{s:+d}", series.variance_tau0_integral(xi, Xi, s),
                           series.variance_tau0_series(xi, Xi, s)))
    return _within(pairs, 1e-8)


def _area_floor():
    worst = math.inf
    for Xi in (0.5, 1, 3, 6, 10):
        for tau in (0.01, 0.1, 1, 10, 50):
            for xi in (0, 0.5, 5):
                worst = min(worst, series.variance_general(ReducedParams(xi, tau, Xi)).area)
    return worst >= 0.5 - 1e-9, f"min area {worst:.12f}"


def _area_peak():
    peaks = {Xi: series.area_peak(Xi).tau for Xi in (1, 3, 10)}
    ok = all(3 <= t <= 10 for t in peaks.values())
    return ok, ", ".join(f"Xi={k}: tau*={v:.3f}" for k, v in peaks.items())


# -- hypergeom ------------------------------------------------------------------

def _kummer_closed_form():
    return _within([("1F1(2;3;-1)", hypergeom.hyp1f1(2, 3, -1), 2 - 4 / math.e)], 1e-12)


def _kummer_vs_mpmath():
    pairs = []
    for a, b in ((0.5, 1.5), (2, 3), (20, 21), (0.04, 1.04)):
        for x in (-10, -3, -0.5, 0.5, 3, 10):
            pairs.append((f"({a};{b};{x})", hypergeom.hyp1f1(a, b, x), float(mpmath.hyp1f1(a, b, x))))
    return _within(pairs, 1e-12)


def _repeated_vs_petal():
    pairs = []
    for ell in range(6):
        for tau in (0.5, 1, 2):
            for Xi in (0, 1, 5, 10):
                for s in (1, -1):
                    pairs.append((f"l={ell},tau={tau},Xi={Xi},{s:+d}",
                                  series.variance_petal_hypergeom(ell, tau, Xi, s),
                                  series.variance_petal(ell, tau, Xi, s)))
    return _within(pairs, 1e-10)


def _repeated_vs_mpmath():
    pairs = []
    for t in (1, 2, 4):
        M = 1.5
        for x in (-6, 2):
            ref = float(mpmath.hyper([M] * t, [M + 1] * t, x))
            pairs.append((f"t={t},x={x}", hypergeom.hyp_repeated(hypergeom.HypergeomSpec(t, M, M + 1, x)), ref))
    return _within(pairs, 1e-12)


# -- quad -----------------------------------------------------------------------

def _hermite_moments():
    pairs = []
    for n in (2, 5, 20, 60):
        rule = quad.hermite_rule(n)
        for k in range(0, 2 * n, 2):
            if k > 40:
                break
            ref = math.gamma((k + 1) / 2)
            pairs.append((f"n={n},u^{k}", rule.integrate(lambda u, k=k: u**k), ref))
    return _within(pairs, 1e-12)


def _ensemble_vs_mpmath():
    pairs = []
    with mpmath.workdps(40):
        for xi in (0.1, 1, 10):
            for Xi in (1, 5):
                for s in (1, -1):
                    ref = mpmath.quad(lambda x: mpmath.exp(-2 * x * x + s * Xi * mpmath.exp(-xi * x * x)),
                                      [-mpmath.inf, 0, mpmath.inf]) / mpmath.sqrt(2 * mpmath.pi)
                    pairs.append((f"xi={xi},Xi={Xi},{s:+d}", quad.ensemble_average(Xi, xi, s), float(ref)))
    return _within(pairs, 1e-10)


# -- kernel ---------------------------------------------------------------------

def _broadening(csv_path=None):
    reports = kernel_oracle.broadening_reports()
    if csv_path is not None:
        write_broadening_csv(reports, csv_path)
    worst = max(reports, key=lambda r: r.rel_dev)
    return worst.rel_dev < 1e-4, f"max rel_dev {worst.rel_dev:.2e} ({worst.sector} order {worst.order})"


def _transverse_overlaps():
    worst = 0.0
    for tau in (0.5, 1, 2):
        for m in (1, 2, 3):
            worst = max(worst, abs(kernel_oracle.overlap_factor(m, "even", tau) - 1 / (1 + m * tau)),
                        abs(kernel_oracle.overlap_factor(m, "odd", tau) - 2 / (2 + (2 * m - 1) * tau)))
    return worst <= 1e-5, f"max abs dev {worst:.2e}"


def _spectral_overlaps():
    worst = 0.0
    for xi in (0.5, 2):
        for m in (1, 2, 3):
            for parity, order in (("even", 2 * m), ("odd", 2 * m - 1)):
                got = kernel_oracle.spectral_overlap_factor(m, parity, xi)
                worst = max(worst, abs(got - (1 + order * xi / 2) ** -0.5))
    return worst <= 1e-5, f"max abs dev {worst:.2e}"


def write_broadening_csv(reports, path: Union[str, Path]) -> Path:
    path = Path(path)
    lines = ["sector,order,fitted_width,predicted_width,rel_dev"]
    lines += [f"{r.sector},{r.order},{r.fitted_width:.17g},{r.predicted_width:.17g},{r.rel_dev:.17g}"
              for r in reports]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# -- modes ----------------------------------------------------------------------

def _generating_vs_series():
    pairs = []
    for ell in range(6):
        for tau in (0.5, 1, 2):
            for Xi in (0, 1, 5, 10):
                for s in (1, -1):
                    pairs.append((f"l={ell},tau={tau},Xi={Xi},{s:+d}",
                                  modes.petal_variance_via_generating(ell, tau, Xi, s),
                                  series.variance_petal(ell, tau, Xi, s)))
    return _within(pairs, 1e-10)


def _relative_phase():
    pairs = [(f"beta={b}", modes.petal_variance_via_generating(2, 1, 3, -1, relative_phase=b),
              modes.petal_variance_via_generating(2, 1, 3, -1)) for b in (0.3, 1.7, math.pi)]
    return _within(pairs, 1e-10)


def _single_lg():
    details = []
    ok = True
    for ell in (1, 2):
        for tau, Xi in ((1, 1), (1, 3)):
            plus, minus = modes.single_lg_variance(ell, tau, Xi)
            ok &= plus == minus and minus >= 0.5
            details.append(f"{minus:.6f}")
    return ok, "sigma^2 = " + ", ".join(details)


def _mode_norms():
    spec_a = modes.ModeSpec(1, 0, 1.0, kind="lg_single")
    spec_b = modes.ModeSpec(2, 0, 1.0, kind="lg_single")
    petal = modes.ModeSpec(2, 0, 1.0, kind="lg_petal")
    cross = abs(modes.grid_inner_product(spec_a, spec_b))
    norm = abs(modes.grid_inner_product(petal, petal).real - 1)
    return cross <= 1e-8 and norm <= 1e-8, f"<1|2> = {cross:.1e}, |petal|^2 - 1 = {norm:.1e}"


def _checks(csv_path=None) -> Dict[str, List[Tuple[str, Callable[[], Tuple[bool, str]]]]]:
    return {
        "series": [
            ("ideal limit exact", _ideal),
            ("general == xi=0 series", _general_vs_xi0),
            ("general == tau=0 series", _general_vs_tau0),
            ("tau=0 integral == series", _integral_vs_series),
            ("area >= 1/2", _area_floor),
            ("area peak tau in [3, 10]", _area_peak),
        ],
        "hypergeom": [
            ("1F1(2;3;-1) = 2 - 4/e", _kummer_closed_form),
            ("1F1 == mpmath", _kummer_vs_mpmath),
            ("tFt == mpmath", _repeated_vs_mpmath),
            ("tFt == petal series", _repeated_vs_petal),
        ],
        "quad": [
            ("Hermite moments exact", _hermite_moments),
            ("ensemble average == mpmath", _ensemble_vs_mpmath),
        ],
        "kernel": [
            ("kernel broadening widths", lambda: _broadening(csv_path)),
            ("transverse overlap factors", _transverse_overlaps),
            ("spectral overlap factors", _spectral_overlaps),
        ],
        "modes": [
            ("generating path == petal series", _generating_vs_series),
            ("relative phase has no effect", _relative_phase),
            ("single LG: no squeezing", _single_lg),
            ("grid orthonormality", _mode_norms),
        ],
    }


def run_suite(suite: str, csv_path: Optional[Union[str, Path]] = None) -> List[CheckResult]:
    """Run one suite, or ``all``; never raises for a failing check."""
    names = SUITES if suite == "all" else (suite,)
    table = _checks(csv_path)
    unknown = [n for n in names if n not in table]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; choose from {SUITES + ('all',)}")
    results = []
    for name in names:
        for label, check in table[name]:
            try:
                passed, detail = check()
            except Exception as exc:  # a crash is a failed check, not a crashed report
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(name, label, bool(passed), detail))
    return results


def format_report(results: List[CheckResult]) -> str:
    width = max(len(f"{r.suite}/{r.name}") for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {f'{r.suite}/{r.name}':<{width}}  {r.detail}"
             for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
