"""Command-line front end.

Subcommands::

    pdcsqueeze reduce  --config cfg.json [--theta T]
    pdcsqueeze sweep   --axis Xi --min 0 --max 5 --points 6 [--fix tau=1 ...] --out sweep.csv
    pdcsqueeze figures --which all --outdir figs/
    pdcsqueeze verify  --suite all [--csv broadening.csv]

Data goes to files or stdout; diagnostics go to stderr.  The environment
variable ``SQZ_PRECISION_DIGITS`` fixes the extended-precision budget.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Dict, List, Optional

from . import __version__
from .errors import SqueezeError, ValidationError
from .params import load_config, reduce, thin_crystal_margin, thin_crystal_weak
from .summation import TruncationPolicy

log = logging.getLogger("pdcsqueeze")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parse_fixed(items: List[str]) -> Dict[str, float]:
    fixed = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValidationError("fix", f"expected key=value, got {item!r}")
        try:
            fixed[key.strip()] = float(value)
        except ValueError:
            raise ValidationError(key.strip(), f"not a number: {value!r}") from None
    return fixed


def cmd_reduce(args) -> int:
    cfg = load_config(args.config)
    rp = reduce(cfg, args.theta)
    margin = thin_crystal_margin(cfg)
    print(f"xi      = {rp.xi:.17g}")
    print(f"tau     = {rp.tau:.17g}")
    print(f"Xi      = {rp.Xi:.17g}")
    print(f"delta_p = {cfg.fractional_bandwidth:.17g}")
    print(f"margin  = {margin:.17g}")
    if args.theta:
        print(f"theta   = {rp.theta:.17g}")
    if thin_crystal_weak(margin):
        log.warning("thin-crystal assumption weak: 2cL/(w_p^2 omega_p) = %.3g >= 0.1", margin)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .sweep import SweepSpec, run_sweep

    fixed = _parse_fixed(args.fix)
    if args.values:
        spec = SweepSpec.from_values(args.axis, [float(v) for v in args.values.split(",")], fixed)
    else:
        if args.min is None or args.max is None:
            raise ValidationError("range", "give --min and --max, or --values")
        spec = SweepSpec.from_range(args.axis, args.min, args.max, args.points, fixed,
                                    log_spaced=args.log)
    table = run_sweep(spec, TruncationPolicy(), workers=args.workers)
    if args.out == "-":
        sys.stdout.write("\n".join(table.csv_lines()) + "\n")
    else:
        path = table.write(args.out)
        log.info("wrote %s (%d rows)", path, len(table.rows))
    if table.failures:
        log.warning("%d of %d rows failed; see the .meta.json sidecar",
                    len(table.failures), len(table.rows))
    return EXIT_OK


def cmd_figures(args) -> int:
    from .figures import build_figure, figure_names, write_figure

    try:
        names = figure_names(args.which)
    except ValueError as exc:
        raise ValidationError("which", str(exc)) from None
    failures = 0
    for name in names:
        data = build_figure(name, points=args.points, xi_range=(args.xi_min, args.xi_max),
                            tau_range=(args.tau_min, args.tau_max), workers=args.workers)
        csv_path, svg_path = write_figure(data, args.outdir)
        failures += data.failures
        log.info("%s: wrote %s and %s", name, csv_path, svg_path)
    if failures:
        log.warning("%d points failed to evaluate (written as nan)", failures)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import format_report, run_suite

    results = run_suite(args.suite, args.csv)
    print(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdcsqueeze",
        description="Quadrature variances of multimode squeezed light from down-conversion.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a physical config to (xi, tau, Xi)")
    p.add_argument("--config", required=True, help="JSON configuration file")
    p.add_argument("--theta", type=float, default=0.0, help="LO phase in radians")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sweep", help="sweep one parameter and write a CSV")
    p.add_argument("--axis", required=True, choices=["Xi", "tau", "xi", "ell", "theta"])
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--values", help="comma-separated explicit axis values")
    p.add_argument("--log", action="store_true", help="log-spaced points")
    p.add_argument("--fix", action="append", metavar="K=V",
                   help="fixed parameter (Xi, tau, xi, ell, theta); repeatable")
    p.add_argument("--out", required=True, help="output CSV path, or - for stdout")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="regenerate figure data and SVGs")
    p.add_argument("--which", default="all", help="figure number 1-6 or 'all'")
    p.add_argument("--outdir", default="figures")
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--Xi-min", dest="xi_min", type=float, default=0.0, help="Xi axis minimum")
    p.add_argument("--Xi-max", dest="xi_max", type=float, default=6.0, help="Xi axis maximum")
    p.add_argument("--tau-min", type=float, default=0.01)
    p.add_argument("--tau-max", type=float, default=50.0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", default="all",
                   choices=["series", "hypergeom", "quad", "kernel", "modes", "all"])
    p.add_argument("--csv", help="write the kernel broadening report to this CSV")
    p.set_defaults(func=cmd_verify)
    return parser


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _value):
        pass


def _configure_logging(verbose: bool) -> None:
    for h in list(log.handlers):
        if isinstance(h, _StderrHandler):
            log.removeHandler(h)
    handler = _StderrHandler()
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except ValidationError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_USAGE
    except (SqueezeError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
