"""Tests for sweeps, figure generation and the SVG writer."""
import json
import math
import xml.etree.ElementTree as ET

import pytest

from pdcsqueeze.errors import ValidationError
from pdcsqueeze.figures import FIGURES, build_figure, figure_names, write_figure
from pdcsqueeze.sweep import COLUMNS, SweepSpec, evaluate, read_csv, run_sweep
from pdcsqueeze.svg import line_chart


class TestSweepSpec:
    def test_range(self):
        spec = SweepSpec.from_range("Xi", 0, 5, 6)
        assert spec.values == (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)

    def test_log_range(self):
        spec = SweepSpec.from_range("tau", 0.01, 100, 5, log_spaced=True)
        assert spec.values == pytest.approx((0.01, 0.1, 1, 10, 100))

    @pytest.mark.parametrize("args", [("Xi", 1, 1, 5), ("Xi", 0, 1, 1), ("tau", 0, 1, 5)])
    def test_invalid_range(self, args):
        with pytest.raises(ValidationError):
            SweepSpec.from_range(*args, log_spaced=args[0] == "tau")

    def test_ell_values(self):
        with pytest.raises(ValidationError, match="ell"):
            SweepSpec.from_values("ell", [0, 1.5])
        with pytest.raises(ValidationError, match="ell"):
            SweepSpec.from_values("ell", [-1])

    def test_unknown_axis(self):
        with pytest.raises(ValidationError, match="axis"):
            SweepSpec.from_values("omega", [1])

    def test_unknown_fixed(self):
        with pytest.raises(ValidationError):
            SweepSpec.from_values("Xi", [1], {"omega": 2})


class TestEvaluate:
    def test_regimes(self):
        assert evaluate({"xi": 0, "tau": 0, "Xi": 1}).regime == "ideal"
        assert evaluate({"xi": 0, "tau": 0, "Xi": 1, "ell": 3}).regime == "ideal"
        assert evaluate({"xi": 0, "tau": 1, "Xi": 1, "ell": 3}).regime == "petal"
        assert evaluate({"xi": 0.2, "tau": 1, "Xi": 1}).regime == "general"

    def test_petal_needs_xi_zero(self):
        with pytest.raises(ValidationError, match="xi"):
            evaluate({"xi": 0.2, "tau": 1, "Xi": 1, "ell": 1})


class TestRunSweep:
    def test_ideal_xi_sweep(self, tmp_path):
        table = run_sweep(SweepSpec.from_range("Xi", 0, 5, 6))
        rows = table.csv_lines()
        assert rows[0] == ",".join(COLUMNS)
        assert rows[1] == "Xi,0,0.5,0.5,0.5,0,0"

    def test_tau_sweep_peak(self):
        table = run_sweep(SweepSpec.from_range("tau", 0.1, 50, 61, {"Xi": 3.0}, log_spaced=True))
        area = list(table.column("area"))
        peak_tau = table.column("value")[area.index(max(area))]
        assert 3 <= peak_tau <= 10

    def test_ell_sweep(self):
        table = run_sweep(SweepSpec.from_values("ell", range(6), {"tau": 1.0, "Xi": 5.0}))
        minus = list(table.column("sigma_minus_sq"))
        assert all(a <= b for a, b in zip(minus, minus[1:]))

    def test_sorted(self):
        table = run_sweep(SweepSpec.from_values("Xi", [3, 1, 2], {"tau": 1.0}))
        assert list(table.column("value")) == [1, 2, 3]

    def test_failure_rows(self, tmp_path):
        table = run_sweep(SweepSpec.from_values("xi", [0.0, 1.0], {"ell": 1, "tau": 1.0}))
        assert len(table.failures) == 1
        path = table.write(tmp_path / "s.csv")
        rows = read_csv(path)
        assert rows[1]["sigma_minus_sq"] == "nan"
        meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
        assert meta["failures"][0]["value"] == 1.0
        assert "xi" in meta["failures"][0]["error"]

    def test_parallel_identical(self):
        spec = SweepSpec.from_range("Xi", 0, 12, 40, {"tau": 0.7, "xi": 0.3})
        assert run_sweep(spec, workers=1).csv_lines() == run_sweep(spec, workers=4).csv_lines()

    def test_round_trip(self, tmp_path):
        spec = SweepSpec.from_range("tau", 0.05, 20, 9, {"Xi": 2.5, "xi": 0.4}, log_spaced=True)
        path = run_sweep(spec).write(tmp_path / "t.csv")
        for row in read_csv(path):
            r = evaluate({"xi": 0.4, "tau": float(row["value"]), "Xi": 2.5})
            assert float(row["sigma_minus_sq"]) == r.sigma_minus_sq
            assert float(row["sigma_plus_sq"]) == r.sigma_plus_sq
            assert float(row["area"]) == r.area

    def test_meta(self, tmp_path):
        run_sweep(SweepSpec.from_values("Xi", [1.0], {"tau": 1.0})).write(tmp_path / "m.csv")
        meta = json.loads((tmp_path / "m.csv.meta.json").read_text())
        assert meta["tool_version"]
        assert meta["regimes"] == ["general"]
        assert meta["truncation_policy"]["rel_tol"] == 1e-12


class TestFigures:
    def test_names(self):
        assert figure_names("all") == list(FIGURES)
        assert figure_names(3) == ["F3"]
        assert figure_names("f6") == ["F6"]
        with pytest.raises(ValueError):
            figure_names(7)

    def test_f3_starts_near_half(self):
        data = build_figure("F3", points=31)
        for _, table in data.tables:
            assert table.column("area")[0] == pytest.approx(0.5, abs=1e-3)

    def test_f1_monotone(self):
        data = build_figure("F1", points=61)
        minus = data.tables[0][1].column("sigma_minus_sq")
        assert all(b < a for a, b in zip(minus, minus[1:]))

    def test_write(self, tmp_path):
        data = build_figure("F4", points=11)
        csv_path, svg_path = write_figure(data, tmp_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "curve," + ",".join(COLUMNS)
        assert len(lines) == 1 + 6 * 11
        root = ET.fromstring(svg_path.read_text())
        assert root.tag.endswith("svg")
        assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 6


class TestSvg:
    def test_deterministic(self):
        curves = [("a", [0, 1, 2], [1, 2, 3]), ("b", [0, 1, 2], [3, 1, 0.5])]
        assert line_chart(curves, "t", "x", "y") == line_chart(curves, "t", "x", "y")

    def test_nan_breaks_line(self):
        svg = line_chart([("a", [0, 1, 2, 3, 4], [1, 2, math.nan, 3, 4])], "t", "x", "y")
        assert svg.count("<polyline") == 2

    def test_log_axis(self):
        svg = line_chart([("a", [0.01, 1, 100], [1, 2, 3])], "t", "tau", "y", log_x=True)
        ET.fromstring(svg)
        assert ">0.01<" in svg and ">100<" in svg

    def test_empty(self):
        with pytest.raises(ValueError):
            line_chart([("a", [], [])], "t", "x", "y")
