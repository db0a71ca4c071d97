"""Minimal deterministic SVG line charts.

Only what the figure suite needs: one panel, linear or log x axis, linear y
axis, a handful of labelled polylines.  Coordinates are written with fixed
precision so identical data gives byte-identical files.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = (70, 20, 40, 55)  # left, right, top, bottom
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

Curve = Tuple[str, Sequence[float], Sequence[float]]


def _nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _log_ticks(lo: float, hi: float) -> List[float]:
    return [10.0**k for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
            if lo * (1 - 1e-9) <= 10.0**k <= hi * (1 + 1e-9)]


def _label(v: float) -> str:
    return format(v, ".6g")


def line_chart(curves: Sequence[Curve], title: str, xlabel: str, ylabel: str,
               log_x: bool = False) -> str:
    """Render ``curves`` (label, xs, ys) as an SVG document string.

    Non-finite points break a polyline into separate segments.
    """
    finite = [(x, y) for _, xs, ys in curves for x, y in zip(xs, ys)
              if math.isfinite(x) and math.isfinite(y) and (x > 0 or not log_x)]
    if not finite:
        raise ValueError("nothing to plot")
    xs_all = [p[0] for p in finite]
    ys_all = [p[1] for p in finite]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    fx = math.log10 if log_x else (lambda v: v)
    x0, x1 = fx(x_lo), fx(x_hi)
    if x1 == x0:
        x1 = x0 + 1

    def px(x):
        return left + pw * (fx(x) - x0) / (x1 - x0)

    def py(y):
        return top + ph * (1 - (y - y_lo) / (y_hi - y_lo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    xticks = _log_ticks(x_lo, x_hi) if log_x else _nice_ticks(x_lo, x_hi)
    for t in xticks:
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle">{_label(t)}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{_label(t)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ylabel)}</text>')

    for i, (label, xs, ys) in enumerate(curves):
        colour = PALETTE[i % len(PALETTE)]
        segment: List[str] = []
        segments = [segment]
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y) and (x > 0 or not log_x):
                segment.append(f"{px(x):.2f},{py(y):.2f}")
            elif segment:
                segment = []
                segments.append(segment)
        for seg in segments:
            if len(seg) > 1:
                out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" '
                           f'points="{" ".join(seg)}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw - 110}" y1="{ly - 4}" x2="{left + pw - 90}" y2="{ly - 4}" '
                   f'stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 85}" y="{ly}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
