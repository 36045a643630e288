"""Byte-deterministic SVG line charts of cost or percent curves over distance."""

from __future__ import annotations

import csv
import io
import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .errors import DomainError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")
GUIDE_COLOR = "#555555"


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = _nice_step(hi - lo)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 10))
        t += step
    if ticks[-1] < hi:
        ticks.append(round(t, 10))
    return ticks


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _label(v: float) -> str:
    return f"{v:g}" if abs(v) < 1e6 else f"{v:.3g}"


def _place_label(label, cx, cy, placed, x_min, x_max, y_min):
    """Pick a box (x0, y0, x1, y1) for ``label`` near a marker, avoiding earlier boxes."""
    w, h = 6.6 * len(label), 14.0
    x0 = cx + 6 if cx + 6 + w <= x_max else cx - 6 - w
    x0 = max(x0, x_min + 2)
    # above the marker first, then below, stepping one line further out each time
    offsets = [-6 - h - k * h for k in range(6)]
    offsets = [o for pair in zip(offsets, [6 + k * h for k in range(6)]) for o in pair]
    for dy in offsets:
        y0 = max(cy + dy, y_min)
        box = (x0, y0, x0 + w, y0 + h)
        if not any(box[0] < b[2] and b[0] < box[2] and box[1] < b[3] and b[1] < box[3] for b in placed):
            return box
    y0 = max(cy - 6 - h, y_min)
    return (x0, y0, x0 + w, y0 + h)


def render_plot(
    series: Mapping[str, Sequence[tuple[float, float]]],
    guides: Sequence[tuple[str, float]] = (),
    annotations: Sequence[tuple[str, float, float]] = (),
    *,
    title: str = "",
    xlabel: str = "Distance from core (km)",
    ylabel: str = "$ per month",
    width: int = 800,
    height: int = 500,
) -> str:
    """Render named (x, y) series as a standalone SVG 1.1 document.

    Parameters
    ----------
    series : mapping of name -> list of (x, y)
        Drawn in insertion order; a single-point series becomes a marker.
    guides : list of (label, y)
        Horizontal reference lines, e.g. budget levels.
    annotations : list of (label, x, y)
        Labelled markers, e.g. computed boundaries.
    """
    if not series or not any(len(pts) for pts in series.values()):
        raise DomainError("at least one non-empty series is required")
    xs, ys = [], []
    for name, pts in series.items():
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise DomainError(f"non-finite point in series {name!r}")
            xs.append(float(x))
            ys.append(float(y))
    ys += [float(y) for _, y in guides]
    xs += [float(x) for _, x, _ in annotations]
    ys += [float(y) for _, _, y in annotations]

    xt = _ticks(min(xs), max(xs))
    yt = _ticks(min(ys), max(ys))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]

    # legend sits in rows under the x-axis label, guide labels in the right margin
    per_row = 3
    legend_rows = -(-len(series) // per_row)
    left, right, top = 80, 130 if guides else 30, 40 if title else 20
    bottom = 62 + 18 * legend_rows
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{_num(width / 2)}" y="24" text-anchor="middle" font-size="15">'
                   f'{escape(title)}</text>')

    out.append('<g stroke="#dddddd" stroke-width="1">')
    for t in xt:
        out.append(f'<line x1="{_num(px(t))}" y1="{_num(top)}" x2="{_num(px(t))}" y2="{_num(top + ph)}"/>')
    for t in yt:
        out.append(f'<line x1="{_num(left)}" y1="{_num(py(t))}" x2="{_num(left + pw)}" y2="{_num(py(t))}"/>')
    out.append("</g>")
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>')
    for t in xt:
        out.append(f'<text x="{_num(px(t))}" y="{_num(top + ph + 16)}" text-anchor="middle">{_label(t)}</text>')
    for t in yt:
        out.append(f'<text x="{left - 6}" y="{_num(py(t) + 4)}" text-anchor="end">{_label(t)}</text>')
    out.append(f'<text x="{_num(left + pw / 2)}" y="{_num(top + ph + 40)}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{_num(top + ph / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_num(top + ph / 2)})">{escape(ylabel)}</text>')

    for label, y in guides:
        out.append(f'<line x1="{_num(left)}" y1="{_num(py(y))}" x2="{_num(left + pw)}" y2="{_num(py(y))}" '
                   f'stroke="{GUIDE_COLOR}" stroke-dasharray="6 4" stroke-width="1"/>')
        out.append(f'<text x="{_num(left + pw + 6)}" y="{_num(py(y) + 4)}" '
                   f'fill="{GUIDE_COLOR}">{escape(label)}</text>')

    legend_y = top + ph + 62
    col_w = (pw + right) / per_row
    for i, (name, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        if len(pts) == 1:
            (x, y), = pts
            out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="4" fill="{color}"/>')
        elif pts:
            path = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = legend_y + 18 * (i // per_row)
        lx = left + col_w * (i % per_row)
        out.append(f'<line x1="{_num(lx)}" y1="{_num(ly)}" x2="{_num(lx + 20)}" y2="{_num(ly)}" '
                   f'stroke="{color}" stroke-width="3"/>')
        out.append(f'<text x="{_num(lx + 24)}" y="{_num(ly + 4)}">{escape(name)}</text>')

    placed: list[tuple[float, float, float, float]] = []
    for label, x, y in annotations:
        cx, cy = px(x), py(y)
        out.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="4" fill="none" stroke="#000000" stroke-width="1.5"/>')
        box = _place_label(label, cx, cy, placed, left, left + pw, top)
        placed.append(box)
        out.append(f'<text x="{_num(box[0])}" y="{_num(box[3] - 3)}">{escape(label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def series_csv(series: Mapping[str, Sequence[tuple[float, float]]]) -> str:
    """Long-format CSV (series,x,y) of the plotted data."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "x", "y"])
    for name, pts in series.items():
        for x, y in pts:
            w.writerow([name, repr(float(x)), repr(float(y))])
    return buf.getvalue()
