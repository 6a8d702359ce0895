"""Static SVG charts: candlesticks, scree/cumulative variance, loading plot.

Output is plain text built in a fixed element order with fixed-precision
coordinates, so identical input yields byte-identical documents.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import EmptyInput, NonFinite


@dataclass(frozen=True)
class ChartSpec:
    width: int = 900
    height: int = 450
    margin_left: int = 70
    margin_right: int = 30
    margin_top: int = 50
    margin_bottom: int = 90
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    bull_color: str = "green"
    bear_color: str = "red"
    flat_color: str = "gray"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("chart dimensions must be positive")
        if self.plot_width <= 0 or self.plot_height <= 0:
            raise ValueError("margins leave no room for the plot area")

    @property
    def plot_width(self) -> int:
        return self.width - self.margin_left - self.margin_right

    @property
    def plot_height(self) -> int:
        return self.height - self.margin_top - self.margin_bottom


def _f(x: float) -> str:
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


def _tick(x: float) -> str:
    return f"{x:.4g}"


class _Svg:
    def __init__(self, spec: ChartSpec):
        self.spec = spec
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{spec.width}" height="{spec.height}" '
            f'viewBox="0 0 {spec.width} {spec.height}" font-family="sans-serif" font-size="12">',
            f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
        ]

    def add(self, element: str):
        self.parts.append(element)

    def text(self, x, y, s, anchor="middle", extra=""):
        self.add(f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}"{extra}>{escape(s)}</text>')

    def frame(self, x_ticks=(), y_ticks=(), y_to_px=None):
        sp = self.spec
        left, top = sp.margin_left, sp.margin_top
        right, bottom = left + sp.plot_width, top + sp.plot_height
        if sp.title:
            self.text(sp.width / 2, top / 2 + 5, sp.title, extra=' font-size="15"')
        self.add(f'<line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>')
        self.add(f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
        for value in y_ticks:
            py = y_to_px(value)
            self.add(f'<line class="grid" x1="{left}" y1="{_f(py)}" x2="{right}" y2="{_f(py)}" '
                     f'stroke="#dddddd"/>')
            self.text(left - 6, py + 4, _tick(value), anchor="end")
        for px, label in x_ticks:
            self.text(px, bottom + 14, label, anchor="end",
                      extra=f' transform="rotate(-45 {_f(px)} {_f(bottom + 14)})"')
        if sp.x_label:
            self.text(left + sp.plot_width / 2, sp.height - 8, sp.x_label)
        if sp.y_label:
            cy = top + sp.plot_height / 2
            self.text(16, cy, sp.y_label, extra=f' transform="rotate(-90 16 {_f(cy)})"')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list:
    return [lo + (hi - lo) * k / count for k in range(count + 1)]


def _value_axis(lo: float, hi: float, spec: ChartSpec):
    def to_px(v):
        return spec.margin_top + (hi - v) / (hi - lo) * spec.plot_height
    return to_px


def candle_geometry(bars, spec: ChartSpec = ChartSpec()) -> list:
    """Pixel geometry of each candle.

    Returns one dict per bar with keys ``x`` (center), ``body_x``,
    ``body_width``, ``wick_top``, ``wick_bottom``, ``body_top``,
    ``body_bottom``, ``fill`` and the price range ``y_min``/``y_max`` used.
    """
    b = np.asarray(bars, dtype=float).reshape(-1, 4)
    if b.shape[0] == 0:
        raise EmptyInput("no bars to draw")
    if not np.all(np.isfinite(b)):
        raise NonFinite("bars contain non-finite prices")
    lo, hi = float(b[:, 2].min()), float(b[:, 1].max())
    pad = (hi - lo) * 0.05 if hi > lo else max(abs(hi), 1.0) * 0.05
    lo, hi = lo - pad, hi + pad
    to_px = _value_axis(lo, hi, spec)
    slot = spec.plot_width / b.shape[0]
    width = slot * 0.6
    out = []
    for i, (o, h, l, c) in enumerate(b):
        x = spec.margin_left + (i + 0.5) * slot
        if c > o:
            fill = spec.bull_color
        elif o > c:
            fill = spec.bear_color
        else:
            fill = spec.flat_color
        out.append({
            "x": x, "body_x": x - width / 2, "body_width": width,
            "wick_top": to_px(h), "wick_bottom": to_px(l),
            "body_top": to_px(max(o, c)), "body_bottom": to_px(min(o, c)),
            "fill": fill, "y_min": lo, "y_max": hi,
        })
    return out


def render_candlestick_svg(bars, labels: Sequence[str] = (),
                           spec: ChartSpec = ChartSpec()) -> str:
    """Candlestick chart, one candle per bar in input order.

    Bodies are green when close > open, red when open > close and gray when
    equal; the wick spans low to high.
    """
    geometry = candle_geometry(bars, spec)
    b = np.asarray(bars, dtype=float).reshape(-1, 4)
    labels = list(labels) or [str(i + 1) for i in range(len(geometry))]
    if len(labels) != len(geometry):
        raise ValueError(f"{len(labels)} labels for {len(geometry)} bars")
    lo, hi = geometry[0]["y_min"], geometry[0]["y_max"]
    svg = _Svg(spec)
    svg.frame(x_ticks=[(g["x"], lab) for g, lab in zip(geometry, labels)],
              y_ticks=_nice_ticks(lo, hi), y_to_px=_value_axis(lo, hi, spec))
    for g, lab, (o, h, l, c) in zip(geometry, labels, b):
        height = max(g["body_bottom"] - g["body_top"], 1.0)
        tip = f"{lab}: open={o:.6g} high={h:.6g} low={l:.6g} close={c:.6g}"
        svg.add(
            f'<g class="candle"><title>{escape(tip)}</title>'
            f'<line class="wick" x1="{_f(g["x"])}" y1="{_f(g["wick_top"])}" '
            f'x2="{_f(g["x"])}" y2="{_f(g["wick_bottom"])}" stroke="black"/>'
            f'<rect class="body" x="{_f(g["body_x"])}" y="{_f(g["body_top"])}" '
            f'width="{_f(g["body_width"])}" height="{_f(height)}" '
            f'fill={quoteattr(g["fill"])} stroke="black"/></g>'
        )
    return svg.render()


def render_scree_svg(eigenvalues, spec: ChartSpec = ChartSpec()) -> str:
    """Bars of per-component variance share with the cumulative share overlaid."""
    ev = np.asarray(eigenvalues, dtype=float).ravel()
    if ev.size == 0:
        raise EmptyInput("no eigenvalues to plot")
    if not np.all(np.isfinite(ev)):
        raise NonFinite("eigenvalues contain non-finite values")
    if np.any(np.diff(ev) > 1e-12):
        raise ValueError("eigenvalues must be in descending order")
    share = ev / ev.size
    cumulative = np.cumsum(ev) / ev.size
    hi = max(1.0, float(cumulative.max()))
    to_px = _value_axis(0.0, hi, spec)
    slot = spec.plot_width / ev.size
    xs = [spec.margin_left + (h + 0.5) * slot for h in range(ev.size)]
    svg = _Svg(spec)
    svg.frame(x_ticks=[(x, f"PC{h + 1}") for h, x in enumerate(xs)],
              y_ticks=_nice_ticks(0.0, hi), y_to_px=to_px)
    for h, x in enumerate(xs):
        top = to_px(max(share[h], 0.0))
        svg.add(f'<rect class="vcr" x="{_f(x - slot * 0.3)}" y="{_f(top)}" width="{_f(slot * 0.6)}" '
                f'height="{_f(to_px(0.0) - top)}" fill="steelblue">'
                f'<title>PC{h + 1} VCR={share[h]:.3f}</title></rect>')
    points = " ".join(f"{_f(x)},{_f(to_px(q))}" for x, q in zip(xs, cumulative))
    svg.add(f'<polyline class="cumulative" points="{points}" fill="none" stroke="darkorange" stroke-width="2"/>')
    for h, (x, q) in enumerate(zip(xs, cumulative)):
        svg.add(f'<circle class="cumulative-point" cx="{_f(x)}" cy="{_f(to_px(q))}" r="4" '
                f'fill="darkorange"><title>Q{h + 1}={q:.3f}</title></circle>')
        svg.text(x, to_px(q) - 8, f"{q * 100:.1f}%")
    return svg.render()


def render_loading_svg(loadings, labels: Sequence[str],
                       spec: ChartSpec = ChartSpec(width=520, height=520, margin_bottom=60)) -> str:
    """Arrows from the origin to each variable's (PC1, PC2) loading, inside the unit circle."""
    u = np.asarray(loadings, dtype=float)
    if u.ndim != 2 or u.shape[0] == 0 or u.shape[1] < 2:
        raise EmptyInput("need at least one variable and two components")
    if len(labels) != u.shape[0]:
        raise ValueError(f"{len(labels)} labels for {u.shape[0]} variables")
    svg = _Svg(spec)
    size = min(spec.plot_width, spec.plot_height)
    cx = spec.margin_left + spec.plot_width / 2
    cy = spec.margin_top + spec.plot_height / 2
    r = size / 2
    if spec.title:
        svg.text(spec.width / 2, spec.margin_top / 2 + 5, spec.title, extra=' font-size="15"')
    svg.add(f'<circle class="unit" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" stroke="#999999"/>')
    svg.add(f'<line class="axis" x1="{_f(cx - r)}" y1="{_f(cy)}" x2="{_f(cx + r)}" y2="{_f(cy)}" stroke="#999999"/>')
    svg.add(f'<line class="axis" x1="{_f(cx)}" y1="{_f(cy - r)}" x2="{_f(cx)}" y2="{_f(cy + r)}" stroke="#999999"/>')
    svg.text(cx + r, cy + 16, "PC1", anchor="end")
    svg.text(cx + 6, cy - r + 12, "PC2", anchor="start")
    for label, (a, b) in zip(labels, u[:, :2]):
        x, y = cx + a * r, cy - b * r
        svg.add(f'<line class="loading" x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(x)}" y2="{_f(y)}" '
                f'stroke="firebrick" stroke-width="1.5"/>')
        off = 6 if a >= 0 else -6
        svg.text(x + off, y - 4, label, anchor="start" if a >= 0 else "end")
    return svg.render()
