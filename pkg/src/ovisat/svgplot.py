"""Minimal static SVG charts: lines, scatter, histogram outlines, boxplots.

Hand-rolled on purpose: the outputs are result displays, not an
interactive UI, and writing the few primitives directly keeps the
artifact dependency-light and byte-deterministic.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 860, 420
MARGIN = {"left": 62, "right": 18, "top": 34, "bottom": 44}

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    span = hi - lo
    raw = span / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if span / step <= n:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks or [lo]


def _tick_label(v: float) -> str:
    if v == int(v) and abs(v) < 1e6:
        return str(int(v))
    return f"{v:.3g}"


class Canvas:
    """Accumulates SVG elements over a single x/y linear scale."""

    def __init__(self, title: str, x_range, y_range, x_label="", y_label=""):
        self.parts: list[str] = []
        x0, x1 = x_range
        y0, y1 = y_range
        if x1 <= x0:
            x1 = x0 + 1.0
        if y1 <= y0:
            y1 = y0 + 1.0
        pad = 0.04 * (y1 - y0)
        self.xr = (x0, x1)
        self.yr = (y0 - pad, y1 + pad)
        self.title = title
        self.x_label = x_label
        self.y_label = y_label

    def px(self, x: float) -> float:
        x0, x1 = self.xr
        inner = WIDTH - MARGIN["left"] - MARGIN["right"]
        return MARGIN["left"] + (x - x0) / (x1 - x0) * inner

    def py(self, y: float) -> float:
        y0, y1 = self.yr
        inner = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        return HEIGHT - MARGIN["bottom"] - (y - y0) / (y1 - y0) * inner

    def rect(self, x0, y0, x1, y1, fill, opacity=1.0, stroke=None):
        edge = f' stroke="{stroke}" stroke-width="1.5"' if stroke else ""
        self.parts.append(
            f'<rect x="{_fmt(min(self.px(x0), self.px(x1)))}" '
            f'y="{_fmt(min(self.py(y0), self.py(y1)))}" '
            f'width="{_fmt(abs(self.px(x1) - self.px(x0)))}" '
            f'height="{_fmt(abs(self.py(y1) - self.py(y0)))}" '
            f'fill="{fill}" opacity="{opacity}"{edge}/>'
        )

    def polyline(self, xs, ys, color, width=1.5, dash=None):
        pts = " ".join(
            f"{_fmt(self.px(x))},{_fmt(self.py(y))}"
            for x, y in zip(xs, ys)
            if np.isfinite(x) and np.isfinite(y)
        )
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{extra}/>'
        )

    def line(self, x0, y0, x1, y1, color, width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(self.px(x0))}" y1="{_fmt(self.py(y0))}" '
            f'x2="{_fmt(self.px(x1))}" y2="{_fmt(self.py(y1))}" '
            f'stroke="{color}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, x, y, color, r=2.5, opacity=0.8):
        self.parts.append(
            f'<circle cx="{_fmt(self.px(x))}" cy="{_fmt(self.py(y))}" '
            f'r="{r}" fill="{color}" opacity="{opacity}"/>'
        )

    def text_px(self, x, y, s, size=11, anchor="start", color="#333", rotate=None):
        tr = f' transform="rotate({rotate} {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}" '
            f'fill="{color}"{tr}>{escape(s)}</text>'
        )

    def legend(self, entries: list[tuple[str, str]]):
        x = MARGIN["left"] + 10
        y = MARGIN["top"] + 6
        for label, color in entries:
            self.parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="14" height="4" '
                f'fill="{color}"/>'
            )
            self.text_px(x + 20, y + 6, label, size=11)
            y += 16

    def render(self, path) -> None:
        axis_parts = []
        left, bottom = MARGIN["left"], HEIGHT - MARGIN["bottom"]
        right, top = WIDTH - MARGIN["right"], MARGIN["top"]
        axis_parts.append(
            f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" '
            'stroke="#222" stroke-width="1"/>'
        )
        axis_parts.append(
            f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" '
            'stroke="#222" stroke-width="1"/>'
        )
        body = list(self.parts)
        self.parts = axis_parts
        for t in _ticks(*self.xr):
            xpx = self.px(t)
            self.parts.append(
                f'<line x1="{_fmt(xpx)}" y1="{bottom}" x2="{_fmt(xpx)}" '
                f'y2="{bottom + 4}" stroke="#222"/>'
            )
            self.text_px(xpx, bottom + 16, _tick_label(t), anchor="middle")
        for t in _ticks(*self.yr):
            ypx = self.py(t)
            self.parts.append(
                f'<line x1="{left - 4}" y1="{_fmt(ypx)}" x2="{left}" '
                f'y2="{_fmt(ypx)}" stroke="#222"/>'
            )
            self.text_px(left - 7, ypx + 4, _tick_label(t), anchor="end")
        self.parts.extend(body)
        self.text_px(WIDTH / 2, 18, self.title, size=14, anchor="middle")
        if self.x_label:
            self.text_px(WIDTH / 2, HEIGHT - 8, self.x_label, anchor="middle")
        if self.y_label:
            self.text_px(14, HEIGHT / 2, self.y_label, anchor="middle", rotate=-90)
        doc = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
            + "\n".join(self.parts)
            + "\n</svg>\n"
        )
        with open(path, "w") as fh:
            fh.write(doc)


def _finite_range(arrays) -> tuple[float, float]:
    vals = np.concatenate([np.asarray(a, dtype=float).ravel() for a in arrays])
    vals = vals[np.isfinite(vals)]
    if len(vals) == 0:
        return 0.0, 1.0
    return float(vals.min()), float(vals.max())


def line_plot(path, title, series, shade=None, x_label="week", y_label="z-score"):
    """Index-vs-value polylines; `shade` marks an index range (e.g. holdout)."""
    n = max(len(v) for _, v in series)
    lo, hi = _finite_range([v for _, v in series])
    c = Canvas(title, (0, max(n - 1, 1)), (lo, hi), x_label, y_label)
    if shade is not None:
        c.rect(shade[0], c.yr[0], shade[1], c.yr[1], fill="#dddddd", opacity=0.55)
    entries = []
    for i, (label, values) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        c.polyline(range(len(values)), values, color)
        entries.append((label, color))
    c.legend(entries)
    c.render(path)


def scatter_plot(path, title, groups, diagonal=True,
                 x_label="observed", y_label="predicted"):
    lo, hi = _finite_range(
        [np.concatenate([np.asarray(g[1], float), np.asarray(g[2], float)])
         for g in groups]
    )
    c = Canvas(title, (lo, hi), (lo, hi), x_label, y_label)
    if diagonal:
        c.polyline([lo, hi], [lo, hi], "#999999", width=1.0, dash="4,3")
    entries = []
    for i, (label, xs, ys) in enumerate(groups):
        color = PALETTE[i % len(PALETTE)]
        for x, y in zip(xs, ys):
            c.circle(x, y, color)
        entries.append((label, color))
    c.legend(entries)
    c.render(path)


def histogram_plot(path, title, groups, x_label="residual", y_label="count"):
    """Overlaid step outlines, one polyline per model's histogram."""
    lo = min(float(edges[0]) for _, edges, _ in groups)
    hi = max(float(edges[-1]) for _, edges, _ in groups)
    top = max(int(np.max(counts)) for _, _, counts in groups)
    c = Canvas(title, (lo, hi), (0, top), x_label, y_label)
    entries = []
    for i, (label, edges, counts) in enumerate(groups):
        color = PALETTE[i % len(PALETTE)]
        xs, ys = [edges[0]], [0.0]
        for j, count in enumerate(counts):
            xs += [edges[j], edges[j + 1]]
            ys += [count, count]
        xs.append(edges[-1])
        ys.append(0.0)
        c.polyline(xs, ys, color)
        entries.append((label, color))
    c.legend(entries)
    c.render(path)


def box_plot(path, title, items, y_label="residual"):
    """One whisker box per item; items are (label, five-number summary)."""
    lo = min(fn.min for _, fn in items)
    hi = max(fn.max for _, fn in items)
    c = Canvas(title, (-0.7, len(items) - 0.3), (lo, hi), "", y_label)
    half = 0.28
    for i, (label, fn) in enumerate(items):
        color = PALETTE[i % len(PALETTE)]
        c.line(i, fn.min, i, fn.q1, color)
        c.line(i, fn.q3, i, fn.max, color)
        c.line(i - half / 2, fn.min, i + half / 2, fn.min, color)
        c.line(i - half / 2, fn.max, i + half / 2, fn.max, color)
        c.rect(i - half, fn.q1, i + half, fn.q3, fill="white", stroke=color)
        c.line(i - half, fn.median, i + half, fn.median, color, width=2.0)
        c.text_px(c.px(i), HEIGHT - MARGIN["bottom"] + 16, label, anchor="middle")
    c.render(path)
