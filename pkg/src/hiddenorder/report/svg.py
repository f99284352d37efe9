"""Minimal deterministic SVG writer for scatter and line plots.

Output depends only on the input numbers: no timestamps, ids or random
salts, so figures can be byte-compared.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from ..analysis.correlation import CorrelationCurve
from ..embedding import PhasePortrait
from ..errors import BadProjection

WIDTH, HEIGHT = 640, 560
MARGIN = dict(left=80, right=30, top=50, bottom=70)
POINT_COLOR = "#1f4e9c"
HIGHLIGHT = "#c0392b"
AZIMUTH_DEG = 30.0
ELEVATION_DEG = 20.0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


class Canvas:
    """Plot area with a linear map from data to pixel coordinates."""

    def __init__(self, xlim, ylim, title="", xlabel="", ylabel="", subtitle=""):
        self.xlim = self._pad(xlim)
        self.ylim = self._pad(ylim)
        self.parts = []
        self.x0 = MARGIN["left"]
        self.x1 = WIDTH - MARGIN["right"]
        self.y0 = HEIGHT - MARGIN["bottom"]
        self.y1 = MARGIN["top"]
        self.title, self.subtitle = title, subtitle
        self.xlabel, self.ylabel = xlabel, ylabel

    @staticmethod
    def _pad(lim):
        lo, hi = float(lim[0]), float(lim[1])
        if hi <= lo:
            lo, hi = lo - 0.5, hi + 0.5
        return lo, hi

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + (np.asarray(x, dtype=float) - lo) / (hi - lo) * (self.x1 - self.x0)

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 - (np.asarray(y, dtype=float) - lo) / (hi - lo) * (self.y0 - self.y1)

    def text(self, x, y, s, size=13, anchor="middle", rotate=None, color="#000"):
        tr = f' transform="rotate({rotate} {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'text-anchor="{anchor}" fill="{color}"{tr}>{escape(s)}</text>')

    def axes(self, xticks=True, yticks=True, tick_format="{:g}", log=False):
        self.parts.append(
            f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" '
            f'height="{self.y0 - self.y1}" fill="none" stroke="#000"/>')
        if xticks:
            for t in _nice_ticks(*self.xlim):
                x = float(self.px(t))
                self.parts.append(f'<line x1="{_fmt(x)}" y1="{self.y0}" x2="{_fmt(x)}" '
                                  f'y2="{self.y0 + 5}" stroke="#000"/>')
                label = f"1e{t:g}" if log else tick_format.format(t)
                self.text(x, self.y0 + 20, label, size=11)
        if yticks:
            for t in _nice_ticks(*self.ylim):
                y = float(self.py(t))
                self.parts.append(f'<line x1="{self.x0 - 5}" y1="{_fmt(y)}" x2="{self.x0}" '
                                  f'y2="{_fmt(y)}" stroke="#000"/>')
                label = f"1e{t:g}" if log else tick_format.format(t)
                self.text(self.x0 - 8, y + 4, label, size=11, anchor="end")
        self.text((self.x0 + self.x1) / 2, HEIGHT - 25, self.xlabel)
        self.text(22, (self.y0 + self.y1) / 2, self.ylabel, rotate=-90)

    def scatter(self, x, y, r=1.2, color=POINT_COLOR, opacity=0.6):
        xs, ys = self.px(x), self.py(y)
        body = "".join(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{r}"/>'
                       for a, b in zip(xs, ys))
        self.parts.append(f'<g fill="{color}" fill-opacity="{opacity}">{body}</g>')

    def polyline(self, x, y, color=POINT_COLOR, width=1.0, dash=None):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(self.px(x), self.py(y)))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def render(self) -> str:
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
                f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>\n')
        titles = []
        if self.title:
            titles.append(f'<text x="{WIDTH / 2:.2f}" y="24" font-size="15" text-anchor="middle">'
                          f'{escape(self.title)}</text>')
        if self.subtitle:
            titles.append(f'<text x="{WIDTH / 2:.2f}" y="42" font-size="11" text-anchor="middle" '
                          f'fill="#444">{escape(self.subtitle)}</text>')
        return head + "\n".join(titles + self.parts) + "\n</svg>\n"


def _limits(v):
    v = np.asarray(v, dtype=float)
    return float(v.min()), float(v.max())


def oblique(points3, azimuth=AZIMUTH_DEG, elevation=ELEVATION_DEG):
    """Project 3-vectors onto the screen plane of a fixed camera."""
    p = np.asarray(points3, dtype=float)
    lo, hi = p.min(axis=0), p.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    c = (p - lo) / span - 0.5
    a, e = math.radians(azimuth), math.radians(elevation)
    xr = c[:, 0] * math.cos(a) - c[:, 1] * math.sin(a)
    yr = c[:, 0] * math.sin(a) + c[:, 1] * math.cos(a)
    return xr, c[:, 2] * math.cos(e) - yr * math.sin(e)


def render_portrait(portrait: PhasePortrait, projection: Sequence[int] = (0, 1),
                    title: Optional[str] = None, point_radius: float = 1.2,
                    max_points: int = 20_000) -> str:
    """Scatter of delay vectors; two indices plot directly, three obliquely.

    Portraits longer than ``max_points`` are thinned by a fixed stride.
    """
    proj = tuple(int(i) for i in projection)
    m = portrait.dimension
    if len(proj) not in (2, 3) or any(i < 0 or i >= m for i in proj):
        raise BadProjection(f"projection {projection} invalid for an m={m} portrait")
    pts = portrait.points
    stride = max(1, -(-len(pts) // max_points))
    pts = pts[::stride]
    lag = portrait.config.lag
    names = [f"q(i+{c * lag})" if c else "q(i)" for c in range(m)]
    label = portrait.source.get("source_label", "")
    sub = f"{len(portrait)} points, m={m}, lag={lag}; source: {label}"
    if stride > 1:
        sub = f"every {stride}th of " + sub
    title = title or ("Reconstructed portrait (2-D)" if len(proj) == 2
                      else "Reconstructed portrait (3-D)")
    if len(proj) == 2:
        x, y = pts[:, proj[0]], pts[:, proj[1]]
        cv = Canvas(_limits(x), _limits(y), title, names[proj[0]], names[proj[1]], sub)
        cv.axes()
        cv.scatter(x, y, r=point_radius)
        return cv.render()

    x, y = oblique(pts[:, list(proj)])
    box = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], float)
    # data and box are both rescaled to the centred unit cube
    bx, by = oblique(box)
    lim = (min(x.min(), bx.min()), max(x.max(), bx.max()))
    ylim = (min(y.min(), by.min()), max(y.max(), by.max()))
    cv = Canvas(lim, ylim, title, "", "", sub + f"; azimuth {AZIMUTH_DEG:g}, elevation "
                f"{ELEVATION_DEG:g}")
    for i in range(8):
        for j in range(i + 1, 8):
            if np.sum(box[i] != box[j]) == 1:
                cv.polyline([bx[i], bx[j]], [by[i], by[j]], color="#999", width=0.8)
    for axis, corner in enumerate((4, 2, 1)):
        cv.text(float(cv.px(bx[corner])), float(cv.py(by[corner])) - 6, names[proj[axis]],
                size=12)
    cv.scatter(x, y, r=point_radius)
    return cv.render()


def render_curve(curve: CorrelationCurve, title: Optional[str] = None) -> str:
    """Log-log correlation integral with the scaling window and fit marked."""
    ok = curve.c_values > 0
    lx = np.log10(curve.radii[ok])
    ly = np.log10(curve.c_values[ok])
    cv = Canvas(_limits(np.log10(curve.radii)), _limits(ly) if ly.size else (-1, 0),
                title or f"Correlation integral, m={curve.embedding_dimension}",
                "r", "C(r)",
                f"{curve.pair_count} pairs ({'exact' if curve.exact else 'sampled'}), "
                f"Theiler window {curve.theiler}")
    cv.axes(log=True)
    cv.polyline(lx, ly, color="#888", width=1.0)
    cv.scatter(lx, ly, r=3, opacity=1.0)
    if curve.fitted:
        a, b = curve.scaling_region
        sel = np.arange(a, b)
        sel = sel[curve.c_values[sel] > 0]
        rx, ry = np.log10(curve.radii[sel]), np.log10(curve.c_values[sel])
        cv.scatter(rx, ry, r=4, color=HIGHLIGHT, opacity=1.0)
        mx, my = rx.mean(), ry.mean()
        fx = np.array([rx.min() - 0.3, rx.max() + 0.3])
        cv.polyline(fx, my + curve.slope * (fx - mx), color=HIGHLIGHT, width=1.5, dash="6,4")
        note = f"slope = {curve.slope:.3f} +/- {curve.slope_stderr:.3f} (R^2 = {curve.r_squared:.4f})"
    else:
        note = "no scaling region"
    cv.text(cv.x0 + 12, cv.y1 + 22, note, size=13, anchor="start", color=HIGHLIGHT)
    return cv.render()


def render_series(values, title="Event series", max_points: int = 400) -> str:
    """Index-vs-value plot of the first ``max_points`` samples."""
    v = np.asarray(values, dtype=float)[:max_points]
    i = np.arange(v.size)
    cv = Canvas((0, max(v.size - 1, 1)), _limits(v), title, "i", "q(i)",
                f"first {v.size} samples")
    cv.axes()
    cv.polyline(i, v, width=0.8)
    cv.scatter(i, v, r=1.6, opacity=1.0)
    return cv.render()


def render_return_map(values, title="Successive maxima return map") -> str:
    """Scatter of ``(M_i, M_{i+1})``."""
    v = np.asarray(values, dtype=float)
    lim = _limits(v)
    cv = Canvas(lim, lim, title, "M(i)", "M(i+1)", f"{max(v.size - 1, 0)} pairs")
    cv.axes()
    cv.scatter(v[:-1], v[1:], r=2.0, opacity=0.8)
    return cv.render()
