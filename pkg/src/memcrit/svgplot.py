"""Minimal standalone SVG line plots (I-V loops, log-log kinetics, R(t)).

Output is a pure function of the input: identical data give byte-identical
files. Input is validated before anything touches the filesystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .criteria import KineticsCurve, chordal_resistance
from .solver import Trace

__all__ = ["Series", "PLOT_KINDS", "render_plot", "svg_document"]

PLOT_KINDS = ("iv_loop", "kinetics_loglog", "resistance_vs_t")

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
            "#e377c2", "#17becf")
_W, _H = 640, 440
_ML, _MR, _MT, _MB = 78, 150, 36, 56
_MAX_POINTS = 4000


@dataclass(frozen=True)
class Series:
    """One labelled curve. ``markers`` draws points instead of a polyline."""

    label: str
    x: np.ndarray
    y: np.ndarray
    markers: bool = False


def _thin(x, y):
    # keep plots small; evenly strided subsample always keeps both ends
    if len(x) <= _MAX_POINTS:
        return x, y
    idx = np.unique(np.linspace(0, len(x) - 1, _MAX_POINTS).astype(int))
    return x[idx], y[idx]


def _nice_ticks(lo, hi, n=6):
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    k = 0
    while start + k * step <= hi + 1e-9 * step:
        ticks.append(start + k * step)
        k += 1
    return [0.0 if abs(t) < 1e-12 * step else t for t in ticks]


def _log_ticks(lo, hi):
    a, b = math.floor(lo), math.ceil(hi)
    step = max(1, math.ceil((b - a) / 8))
    return [float(e) for e in range(a, b + 1, step) if lo - 1e-9 <= e <= hi + 1e-9]


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.4g}"


def svg_document(series: list[Series], xlabel: str, ylabel: str, title: str = "",
                 logx: bool = False, logy: bool = False, note: str = "") -> str:
    """Return the SVG text for ``series`` on shared axes."""
    if not series:
        raise ValueError("nothing to plot")
    prepared = []
    for s in series:
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        ok = np.isfinite(x) & np.isfinite(y)
        if logx:
            ok &= x > 0
        if logy:
            ok &= y > 0
        x, y = x[ok], y[ok]
        if logx:
            x = np.log10(x)
        if logy:
            y = np.log10(y)
        prepared.append((s, *_thin(x, y)))
    xs = [p[1] for p in prepared if len(p[1])]
    if not xs:
        raise ValueError("no finite data to plot")
    ys = [p[2] for p in prepared if len(p[2])]
    x0, x1 = min(a.min() for a in xs), max(a.max() for a in xs)
    y0, y1 = min(a.min() for a in ys), max(a.max() for a in ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return _MT + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if note:
        out.insert(1, f"<desc>{escape(note)}</desc>")
    if title:
        out.append(f'<text x="{_ML + pw / 2:.2f}" y="20" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" '
               f'stroke="black"/>')
    xt = _log_ticks(x0, x1) if logx else _nice_ticks(x0, x1)
    yt = _log_ticks(y0, y1) if logy else _nice_ticks(y0, y1)
    for t in xt:
        X = px(t)
        text = f"1e{int(t)}" if logx else _label(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{_MT + ph}" x2="{_fmt(X)}" y2="{_MT + ph + 5}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{_MT + ph + 18}" text-anchor="middle">'
                   f'{escape(text)}</text>')
    for t in yt:
        Y = py(t)
        text = f"1e{int(t)}" if logy else _label(t)
        out.append(f'<line x1="{_ML - 5}" y1="{_fmt(Y)}" x2="{_ML}" y2="{_fmt(Y)}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{_ML - 8}" y="{_fmt(Y + 4)}" text-anchor="end">'
                   f'{escape(text)}</text>')
    out.append(f'<text x="{_ML + pw / 2:.2f}" y="{_H - 14}" text-anchor="middle">'
               f'{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{_MT + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_MT + ph / 2:.2f})">{escape(ylabel)}</text>')
    for k, (s, x, y) in enumerate(prepared):
        color = _PALETTE[k % len(_PALETTE)]
        if len(x) == 0:
            continue
        if s.markers:
            for a, b in zip(x, y):
                out.append(f'<circle cx="{_fmt(px(a))}" cy="{_fmt(py(b))}" r="3" '
                           f'fill="{color}"/>')
        else:
            pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                       f'points="{pts}"/>')
        ly = _MT + 14 + 18 * k
        lx = _ML + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 24}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _as_labelled(data, default):
    items = []
    for k, d in enumerate(data):
        if isinstance(d, tuple) and len(d) == 2 and isinstance(d[0], str):
            items.append(d)
        else:
            items.append((f"{default} {k + 1}", d))
    return items


def render_plot(data, kind: str, path, title: str = "",
                measured: tuple | None = None, config_hash: str = "") -> Path:
    """Render traces or kinetics curves to an SVG file.

    Parameters
    ----------
    data : list
        Traces (``iv_loop``, ``resistance_vs_t``) or :class:`KineticsCurve`
        objects (``kinetics_loglog``); items may be ``(label, obj)`` pairs.
    kind : str
        One of :data:`PLOT_KINDS`.
    measured : (v_p, t_set) arrays, optional
        Extra marker series overlaid on a kinetics plot.
    config_hash : str
        Written into the SVG ``<desc>`` element for provenance.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
    data = list(data or [])
    if not data:
        raise ValueError("render_plot needs at least one trace or curve")
    note = f"config_hash={config_hash}" if config_hash else ""
    series = []
    if kind == "kinetics_loglog":
        for label, c in _as_labelled(data, "curve"):
            if not isinstance(c, KineticsCurve):
                raise TypeError("kinetics plots take KineticsCurve objects")
            series.append(Series(label, c.heights, c.times, markers=len(c.points) < 3))
        if measured is not None:
            series.append(Series("measured", np.asarray(measured[0]), np.asarray(measured[1]),
                                 markers=True))
        doc = svg_document(series, "pulse height V_p (V)", "t_SET (s)", title, True, True, note)
    else:
        for label, tr in _as_labelled(data, "trace"):
            if not isinstance(tr, Trace):
                raise TypeError(f"{kind} plots take Trace objects")
            if len(tr) == 0:
                raise ValueError("empty trace")
            if kind == "iv_loop":
                series.append(Series(label, tr.v_applied, tr.i))
            else:
                mask, r = chordal_resistance(tr)
                series.append(Series(label, tr.t[mask], r))
        if kind == "iv_loop":
            doc = svg_document(series, "applied voltage (V)", "current (A)", title, note=note)
        else:
            doc = svg_document(series, "time (s)", "chordal resistance (ohm)", title, False, True, note)
    path = Path(path)
    try:
        path.write_text(doc)
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc.strerror or exc}") from exc
    return path
