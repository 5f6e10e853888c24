"""CSV, JSON and SVG writers used by the command line front end.

All writers go through :func:`atomic_write`, which writes a temporary file in
the target directory and renames it into place.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["atomic_write", "format_number", "write_csv", "write_json", "write_svg", "svg_plot"]


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_number(value):
    """17 significant digits; ``None`` becomes an empty field."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    atomic_write(path, "\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path, data):
    atomic_write(path, json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def svg_plot(x, series, *, xlabel="x", ylabel="y", title=""):
    """Self-contained 800x600 SVG line plot.

    Parameters
    ----------
    x : array_like
    series : dict of label -> array_like
        One polyline per entry; non-finite values break the line.
    """
    width, height = 800, 600
    left, right, top, bottom = 80, 30, 50, 70
    pw, ph = width - left - right, height - top - bottom
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    x0, x1 = float(np.nanmin(x)), float(np.nanmax(x))
    y0, y1 = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    if x1 - x0 < 1e-12:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 6}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 22}" font-size="13" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{left - 6}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 10}" y="{py + 4:.2f}" font-size="13" text-anchor="end">{t:g}</text>')
    out.append(
        f'<text x="{left + pw / 2}" y="{height - 20}" font-size="15" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{top + ph / 2}" font-size="15" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + ph / 2})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{width / 2}" y="30" font-size="16" text-anchor="middle">{escape(title)}</text>')
    for n, (label, y) in enumerate(ys.items()):
        colour = _COLOURS[n % len(_COLOURS)]
        segments, current = [], []
        for xv, yv in zip(x, y):
            if np.isfinite(xv) and np.isfinite(yv):
                current.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        ly = top + 18 + 18 * n
        out.append(f'<line x1="{left + pw - 150}" y1="{ly}" x2="{left + pw - 120}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 112}" y="{ly + 4}" font-size="13">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, x, series, **kwargs):
    atomic_write(path, svg_plot(x, series, **kwargs))
