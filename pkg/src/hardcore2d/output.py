"""Reproducible tabular output: CSV, JSON and minimal SVG line charts.

Floats are written with 12 significant digits through ``format``, which is
locale-independent, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from xml.sax.saxutils import escape

__all__ = ["fmt_float", "write_rows", "render_csv", "render_json", "svg_line_chart"]

DIGITS = 12


def fmt_float(x):
    return format(float(x), f".{DIGITS}g")


def _cell(v):
    if isinstance(v, bool) or v is None:
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    try:
        return fmt_float(float(v))
    except (TypeError, ValueError):
        return str(v)


def _json_value(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            return None
        return float(fmt_float(v))
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    try:
        return _json_value(float(v))
    except (TypeError, ValueError):
        return str(v)


def render_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(columns, rows, meta):
    doc = {
        "meta": _json_value(meta),
        "data": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(doc, indent=1) + "\n"


def write_rows(path, columns, rows, fmt="csv", meta=None):
    """Write a table to ``path`` (``"-"`` is stdout) as CSV or JSON."""
    text = render_json(columns, rows, meta or {}) if fmt == "json" else render_csv(columns, rows)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]


def svg_line_chart(series, xlabel, ylabel, title="", width=640, height=420):
    """One polyline per ``(name, xs, ys)`` entry, with axes and a legend.

    Non-finite points break a line into segments.
    """
    left, right, top, bottom = 70, 150, 30, 50
    xs_all = [x for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(y)]
    ys_all = [y for _, xs, ys in series for y in ys if math.isfinite(y)]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{left + pw / 2:.2f}" y="18" text-anchor="middle">{escape(title)}</text>')
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{px(xv):.2f}" y="{top + ph + 16}" text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.2f}" text-anchor="end">{yv:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.2f})">{escape(ylabel)}</text>'
    )
    for i, (name, xs, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        segment = []
        for x, y in list(zip(xs, ys)) + [(math.nan, math.nan)]:
            if math.isfinite(y):
                segment.append(f"{px(x):.2f},{py(y):.2f}")
            elif segment:
                out.append(
                    f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
                    f'points="{" ".join(segment)}"/>'
                )
                segment = []
        if i < 30:
            ly = top + 12 + 14 * i
            out.append(f'<line x1="{left + pw + 10}" y1="{ly - 4}" x2="{left + pw + 28}" y2="{ly - 4}" stroke="{color}"/>')
            out.append(f'<text x="{left + pw + 32}" y="{ly}">{escape(str(name))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
