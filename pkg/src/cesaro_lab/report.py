"""Deterministic JSON / CSV / SVG emission for CLI reports."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from html import escape

import numpy as np


@dataclass
class Report:
    command: str
    config: dict
    results: list  # records: flat dicts
    version: str
    error_budget: float
    tolerances: dict = field(default_factory=dict)
    curves: list = field(default_factory=list)  # (label, xs, ys) for SVG
    columns: list | None = None
    axes: tuple[str, str] = ("x", "y")
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "version": self.version,
            "error_budget": self.error_budget,
            "tolerances": self.tolerances,
        }
        out.update(self.extra)
        return out


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _json(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = fmt_float(obj)
        return s if math.isfinite(obj) else f'"{s}"'
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _json(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, 0)}: {_json(obj[k], indent, level + 1)}"
                 for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj, indent: int = 2) -> str:
    """Sorted keys; floats with 17 significant digits; nan/inf as strings."""
    return _json(_plain(obj), indent, 0) + "\n"


def to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        out = []
        for col in columns:
            v = _plain(row.get(col, ""))
            if isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, float):
                v = fmt_float(v)
            elif isinstance(v, list):
                v = to_json(v).strip()
            out.append(v)
        writer.writerow(out)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Inverse of to_csv for numeric columns: floats parsed back exactly."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for k, v in row.items():
            try:
                parsed[k] = int(v)
            except ValueError:
                try:
                    parsed[k] = float(v)
                except ValueError:
                    parsed[k] = v
        rows.append(parsed)
    return rows


PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def to_svg(curves, title: str = "", xlabel: str = "x", ylabel: str = "y",
           width: int = 640, height: int = 480) -> str:
    """Polylines with axes.  NaN entries split a curve into pieces."""
    left, right, top, bottom = 70, 20, 40, 50
    xs = [x for _, cx, cy in curves for x, y in zip(cx, cy) if math.isfinite(x) and math.isfinite(y)]
    ys = [y for _, cx, cy in curves for x, y in zip(cx, cy) if math.isfinite(x) and math.isfinite(y)]
    if xs:
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{top + ph}" x2="{px(t):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py(t) + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{t:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="13" transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, (label, cx, cy) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        piece = []
        pieces = []
        for x, y in zip(cx, cy):
            if math.isfinite(x) and math.isfinite(y):
                piece.append(f"{px(x):.3f},{py(y):.3f}")
            elif piece:
                pieces.append(piece)
                piece = []
        if piece:
            pieces.append(piece)
        for p in pieces:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(p)}">'
                       f'<title>{escape(str(label))}</title></polyline>')
        out.append(f'<text x="{left + pw - 4}" y="{top + 14 + 14 * i}" text-anchor="end" fill="{color}" '
                   f'font-family="sans-serif" font-size="11">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(report: Report, fmt: str) -> bytes:
    if fmt == "json":
        return to_json(report.as_dict()).encode()
    if fmt == "csv":
        columns = report.columns or sorted({k for r in report.results for k in r})
        return to_csv(columns, report.results).encode()
    if fmt == "svg":
        return to_svg(report.curves, report.command, *report.axes).encode()
    raise ValueError(f"unknown format {fmt!r}")
