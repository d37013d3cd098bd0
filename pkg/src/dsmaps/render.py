"""CSV and SVG output for region curves. Output is deterministic for a given input."""
from __future__ import annotations

import csv
import io
import math

import numpy as np

from .region import Polyline, RegionCurves

CSV_COLUMNS = ("curve", "index", "phi", "r", "x", "y")

STYLE = {
    "vertex_triangle": ("#1f4fd1", "vertex triangle"),
    "edge_arcs": ("#d12a1f", "edge arcs"),
    "hessian_circle": ("#1e9c3a", "Hessian circle"),
    "cp_boundary": ("#000000", "CP boundary"),
}

SIZE = 480.0
MARGIN = 40.0


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        return ""
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def region_csv(region: RegionCurves) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for line in region.polylines():
        r, phi = line.polar
        for k in range(line.sample_count):
            writer.writerow([line.name, k, _fmt(phi[k]), _fmt(r[k]), _fmt(line.x[k]), _fmt(line.y[k])])
    return buf.getvalue()


def _extent(region: RegionCurves) -> float:
    vals = [1e-3]
    for line in region.polylines():
        ok = line.finite()
        if ok.any():
            vals.append(float(np.max(np.abs(np.concatenate([line.x[ok], line.y[ok]])))))
    return max(vals) * 1.1


def _paths(line: Polyline, scale: float) -> list[str]:
    cx = cy = SIZE / 2.0
    out, cur = [], []
    for x, y in zip(line.x, line.y):
        if math.isfinite(x) and math.isfinite(y):
            cur.append(f"{cx + scale * x:.3f},{cy - scale * y:.3f}")
        elif cur:
            out.append(cur)
            cur = []
    if cur:
        out.append(cur)
    return ["M" + " L".join(seg) for seg in out if len(seg) > 1]


def region_svg(region: RegionCurves) -> str:
    """Standalone SVG with one ``<g class="family">`` per nonempty curve family."""
    scale = (SIZE / 2.0 - MARGIN) / _extent(region)
    title = f"a={region.a:g}, b={region.b:g}, c={region.c:g}"
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE:.0f} {SIZE:.0f}" '
        f'width="{SIZE:.0f}" height="{SIZE:.0f}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{SIZE:.0f}" height="{SIZE:.0f}" fill="#ffffff"/>',
    ]
    drawn = []
    if region.degenerate:
        parts.append(f'<text class="warning" x="{MARGIN:.0f}" y="{SIZE / 2:.0f}" font-size="14" '
                     f'fill="#aa0000">degenerate region (mu = {region.mu:.6g}): no admissible area</text>')
    else:
        for name in region.nonempty_families():
            colour, _ = STYLE[name]
            paths = [p for line in region.family(name) for p in _paths(line, scale)]
            if not paths:
                continue
            drawn.append(name)
            parts.append(f'<g class="family" id="{name}" fill="none" stroke="{colour}" stroke-width="1.5">')
            parts.extend(f'<path d="{p}"/>' for p in paths)
            parts.append("</g>")
    parts.append('<g class="legend" font-size="12" font-family="sans-serif">')
    for k, name in enumerate(drawn):
        colour, label = STYLE[name]
        y = 16 + 16 * k
        parts.append(f'<line x1="8" y1="{y - 4}" x2="28" y2="{y - 4}" stroke="{colour}" stroke-width="2"/>')
        parts.append(f'<text x="34" y="{y}">{label}</text>')
    parts.append(f'<text x="8" y="{SIZE - 8:.0f}">{title}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
