"""Minimal SVG line charts: axes, tick labels, polylines and a legend."""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from typing import Mapping, Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def _label(v: float) -> str:
    return f"{v:.4g}"


def line_chart(series: Mapping[str, Sequence[tuple[float, float]]], title: str = "",
               xlabel: str = "", ylabel: str = "", width: int = 640, height: int = 400,
               logy: bool = False) -> str:
    """Render named ``(x, y)`` series to an SVG document string.

    Non-finite points (and non-positive ones when ``logy``) are dropped.
    """
    def ok(y):
        return math.isfinite(y) and (y > 0 or not logy)

    cleaned = {k: [(x, math.log10(y) if logy else y) for x, y in pts if math.isfinite(x) and ok(y)]
               for k, pts in series.items()}
    xs = [x for pts in cleaned.values() for x, _ in pts] or [0.0, 1.0]
    ys = [y for pts in cleaned.values() for _, y in pts] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    ml, mr, mt, mb = 70, 150, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width),
                      height=str(height), viewBox=f"0 0 {width} {height}")
    ET.SubElement(root, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    text = dict(fill="black")
    ET.SubElement(root, "text", x=str(width / 2 - mr / 2), y="22", **{"text-anchor": "middle",
                  "font-size": "15"}, **text).text = title
    axis = dict(stroke="black", **{"stroke-width": "1"})
    ET.SubElement(root, "line", x1=str(ml), y1=str(mt + ph), x2=str(ml + pw), y2=str(mt + ph), **axis)
    ET.SubElement(root, "line", x1=str(ml), y1=str(mt), x2=str(ml), y2=str(mt + ph), **axis)
    for tx in _ticks(x0, x1):
        ET.SubElement(root, "text", x=f"{px(tx):.2f}", y=str(mt + ph + 16),
                      **{"text-anchor": "middle", "font-size": "11"}).text = _label(tx)
    for ty in _ticks(y0, y1):
        lab = _label(10 ** ty) if logy else _label(ty)
        ET.SubElement(root, "text", x=str(ml - 6), y=f"{py(ty) + 4:.2f}",
                      **{"text-anchor": "end", "font-size": "11"}).text = lab
    ET.SubElement(root, "text", x=str(ml + pw / 2), y=str(height - 10),
                  **{"text-anchor": "middle", "font-size": "12"}).text = xlabel
    ET.SubElement(root, "text", x="14", y=str(mt + ph / 2),
                  transform=f"rotate(-90 14 {mt + ph / 2})",
                  **{"text-anchor": "middle", "font-size": "12"}).text = ylabel
    for i, (name, pts) in enumerate(cleaned.items()):
        color = COLORS[i % len(COLORS)]
        if pts:
            ET.SubElement(root, "polyline", fill="none", stroke=color, **{"stroke-width": "1.8"},
                          points=" ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts))
        ly = mt + 10 + 18 * i
        ET.SubElement(root, "line", x1=str(ml + pw + 12), y1=str(ly), x2=str(ml + pw + 32),
                      y2=str(ly), stroke=color, **{"stroke-width": "2"})
        ET.SubElement(root, "text", x=str(ml + pw + 36), y=str(ly + 4),
                      **{"font-size": "11"}).text = name
    return ET.tostring(root, encoding="unicode")


def write_chart(path, series, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(line_chart(series, **kwargs))
