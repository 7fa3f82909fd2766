"""Static SVG plots of relations.

Output is plain text assembled in a fixed order with fixed-precision
numbers, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

from .finite import FiniteRelation
from .intervals import IntervalUnion
from .interval_relation import IntervalRelation
from .transforms import LegSystem

SIZE = 400
PAD = 30


def _num(v: float) -> str:
    return f"{v:.2f}"


def _doc(body: Iterable[str], width: int = SIZE, height: int = SIZE) -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    defs = (
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#333"/></marker></defs>'
    )
    return "\n".join([head, defs, *body, "</svg>"]) + "\n"


def finite_svg(R: FiniteRelation) -> str:
    """Directed graph with points on a circle in id order."""
    ids = R.ids
    n = max(len(ids), 1)
    c, r = SIZE / 2, SIZE / 2 - PAD - 10
    pos = {pid: (c + r * math.cos(2 * math.pi * i / n - math.pi / 2), c + r * math.sin(2 * math.pi * i / n - math.pi / 2)) for i, pid in enumerate(ids)}
    body = []
    for s, t in R.sorted_edges():
        (x0, y0), (x1, y1) = pos[s], pos[t]
        if s == t:
            body.append(f'<circle cx="{_num(x0)}" cy="{_num(y0 - 14)}" r="10" fill="none" stroke="#333"/>')
            continue
        dx, dy = x1 - x0, y1 - y0
        d = math.hypot(dx, dy)
        ux, uy = dx / d, dy / d
        body.append(
            f'<line x1="{_num(x0 + 9 * ux)}" y1="{_num(y0 + 9 * uy)}" x2="{_num(x1 - 9 * ux)}" y2="{_num(y1 - 9 * uy)}" '
            'stroke="#333" marker-end="url(#arrow)"/>'
        )
    for pid in ids:
        x, y = pos[pid]
        body.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="8" fill="#4a78c2"/>')
        body.append(f'<text x="{_num(x + 10)}" y="{_num(y - 10)}" font-size="12">{pid}</text>')
    return _doc(body)


def _sx(x) -> float:
    return PAD + float(x) * (SIZE - 2 * PAD)


def _sy(y) -> float:
    return SIZE - PAD - float(y) * (SIZE - 2 * PAD)


def _frame() -> list[str]:
    return [
        f'<rect x="{PAD}" y="{PAD}" width="{SIZE - 2 * PAD}" height="{SIZE - 2 * PAD}" fill="none" stroke="#999"/>',
        f'<line x1="{_num(_sx(0))}" y1="{_num(_sy(0))}" x2="{_num(_sx(1))}" y2="{_num(_sy(1))}" stroke="#ccc" stroke-dasharray="4"/>',
    ]


def interval_svg(R: IntervalRelation, shade: Optional[dict[str, IntervalUnion]] = None) -> str:
    """Branch plot; ``shade`` maps a color to x-sets drawn as vertical bands."""
    body = _frame()
    for color, U in sorted((shade or {}).items()):
        for lo, hi in U:
            w = max(_sx(hi) - _sx(lo), 1.0)
            body.append(f'<rect x="{_num(_sx(lo))}" y="{PAD}" width="{_num(w)}" height="{SIZE - 2 * PAD}" fill="{color}" fill-opacity="0.2"/>')
    for b in R.branches:
        pts = " ".join(f"{_num(_sx(x))},{_num(_sy(y))}" for x, y in zip(b.xs, b.ys))
        body.append(f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="2"/>')
    for x, y0, y1 in R.verticals:
        body.append(f'<line x1="{_num(_sx(x))}" y1="{_num(_sy(y0))}" x2="{_num(_sx(x))}" y2="{_num(_sy(y1))}" stroke="#27ae60" stroke-width="2"/>')
    for x0, x1, y in R.horizontals:
        body.append(f'<line x1="{_num(_sx(x0))}" y1="{_num(_sy(y))}" x2="{_num(_sx(x1))}" y2="{_num(_sy(y))}" stroke="#8e44ad" stroke-width="2"/>')
    for x, y in R.isolated:
        body.append(f'<circle cx="{_num(_sx(x))}" cy="{_num(_sy(y))}" r="3" fill="#2c3e50"/>')
    return _doc(body)


def legs_svg(S: LegSystem) -> str:
    """One small panel per leg, labeled with its target."""
    panels = []
    for k, m in enumerate(S.legs):
        ox = k * (SIZE // 2)
        panels.append(f'<g transform="translate({ox},0) scale(0.5)">')
        panels.extend(_frame())
        for b in m.pieces:
            pts = " ".join(f"{_num(_sx(x))},{_num(_sy(y))}" for x, y in zip(b.xs, b.ys))
            panels.append(f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="3"/>')
        panels.append(f'<text x="{PAD}" y="{PAD - 8}" font-size="20">leg {k} → leg {m.target}</text>')
        panels.append("</g>")
    return _doc(panels, width=max(SIZE, len(S.legs) * (SIZE // 2)), height=SIZE // 2)


def relation_svg(relation, shade: Optional[dict[str, IntervalUnion]] = None) -> str:
    if isinstance(relation, FiniteRelation):
        return finite_svg(relation)
    if isinstance(relation, LegSystem):
        return legs_svg(relation)
    return interval_svg(relation, shade)

