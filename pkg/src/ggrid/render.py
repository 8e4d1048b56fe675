"""SVG drawings of instances, trees and tours."""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .geometry import Instance
from .ggmst import GgmstSolution
from .ggtsp import Tour

SCALE = 40.0


def _num(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(inst: Instance, sol: GgmstSolution | Tour | None = None, title: str | None = None) -> str:
    """Grid, shaded non-empty cells, points, and solution edges as SVG text.

    Solution edges are the only ``<line>`` elements; grid lines are drawn
    as a single ``<path>``. The y axis points up, as in the plane.
    """
    i_lo = min(c.i for c in inst.cell_order) - 1
    i_hi = max(c.i for c in inst.cell_order) + 2
    j_lo = min(c.j for c in inst.cell_order) - 1
    j_hi = max(c.j for c in inst.cell_order) + 2

    def X(x: float) -> str:
        return _num((x - i_lo) * SCALE)

    def Y(y: float) -> str:
        return _num((j_hi - y) * SCALE)

    width = (i_hi - i_lo) * SCALE
    height = (j_hi - j_lo) * SCALE
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
    ]
    if title:
        out.append(f"<title>{title.replace('&', '&amp;').replace('<', '&lt;')}</title>")
    out.append('<g class="cells" fill="#dde8f5" stroke="none">')
    for c in inst.cell_order:
        out.append(
            f'<rect x="{X(c.i)}" y="{Y(c.j + 1)}" width="{_num(SCALE)}" height="{_num(SCALE)}"/>'
        )
    out.append("</g>")
    d = [f"M{X(i)} {Y(j_lo)}V{Y(j_hi)}" for i in range(i_lo, i_hi + 1)]
    d += [f"M{X(i_lo)} {Y(j)}H{X(i_hi)}" for j in range(j_lo, j_hi + 1)]
    out.append(f'<path class="grid" d={quoteattr("".join(d))} stroke="#b0b0b0" stroke-width="0.5" fill="none"/>')

    edges: list[tuple[int, int]] = []
    chosen: set[int] = set()
    if isinstance(sol, GgmstSolution):
        edges = list(sol.edges)
        chosen = set(sol.chosen.values())
    elif isinstance(sol, Tour):
        edges = sol.edges()
        chosen = set(sol.order)
    if edges:
        out.append('<g class="solution" stroke="#c0392b" stroke-width="1.5">')
        for p, q in edges:
            a, b = inst.points[p], inst.points[q]
            out.append(f'<line x1="{X(a.x)}" y1="{Y(a.y)}" x2="{X(b.x)}" y2="{Y(b.y)}"/>')
        out.append("</g>")
    out.append('<g class="points">')
    r = _num(max(1.5, SCALE * 0.05))
    for idx, p in enumerate(inst.points):
        fill = "#c0392b" if idx in chosen else "#34495e"
        out.append(f'<circle cx="{X(p.x)}" cy="{Y(p.y)}" r="{r}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["render_svg"]
