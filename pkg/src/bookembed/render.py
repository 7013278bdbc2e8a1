"""SVG chord diagrams of book embeddings in circular form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from bookembed.embedding import BookEmbedding
from bookembed.graph import Graph

PALETTE = ("red", "green", "blue", "orange", "violet")


def page_color(i: int) -> str:
    if i < len(PALETTE):
        return PALETTE[i]
    # golden-angle hues keep extra pages distinct and stable
    return f"hsl({(i * 137) % 360},70%,40%)"


@dataclass(frozen=True)
class RenderSpec:
    radius: float = 200.0
    margin: float = 40.0
    vertex_radius: float = 5.0
    stroke_width: float = 2.0
    labels: bool = True


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _arc(p: tuple[float, float], q: tuple[float, float], i: int, j: int, n: int, R: float) -> str:
    """Circle arc meeting the boundary at right angles, so it stays inside the disk."""
    steps = (j - i) % n
    theta = 2 * math.pi * min(steps, n - steps) / n
    if abs(theta - math.pi) < 1e-9:
        return f"M {_fmt(p[0])} {_fmt(p[1])} L {_fmt(q[0])} {_fmt(q[1])}"
    r = R * math.tan(theta / 2)
    # vertices run clockwise on screen; bend towards the centre
    sweep = 0 if steps <= n - steps else 1
    return f"M {_fmt(p[0])} {_fmt(p[1])} A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(q[0])} {_fmt(q[1])}"


def render_svg(g: Graph, emb: BookEmbedding, spec: RenderSpec = RenderSpec()) -> str:
    n = g.n
    R = spec.radius
    c = R + spec.margin
    size = 2 * c
    pos = emb.positions()
    pts = []
    for k in range(n):
        a = 2 * math.pi * k / max(n, 1) - math.pi / 2
        pts.append((c + R * math.cos(a), c + R * math.sin(a)))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(size)}" height="{_fmt(size)}" '
        f'viewBox="0 0 {_fmt(size)} {_fmt(size)}">',
        f'<circle cx="{_fmt(c)}" cy="{_fmt(c)}" r="{_fmt(R)}" fill="none" stroke="#ccc"/>',
    ]
    for page in range(emb.page_count):
        out.append(f'<g class="page" data-page="{page}" stroke="{page_color(page)}" '
                   f'stroke-width="{_fmt(spec.stroke_width)}" fill="none">')
        for e, (u, v) in enumerate(g.edges):
            if emb.page_of[e] != page:
                continue
            i, j = sorted((pos[u], pos[v]))
            out.append(f'<path d="{_arc(pts[i], pts[j], i, j, n, R)}"/>')
        out.append("</g>")
    out.append('<g class="vertices" fill="black">')
    for k, v in enumerate(emb.spine):
        x, y = pts[k]
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(spec.vertex_radius)}"/>')
        if spec.labels:
            a = 2 * math.pi * k / max(n, 1) - math.pi / 2
            lx, ly = c + (R + 16) * math.cos(a), c + (R + 16) * math.sin(a)
            out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="11" text-anchor="middle" '
                       f'dominant-baseline="middle">{escape(g.label(v))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
