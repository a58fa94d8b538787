"""Circular drawings of book embeddings as SVG or Graphviz DOT.

Layout position 0 sits at angle 0 and positions advance counter-clockwise.
Output is built line by line with fixed float formatting, so the same
embedding always yields the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from app.core.embedding import BookEmbedding


@dataclass(frozen=True)
class ChordStyle:
    color: str
    width: float
    dash: str | None = None

    def svg_attributes(self) -> str:
        attrs = f'stroke="{self.color}" stroke-width="{self.width:g}"'
        if self.dash:
            attrs += f' stroke-dasharray="{self.dash}"'
        return attrs

    def dot_attributes(self) -> str:
        style = "dashed" if self.dash else "solid"
        return f'color="{self.color}", penwidth={self.width:g}, style={style}'


# Legend of the published drawings: red medium solid, black thin dashed,
# green thick dashed, blue narrow irregular dash, purple thin solid.
NAMED_STYLES: dict[str, ChordStyle] = {
    "red": ChordStyle("red", 2.0),
    "black": ChordStyle("black", 1.0, "6 4"),
    "green": ChordStyle("green", 3.0, "8 4"),
    "blue": ChordStyle("blue", 1.5, "2 2 6 2"),
    "purple": ChordStyle("purple", 1.0),
}
DEFAULT_ORDER = ("red", "black", "green", "blue", "purple")
EXTRA_COLORS = ("orange", "teal", "brown", "magenta", "gray")


def style_for_page(page: int, color_names: dict[int, str] | None = None) -> ChordStyle:
    name = (color_names or {}).get(page)
    if name in NAMED_STYLES:
        return NAMED_STYLES[name]
    if name:
        return ChordStyle(name, 1.5)
    if page <= len(DEFAULT_ORDER):
        return NAMED_STYLES[DEFAULT_ORDER[page - 1]]
    return ChordStyle(EXTRA_COLORS[(page - 1) % len(EXTRA_COLORS)], 1.5, "1 3")


def circle_positions(embedding: BookEmbedding, radius: float) -> dict[int, tuple[float, float]]:
    """Vertex -> (x, y) with y pointing up; SVG flips it."""
    n = embedding.layout.n
    coords = {}
    for p, v in enumerate(embedding.layout.order):
        angle = 2 * math.pi * p / n
        coords[v] = (radius * math.cos(angle), radius * math.sin(angle))
    return coords


def to_svg(embedding: BookEmbedding, color_names: dict[int, str] | None = None, size: int = 400) -> str:
    margin = 30
    radius = size / 2 - margin
    center = size / 2
    coords = {v: (center + x, center - y) for v, (x, y) in circle_positions(embedding, radius).items()}

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'  <circle cx="{center:.2f}" cy="{center:.2f}" r="{radius:.2f}" fill="none" stroke="#dddddd"/>',
    ]
    for page, edges in embedding.pages().items():
        style = style_for_page(page, color_names)
        lines.append(f'  <g class="page page-{page}" fill="none" {style.svg_attributes()}>')
        for u, v in edges:
            (x1, y1), (x2, y2) = coords[u], coords[v]
            lines.append(f'    <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
        lines.append("  </g>")
    for v in embedding.layout.order:
        x, y = coords[v]
        lines.append(f'  <circle class="vertex" cx="{x:.2f}" cy="{y:.2f}" r="9" fill="white" stroke="black"/>')
        lines.append(f'  <text x="{x:.2f}" y="{y + 4:.2f}" font-size="10" text-anchor="middle">{v}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def to_dot(embedding: BookEmbedding, color_names: dict[int, str] | None = None, radius: float = 3.0) -> str:
    """Undirected DOT with pinned positions (render with neato -n or fdp)."""
    coords = circle_positions(embedding, radius)
    result = ["graph G {", "    layout=neato;", "    splines=false;", "    node [shape=circle];"]
    for v in embedding.layout.order:
        x, y = coords[v]
        result.append(f'    {v} [pos="{x:.3f},{y:.3f}!"];')
    for page, edges in embedding.pages().items():
        attrs = style_for_page(page, color_names).dot_attributes()
        for u, v in edges:
            result.append(f'    {u} -- {v} [{attrs}, comment="page {page}"];')
    result.append("}")
    return "\n".join(result) + "\n"
