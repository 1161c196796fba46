"""
SVG and TikZ drawings of planar embeddings.

Both renderers place elements through :func:`positions`, so an SVG and a TikZ picture of the same input agree on
every coordinate. Output is byte-stable: numbers are printed with a fixed precision and everything is emitted in
embedding order.
"""

from __future__ import annotations

__all__ = ["RenderStyle", "positions", "render_svg", "render_tikz", "auto_coords"]

import dataclasses
import logging
from typing import Mapping
from xml.sax.saxutils import escape

from latcon.planar import (
    DiagramCoords,
    EdgeKind,
    PlanarEmbedding,
    classify_edges,
    is_sr,
    layered_coords,
    natural_diagram,
)

_logger = logging.getLogger(__name__)

Edge = tuple[str, str]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclasses.dataclass(frozen=True, slots=True)
class RenderStyle:
    """
    Attributes:
        scale: Pixels (SVG) per unit of diagram coordinates; TikZ uses centimetres and ignores it.
        radius: Node radius in pixels.
        margin: Blank border in pixels.
        labels: Write element ids next to the nodes.
        colors: Label colored edges with their color id and stroke them in a palette color.
        steep: Highlight steep edges (only meaningful with natural coordinates).
    """

    scale: float = 40.0
    radius: float = 4.0
    margin: float = 24.0
    labels: bool = True
    colors: bool = True
    steep: bool = True


def auto_coords(E: PlanarEmbedding) -> DiagramCoords | None:
    """The natural diagram of a slim rectangular embedding, ``None`` for anything else."""
    return natural_diagram(E) if is_sr(E) else None


def positions(
    E: PlanarEmbedding,
    coords: DiagramCoords | None = None,
    layout: Mapping[str, tuple[float, float]] | None = None,
) -> dict[str, tuple[float, float]]:
    """
    Element -> ``(x, y)`` with ``y`` growing upward.

    An explicit ``layout`` wins over ``coords``; the layered fallback is used when neither is given.
    """
    if layout is not None:
        return {x: (float(layout[x][0]), float(layout[x][1])) for x in E.lattice.elements}
    if coords is not None:
        return {x: (float(a), float(b)) for x, (a, b) in ((x, coords.drawing(x)) for x in E.lattice.elements)}
    return {x: (float(a), float(b)) for x, (a, b) in layered_coords(E).items()}


def _palette(color: Mapping[Edge, str]) -> dict[str, str]:
    return {c: _PALETTE[i % len(_PALETTE)] for i, c in enumerate(sorted(set(color.values())))}


def _steep_edges(coords: DiagramCoords | None, style: RenderStyle) -> set[Edge]:
    if coords is None or not style.steep:
        return set()
    return {e for e, kind in classify_edges(coords).items() if kind is EdgeKind.STEEP}


def _num(v: float) -> str:
    return f"{v:.2f}"


def render_svg(
    E: PlanarEmbedding,
    coords: DiagramCoords | None = None,
    color: Mapping[Edge, str] | None = None,
    style: RenderStyle | None = None,
    layout: Mapping[str, tuple[float, float]] | None = None,
) -> str:
    """
    Draw ``E`` as an SVG document.

    Args:
        E: The embedding.
        coords: Natural diagram coordinates; ``None`` draws by rank and barycenter.
        color: Optional edge colors.
        style: Rendering options.
        layout: Explicit element positions, used instead of ``coords``.
    """
    style = style or RenderStyle()
    color = color or {}
    pos = positions(E, coords, layout)
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * style.scale + 2 * style.margin
    height = (y1 - min(ys)) * style.scale + 2 * style.margin

    def at(x: str) -> tuple[str, str]:
        px, py = pos[x]
        return _num((px - x0) * style.scale + style.margin), _num((y1 - py) * style.scale + style.margin)

    palette = _palette(color) if style.colors else {}
    steep = _steep_edges(coords, style)
    out = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{_num(width)}' height='{_num(height)}' "
        f"viewBox='0 0 {_num(width)} {_num(height)}'>\n",
        "<g stroke='#000000' stroke-width='1.5'>\n",
    ]
    for a, b in E.lattice.edges():
        (xa, ya), (xb, yb) = at(a), at(b)
        attrs = ""
        if palette and (a, b) in color:
            attrs += f" stroke='{palette[color[(a, b)]]}'"
        if (a, b) in steep:
            attrs += " stroke-width='3' stroke-dasharray='6 3'"
        out.append(f"<line x1='{xa}' y1='{ya}' x2='{xb}' y2='{yb}'{attrs}/>\n")
    out.append("</g>\n")
    if palette:
        out.append("<g font-family='sans-serif' font-size='10' fill='#555555'>\n")
        for a, b in E.lattice.edges():
            if (a, b) in color:
                (xa, ya), (xb, yb) = pos[a], pos[b]
                mx = ((xa + xb) / 2 - x0) * style.scale + style.margin + 3
                my = (y1 - (ya + yb) / 2) * style.scale + style.margin
                out.append(f"<text x='{_num(mx)}' y='{_num(my)}'>{escape(color[(a, b)])}</text>\n")
        out.append("</g>\n")
    out.append("<g fill='#ffffff' stroke='#000000' stroke-width='1.5'>\n")
    for x in E.lattice.elements:
        cx, cy = at(x)
        out.append(f"<circle cx='{cx}' cy='{cy}' r='{_num(style.radius)}'/>\n")
    out.append("</g>\n")
    if style.labels:
        out.append("<g font-family='sans-serif' font-size='11'>\n")
        for x in E.lattice.elements:
            cx, cy = at(x)
            lx = _num(float(cx) + style.radius + 2)
            out.append(f"<text x='{lx}' y='{cy}'>{escape(x)}</text>\n")
        out.append("</g>\n")
    out.append("</svg>\n")
    _logger.debug("Rendered %d elements to SVG", len(E.lattice))
    return "".join(out)


def render_tikz(
    E: PlanarEmbedding,
    coords: DiagramCoords | None = None,
    color: Mapping[Edge, str] | None = None,
    style: RenderStyle | None = None,
    layout: Mapping[str, tuple[float, float]] | None = None,
) -> str:
    """Draw ``E`` as a TikZ picture with the same coordinates as :func:`render_svg`."""
    style = style or RenderStyle()
    color = color or {}
    pos = positions(E, coords, layout)
    names = {x: f"n{i}" for i, x in enumerate(E.lattice.elements)}
    steep = _steep_edges(coords, style)
    out = ["\\begin{tikzpicture}\n"]
    for x in E.lattice.elements:
        px, py = pos[x]
        label = f" [label=right:{{{_tex(x)}}}]" if style.labels else ""
        out.append(f"  \\node[circle,draw,inner sep=1.5pt]{label} ({names[x]}) at ({_num(px)},{_num(py)}) {{}};\n")
    for a, b in E.lattice.edges():
        opts = ["very thick,dashed"] if (a, b) in steep else []
        node = ""
        if style.colors and (a, b) in color:
            node = f" node[midway,right,font=\\scriptsize] {{{_tex(color[(a, b)])}}}"
        opt = f"[{','.join(opts)}]" if opts else ""
        out.append(f"  \\draw{opt} ({names[a]}) --{node} ({names[b]});\n")
    out.append("\\end{tikzpicture}\n")
    return "".join(out)


def _tex(text: str) -> str:
    return "".join("\\" + c if c in "_&%$#{}" else c for c in text)
