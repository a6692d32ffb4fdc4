"""Native SVG rendering of frame diagrams.

Vars render as rectangles, Concepts as rounded rectangles, arcs as
arrowed lines between the centres of their endpoint boxes with the role
name at the midpoint.  Every element must carry geometry (run the layout
pass first); the canvas is the union of all boxes plus a 20 px margin.
Output is deterministic text with LF endings.
"""

from __future__ import annotations

from ..frame_model import FrameDiagram, FrameForgeError

__all__ = ["MissingGeometryError", "render_frame_svg"]

MARGIN = 20
_CORNER_RADIUS = 12


class MissingGeometryError(FrameForgeError):
    """An element has no bounding box; names the offending element."""

    def __init__(self, element_id: int):
        self.element_id = element_id
        super().__init__(f"element {element_id} has no geometry; run auto_layout first")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_frame_svg(diagram: FrameDiagram) -> str:
    for el in diagram.elements:
        if el.bbox is None:
            raise MissingGeometryError(el.id)

    if not diagram.elements:
        left = top = 0
        width = height = 2 * MARGIN
    else:
        boxes = [el.bbox for el in diagram.elements]
        min_x = min(b.left for b in boxes)
        min_y = min(b.top for b in boxes)
        max_x = max(b.left + b.width for b in boxes)
        max_y = max(b.top + b.height for b in boxes)
        left, top = min_x - MARGIN, min_y - MARGIN
        width, height = (max_x - min_x) + 2 * MARGIN, (max_y - min_y) + 2 * MARGIN

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"'
        f' viewBox="{left} {top} {width} {height}">',
        "  <defs>",
        '    <marker id="arrow" markerWidth="10" markerHeight="8" refX="9" refY="4" orient="auto">',
        '      <path d="M 0 0 L 10 4 L 0 8 z" fill="#333333" />',
        "    </marker>",
        "  </defs>",
    ]

    by_id = {el.id: el for el in diagram.elements}
    for el in diagram.elements:
        if not el.is_node:
            continue
        b = el.bbox
        corners = f' rx="{_CORNER_RADIUS}" ry="{_CORNER_RADIUS}"' if el.kind.is_concept else ""
        lines.append(
            f'  <rect x="{b.left}" y="{b.top}" width="{b.width}" height="{b.height}"{corners}'
            ' fill="#ffffff" stroke="#333333" stroke-width="2" />'
        )
        cx, cy = b.center
        lines.append(
            f'  <text x="{cx}" y="{cy}" text-anchor="middle" dominant-baseline="middle"'
            f' font-family="sans-serif" font-size="14">{_escape(el.name)}</text>'
        )
    for el in diagram.elements:
        if el.is_node:
            continue
        sx, sy = by_id[el.prev].bbox.center
        tx, ty = by_id[el.next].bbox.center
        lines.append(
            f'  <line x1="{sx}" y1="{sy}" x2="{tx}" y2="{ty}" stroke="#333333" stroke-width="1.5"'
            ' marker-end="url(#arrow)" />'
        )
        mx, my = (sx + tx) // 2, (sy + ty) // 2
        lines.append(
            f'  <text x="{mx}" y="{my - 4}" text-anchor="middle" font-family="sans-serif"'
            f' font-size="12" fill="#555555">{_escape(el.name)}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
