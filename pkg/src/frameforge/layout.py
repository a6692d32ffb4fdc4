"""Deterministic layered layout for diagrams lacking geometry.

Nodes are ranked by the hierarchy arcs: a ``g`` arc places its source
(subclass) one rank below its target, an ``i`` arc places the Concept one
rank below its classifier, and nodes with no outgoing hierarchy arc sit
at rank 0.  Ranks stack top to bottom; within a rank nodes go left to
right by id.  Arcs receive a small box centred between their endpoints.
Elements that already carry geometry keep it untouched, which also makes
the pass idempotent.

Integer arithmetic only, so results are identical across platforms.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .frame_model import (
    BoundingBox,
    FrameDiagram,
    FrameElement,
    FrameForgeError,
    ValidationError,
    validate_diagram,
)

__all__ = ["LayoutParams", "CyclicHierarchyError", "auto_layout"]

_ARC_BOX = 16  # arc boxes are nominal points, raised to this minimum size
_RANK_ARC_TAGS = ("i", "g")


class CyclicHierarchyError(FrameForgeError):
    """The hierarchy arcs form a cycle; carries one witness cycle."""

    def __init__(self, cycle: list[int]):
        self.cycle = list(cycle)
        super().__init__("hierarchy cycle: " + " -> ".join(str(i) for i in self.cycle))


@dataclass(frozen=True)
class LayoutParams:
    """Defaults reproduce the reference scale: 150x80 nodes on a 200 px
    vertical pitch starting at (50, 70)."""

    node_width: int = 150
    node_height: int = 80
    h_gap: int = 50
    v_gap: int = 120
    origin: tuple[int, int] = (50, 70)


DEFAULT_PARAMS = LayoutParams()


def _ranks(diagram: FrameDiagram) -> dict[int, int]:
    """Longest-path rank per node id; raises on hierarchy cycles."""
    node_ids = [el.id for el in diagram.elements if el.is_node]
    node_set = set(node_ids)
    # src depends on tgt: rank(src) >= rank(tgt) + 1
    dependents: dict[int, list[int]] = {n: [] for n in node_ids}
    pending: dict[int, int] = {n: 0 for n in node_ids}
    constraint: dict[int, list[int]] = {n: [] for n in node_ids}
    for el in diagram.elements:
        if el.is_arc and el.kind.tag in _RANK_ARC_TAGS:
            if el.prev in node_set and el.next in node_set:
                dependents[el.next].append(el.prev)
                pending[el.prev] += 1
                constraint[el.prev].append(el.next)

    rank = {n: 0 for n in node_ids}
    queue = deque(n for n in node_ids if pending[n] == 0)
    resolved = 0
    while queue:
        node = queue.popleft()
        resolved += 1
        for dep in dependents[node]:
            rank[dep] = max(rank[dep], rank[node] + 1)
            pending[dep] -= 1
            if pending[dep] == 0:
                queue.append(dep)

    if resolved != len(node_ids):
        remaining = {n for n in node_ids if pending[n] > 0}
        start = min(remaining)
        seen: list[int] = []
        node = start
        while node not in seen:
            seen.append(node)
            node = min(t for t in constraint[node] if t in remaining)
        cycle = seen[seen.index(node) :] + [node]
        raise CyclicHierarchyError(cycle)
    return rank


def auto_layout(diagram: FrameDiagram, params: LayoutParams | None = None) -> FrameDiagram:
    """Assign bounding boxes to every element that lacks one.

    Pure function of (diagram, params); existing geometry is preserved.
    Raises ``CyclicHierarchyError`` when hierarchy arcs form a cycle and
    ``ValidationError`` when the diagram itself does not validate.
    """
    p = params or DEFAULT_PARAMS
    diagnostics = validate_diagram(diagram)
    if diagnostics:
        raise ValidationError(diagnostics, "cannot lay out an invalid diagram")
    if not diagram.elements:
        return diagram

    rank = _ranks(diagram)
    by_rank: dict[int, list[int]] = {}
    for node_id, r in rank.items():
        by_rank.setdefault(r, []).append(node_id)

    origin_left, origin_top = p.origin
    node_boxes: dict[int, BoundingBox] = {}
    for r, members in by_rank.items():
        top = origin_top + r * (p.node_height + p.v_gap)
        for column, node_id in enumerate(sorted(members)):
            left = origin_left + column * (p.node_width + p.h_gap)
            node_boxes[node_id] = BoundingBox(left, top, p.node_width, p.node_height)

    # Final node boxes: existing geometry wins over the computed slot.
    final_box: dict[int, BoundingBox] = {}
    for el in diagram.elements:
        if el.is_node:
            final_box[el.id] = el.bbox if el.bbox is not None else node_boxes[el.id]

    placed: list[FrameElement] = []
    for el in diagram.elements:
        if el.bbox is not None:
            placed.append(el)
            continue
        if el.is_node:
            box = final_box[el.id]
        else:
            sx, sy = final_box[el.prev].center
            tx, ty = final_box[el.next].center
            mx, my = (sx + tx) // 2, (sy + ty) // 2
            box = BoundingBox(mx - _ARC_BOX // 2, my - _ARC_BOX // 2, _ARC_BOX, _ARC_BOX)
        placed.append(
            FrameElement(el.id, el.kind, el.name, bbox=box, prev=el.prev, next=el.next, description=el.description)
        )
    return FrameDiagram(tuple(placed))
