"""In-memory frame-diagram model: elements, diagrams, structural validation.

A frame diagram is an ordered collection of elements.  Node elements
("Var" slots and "Concept" values) carry no links; arc elements (role
links between two nodes) point at their endpoints through ``prev`` and
``next``.  Element ids are positive integers, unique within a diagram but
not necessarily contiguous; id 0 is the reserved "no element" sentinel
used in link fields.

Diagrams are value-semantic and immutable: every mutation helper returns
a new diagram.  Validation never raises on bad model states --
``validate_diagram`` returns ``Diagnostic`` records and leaves acting on
them to the caller.

Diagnostic codes emitted by ``validate_diagram`` (the set is closed;
messages are informational only and never drive behaviour):

=====================  =====================================================
code                   meaning
=====================  =====================================================
BAD_ID                 element id is < 1
DUP_ID                 id already used by an earlier element
EMPTY_NAME             element name is the empty string
BAD_NAME               name/description contains characters XML cannot carry
BAD_KIND_TAG           kind tag is empty or not XML-representable
BAD_GEOMETRY           bounding box with width or height < 1
NODE_HAS_LINKS         Var/Concept element with a nonzero prev or next
ARC_MISSING_ENDPOINT   arc with a zero prev or next
DANGLING_REF           arc link referencing an id absent from the diagram
ARC_ENDPOINT_NOT_NODE  arc link resolving to another arc
ARC_SELF_LOOP          arc whose prev and next name the same element
=====================  =====================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal

__all__ = [
    "NULL_ID",
    "VAR",
    "CONCEPT",
    "ROLE_I",
    "ROLE_G",
    "ROLE_A",
    "ElementKind",
    "BoundingBox",
    "FrameElement",
    "FrameDiagram",
    "Diagnostic",
    "FrameForgeError",
    "ValidationError",
    "NotFoundError",
    "WrongKindError",
    "validate_diagram",
    "add_element",
    "remove_element",
    "arc_endpoints",
]

#: Reserved link value meaning "no element".
NULL_ID = 0

_NODE_TAGS = ("Var", "Concept")
_ROLE_TAGS = ("i", "g", "a")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class FrameForgeError(Exception):
    """Base class for all toolchain errors."""


class ValidationError(FrameForgeError):
    """An operation received or produced a diagram/model that does not validate."""

    def __init__(self, diagnostics: tuple["Diagnostic", ...] | list["Diagnostic"], message: str | None = None):
        self.diagnostics: tuple[Diagnostic, ...] = tuple(diagnostics)
        if message is None:
            message = "; ".join(f"{d.code}: {d.message}" for d in self.diagnostics) or "validation failed"
        super().__init__(message)


class NotFoundError(FrameForgeError):
    """A referenced element or document does not exist."""


class WrongKindError(FrameForgeError):
    """An operation was applied to an element of the wrong kind."""


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    """One machine-readable violation or warning.

    ``code`` is a stable short string; ``element_id`` refers to a frame
    element when the finding is about one.  Messages are for humans only.
    """

    code: str
    message: str
    element_id: int | None = None
    severity: Literal["error", "warning"] = "error"

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "element_id": self.element_id,
            "message": self.message,
            "severity": self.severity,
        }


@dataclass(frozen=True)
class ElementKind:
    """Kind of a frame element, identified purely by its wire tag.

    Known tags: ``Var`` and ``Concept`` (nodes), ``i`` (instantiation),
    ``g`` (generalization) and ``a`` (named association) role arcs.  Any
    other tag is preserved verbatim and treated as an extension kind.
    """

    tag: str

    @property
    def is_var(self) -> bool:
        return self.tag == "Var"

    @property
    def is_concept(self) -> bool:
        return self.tag == "Concept"

    @property
    def is_node_kind(self) -> bool:
        return self.tag in _NODE_TAGS

    @property
    def is_role(self) -> bool:
        return self.tag in _ROLE_TAGS

    @property
    def is_unknown(self) -> bool:
        return self.tag not in _NODE_TAGS and self.tag not in _ROLE_TAGS

    @classmethod
    def from_tag(cls, tag: str) -> "ElementKind":
        return _KNOWN_KINDS.get(tag) or cls(tag)


VAR = ElementKind("Var")
CONCEPT = ElementKind("Concept")
ROLE_I = ElementKind("i")
ROLE_G = ElementKind("g")
ROLE_A = ElementKind("a")

_KNOWN_KINDS = {k.tag: k for k in (VAR, CONCEPT, ROLE_I, ROLE_G, ROLE_A)}


@dataclass(frozen=True)
class BoundingBox:
    """Pixel-space box.  left/top may be negative; width/height must be >= 1
    for the box to validate (permissive construction, checked by
    ``validate_diagram``)."""

    left: int
    top: int
    width: int
    height: int

    @property
    def center(self) -> tuple[int, int]:
        return (self.left + self.width // 2, self.top + self.height // 2)

    def as_list(self) -> list[int]:
        return [self.left, self.top, self.width, self.height]


@dataclass(frozen=True)
class FrameElement:
    """One node or arc of a frame diagram.

    Nodes carry ``prev == next == 0``; arcs carry the ids of their
    endpoints (``prev`` = specific/subordinate end, ``next`` =
    general/superordinate end).  Extension kinds with both links zero are
    treated as nodes, otherwise as arcs.
    """

    id: int
    kind: ElementKind
    name: str
    bbox: BoundingBox | None = None
    prev: int = NULL_ID
    next: int = NULL_ID
    description: str | None = None

    @property
    def is_arc(self) -> bool:
        if self.kind.is_role:
            return True
        if self.kind.is_unknown:
            return self.prev != NULL_ID or self.next != NULL_ID
        return False

    @property
    def is_node(self) -> bool:
        return not self.is_arc


@dataclass(frozen=True)
class FrameDiagram:
    """Ordered, immutable collection of frame elements (document order)."""

    elements: tuple[FrameElement, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not isinstance(self.elements, tuple):
            object.__setattr__(self, "elements", tuple(self.elements))

    def __iter__(self) -> Iterator[FrameElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def get(self, element_id: int) -> FrameElement | None:
        for el in self.elements:
            if el.id == element_id:
                return el
        return None

    def ids(self) -> list[int]:
        return [el.id for el in self.elements]

    def max_id(self) -> int:
        return max((el.id for el in self.elements), default=0)


EMPTY_DIAGRAM = FrameDiagram()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _xml_unsafe(text: str) -> bool:
    """True when the string cannot survive an XML 1.0 round trip."""
    for ch in text:
        o = ord(ch)
        if o < 0x20 and ch not in "\t\n\r":
            return True
        if 0xD800 <= o <= 0xDFFF:
            return True
    return False


def validate_diagram(diagram: FrameDiagram) -> list[Diagnostic]:
    """Check every structural invariant; return one Diagnostic per violation.

    Pure: equal diagrams yield byte-for-byte equal diagnostic sequences,
    ordered by element document order, then code.  An empty result means
    the diagram is valid.
    """
    found: list[tuple[int, Diagnostic]] = []

    def add(pos: int, code: str, message: str, element_id: int | None) -> None:
        found.append((pos, Diagnostic(code, message, element_id=element_id)))

    by_id: dict[int, FrameElement] = {}
    first_pos: dict[int, int] = {}
    for pos, el in enumerate(diagram.elements):
        if el.id < 1:
            add(pos, "BAD_ID", f"element #{pos} has non-positive id {el.id}", el.id)
        elif el.id in by_id:
            add(pos, "DUP_ID", f"id {el.id} already used by element #{first_pos[el.id]}", el.id)
        else:
            by_id[el.id] = el
            first_pos[el.id] = pos

    for pos, el in enumerate(diagram.elements):
        if el.name == "":
            add(pos, "EMPTY_NAME", f"element {el.id} has an empty name", el.id)
        elif _xml_unsafe(el.name):
            add(pos, "BAD_NAME", f"element {el.id} name contains non-XML characters", el.id)
        if el.description is not None and _xml_unsafe(el.description):
            add(pos, "BAD_NAME", f"element {el.id} description contains non-XML characters", el.id)
        if el.kind.tag == "" or _xml_unsafe(el.kind.tag):
            add(pos, "BAD_KIND_TAG", f"element {el.id} has unusable kind tag {el.kind.tag!r}", el.id)
        if el.bbox is not None and (el.bbox.width < 1 or el.bbox.height < 1):
            add(pos, "BAD_GEOMETRY", f"element {el.id} bounding box is {el.bbox.width}x{el.bbox.height}", el.id)

        if el.kind.is_node_kind:
            if el.prev != NULL_ID or el.next != NULL_ID:
                add(pos, "NODE_HAS_LINKS", f"node {el.id} carries links prev={el.prev} next={el.next}", el.id)
            continue
        if not el.is_arc:
            continue  # extension node: both links zero, nothing to resolve

        if el.prev == NULL_ID or el.next == NULL_ID:
            add(pos, "ARC_MISSING_ENDPOINT", f"arc {el.id} has prev={el.prev} next={el.next}", el.id)
        for label, ref in (("prev", el.prev), ("next", el.next)):
            if ref == NULL_ID:
                continue
            target = by_id.get(ref)
            if target is None:
                add(pos, "DANGLING_REF", f"arc {el.id} {label} references missing id {ref}", el.id)
            elif target.is_arc:
                add(pos, "ARC_ENDPOINT_NOT_NODE", f"arc {el.id} {label} references arc {ref}", el.id)
        if el.prev != NULL_ID and el.prev == el.next:
            add(pos, "ARC_SELF_LOOP", f"arc {el.id} links to element {el.prev} at both ends", el.id)

    found.sort(key=lambda item: (item[0], item[1].code))
    return [diag for _, diag in found]


# ---------------------------------------------------------------------------
# Mutation helpers (value semantics)
# ---------------------------------------------------------------------------


def add_element(
    diagram: FrameDiagram,
    kind: ElementKind,
    name: str,
    *,
    bbox: BoundingBox | None = None,
    prev: int = NULL_ID,
    next: int = NULL_ID,
    description: str | None = None,
) -> tuple[FrameDiagram, int]:
    """Append a new element with the next free id (1 + max existing id).

    Returns the grown diagram and the assigned id.  Raises
    ``ValidationError`` when the result would not validate (dangling
    links, node with links, ...).  The input diagram is unchanged.
    """
    new_id = diagram.max_id() + 1
    element = FrameElement(
        id=new_id, kind=kind, name=name, bbox=bbox, prev=prev, next=next, description=description
    )
    grown = FrameDiagram(diagram.elements + (element,))
    diagnostics = validate_diagram(grown)
    if diagnostics:
        raise ValidationError(diagnostics)
    return grown, new_id


def remove_element(diagram: FrameDiagram, element_id: int) -> FrameDiagram:
    """Remove one element; arcs touching a removed node cascade away too.

    Raises ``NotFoundError`` for an unknown id.  The result of removing
    from a valid diagram always validates clean.
    """
    if diagram.get(element_id) is None:
        raise NotFoundError(f"no element with id {element_id}")
    kept = tuple(
        el
        for el in diagram.elements
        if el.id != element_id and not (el.is_arc and element_id in (el.prev, el.next))
    )
    return FrameDiagram(kept)


def arc_endpoints(diagram: FrameDiagram, arc_id: int) -> tuple[int, int]:
    """Return (source, target) of an arc: source is the specific end
    (instance, subclass, association source), target the general end."""
    element = diagram.get(arc_id)
    if element is None:
        raise NotFoundError(f"no element with id {arc_id}")
    if not element.is_arc:
        raise WrongKindError(f"element {arc_id} is a {element.kind.tag} node, not an arc")
    return element.prev, element.next
