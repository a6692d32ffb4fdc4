"""Bidirectional frame <-> UML translation with provenance tracing.

Forward mapping (applied to a validated diagram):

* Var node            -> class with the three standard attributes
* Concept node        -> instance specification, classified by the target
                         of its single outgoing ``i`` arc
* ``i`` arc           -> instance-of relation (Concept -> Var only)
* ``g`` arc           -> generalization (Var -> Var only)
* ``a`` arc           -> association labelled with the arc name
* extension kinds     -> error in strict mode, otherwise skipped with an
                         UNKNOWN_KIND warning and a model comment

UML ids are derived from frame ids (``C<id>`` classes, ``O<id>``
instances, ``R<id>`` relations) and every translated element is recorded
in a ``TraceMap`` together with its geometry, which never enters the UML
model.  With the trace, the reverse direction restores ids, geometry and
document order exactly; without it, elements are renumbered 1..n in model
order and geometry is left for the layout pass.

Arc display names: ``i`` and ``g`` arcs have no image for their name in
UML, so reverse translation names them "i role" / "g role".  Diagrams
using those conventional names (everything this toolchain itself
produces) round-trip exactly; ``check_round_trip`` reports the name drift
otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .frame_model import (
    BoundingBox,
    Diagnostic,
    ElementKind,
    FrameDiagram,
    FrameElement,
    FrameForgeError,
    ValidationError,
    validate_diagram,
)
from .uml_model import (
    STANDARD_ATTRIBUTES,
    RelationKind,
    UmlClass,
    UmlComment,
    UmlInstance,
    UmlModel,
    UmlRelation,
    validate_model,
)

__all__ = [
    "TracePair",
    "TraceMap",
    "TranslationResult",
    "ReverseResult",
    "TranslationError",
    "StaleTraceError",
    "frame_to_uml",
    "uml_to_frame",
    "check_round_trip",
    "trace_to_json",
    "trace_from_json",
]

INSTANCE_ROLE_NAME = "i role"
GENERALIZATION_ROLE_NAME = "g role"


class TranslationError(FrameForgeError):
    """Translation could not produce a model; carries the findings."""

    def __init__(self, diagnostics: tuple[Diagnostic, ...] | list[Diagnostic]):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in self.diagnostics))


class StaleTraceError(FrameForgeError):
    """A trace references UML ids that are not present in the model."""


@dataclass(frozen=True)
class TracePair:
    frame_id: int
    uml_id: str
    bbox: BoundingBox | None = None


@dataclass(frozen=True)
class TraceMap:
    """Provenance pairs, in frame document order."""

    diagram_name: str = ""
    pairs: tuple[TracePair, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.pairs, tuple):
            object.__setattr__(self, "pairs", tuple(self.pairs))

    def by_uml_id(self) -> dict[str, TracePair]:
        return {p.uml_id: p for p in self.pairs}


@dataclass(frozen=True)
class TranslationResult:
    model: UmlModel
    trace: TraceMap
    warnings: tuple[Diagnostic, ...] = ()


@dataclass(frozen=True)
class ReverseResult:
    diagram: FrameDiagram
    warnings: tuple[Diagnostic, ...] = ()


def _require_valid_diagram(diagram: FrameDiagram) -> None:
    diagnostics = validate_diagram(diagram)
    if diagnostics:
        raise ValidationError(diagnostics, "diagram does not validate")


# ---------------------------------------------------------------------------
# Forward: frame -> UML
# ---------------------------------------------------------------------------


def frame_to_uml(diagram: FrameDiagram, strict: bool = True, *, name: str = "") -> TranslationResult:
    """Translate a valid diagram into a UML model plus trace.

    In strict mode extension kinds abort the translation; lenient mode
    skips them with warnings.  A Concept without exactly one outgoing
    ``i`` arc, or an arc whose endpoint kinds do not fit its role, always
    aborts (AMBIGUOUS_CLASSIFIER / BAD_ARC_KINDS).
    """
    _require_valid_diagram(diagram)
    by_id = {el.id: el for el in diagram.elements}

    errors: list[tuple[int, Diagnostic]] = []
    skipped: list[FrameElement] = []
    warnings: list[Diagnostic] = []

    outgoing_i: dict[int, list[FrameElement]] = {}
    for el in diagram.elements:
        if el.kind.tag == "i":
            outgoing_i.setdefault(el.prev, []).append(el)

    for pos, el in enumerate(diagram.elements):
        if el.kind.is_unknown:
            if strict:
                errors.append(
                    (pos, Diagnostic("UNKNOWN_KIND", f"element {el.id} has extension kind {el.kind.tag!r}", el.id))
                )
            else:
                skipped.append(el)
                warnings.append(
                    Diagnostic(
                        "UNKNOWN_KIND",
                        f"element {el.id} with extension kind {el.kind.tag!r} skipped",
                        el.id,
                        severity="warning",
                    )
                )
            continue
        if el.kind.is_concept:
            arcs = outgoing_i.get(el.id, [])
            if len(arcs) != 1:
                errors.append(
                    (
                        pos,
                        Diagnostic(
                            "AMBIGUOUS_CLASSIFIER",
                            f"Concept {el.id} has {len(arcs)} outgoing i arcs, needs exactly 1",
                            el.id,
                        ),
                    )
                )
        if el.kind.is_role:
            src, tgt = by_id[el.prev], by_id[el.next]
            if el.kind.tag == "i":
                ok = src.kind.is_concept and tgt.kind.is_var
            else:
                ok = src.kind.is_var and tgt.kind.is_var
            if not ok:
                errors.append(
                    (
                        pos,
                        Diagnostic(
                            "BAD_ARC_KINDS",
                            f"{el.kind.tag} arc {el.id} links {src.kind.tag} {src.id} to {tgt.kind.tag} {tgt.id}",
                            el.id,
                        ),
                    )
                )

    if errors:
        errors.sort(key=lambda item: (item[0], item[1].code))
        raise TranslationError([diag for _, diag in errors])

    skipped_ids = {el.id for el in skipped}
    classes: list[UmlClass] = []
    instances: list[UmlInstance] = []
    generalizations: dict[int, list[UmlRelation]] = {}
    instance_ofs: dict[int, UmlRelation] = {}
    associations: list[UmlRelation] = []
    pairs: list[TracePair] = []

    for el in diagram.elements:
        if el.id in skipped_ids:
            continue
        if el.kind.is_var:
            uml_id = f"C{el.id}"
            classes.append(UmlClass(uml_id, el.name, STANDARD_ATTRIBUTES, el.description))
        elif el.kind.is_concept:
            uml_id = f"O{el.id}"
            classifier = f"C{outgoing_i[el.id][0].next}"
            slots: list[tuple[str, str]] = [("id", str(el.id)), ("name", el.name)]
            if el.description is not None:
                slots.append(("description", el.description))
            instances.append(UmlInstance(uml_id, el.name, classifier, tuple(slots)))
        else:
            uml_id = f"R{el.id}"
            if el.kind.tag == "i":
                instance_ofs[el.prev] = UmlRelation(uml_id, RelationKind.INSTANCE_OF, f"O{el.prev}", f"C{el.next}")
            elif el.kind.tag == "g":
                generalizations.setdefault(el.prev, []).append(
                    UmlRelation(uml_id, RelationKind.GENERALIZATION, f"C{el.prev}", f"C{el.next}")
                )
            else:
                associations.append(
                    UmlRelation(uml_id, RelationKind.ASSOCIATION, f"C{el.prev}", f"C{el.next}", label=el.name)
                )
        pairs.append(TracePair(el.id, uml_id, el.bbox))

    # Canonical relation order mirrors where XMI carries each relation, so
    # that emission followed by re-import reproduces the same sequence.
    relations: list[UmlRelation] = []
    for el in diagram.elements:
        if el.kind.is_var and el.id in generalizations:
            relations.extend(generalizations[el.id])
    for el in diagram.elements:
        if el.kind.is_concept and el.id not in skipped_ids and el.id in instance_ofs:
            relations.append(instance_ofs[el.id])
    relations.extend(associations)

    comments = tuple(UmlComment(f"{el.kind.tag}:{el.name}") for el in skipped)
    model = UmlModel(
        name=name,
        classes=tuple(classes),
        instances=tuple(instances),
        relations=tuple(relations),
        comments=comments,
    )
    model_diags = validate_model(model)
    if model_diags:  # internal consistency guard; unreachable for valid input
        raise TranslationError(model_diags)
    return TranslationResult(model, TraceMap(name, tuple(pairs)), tuple(warnings))


# ---------------------------------------------------------------------------
# Reverse: UML -> frame
# ---------------------------------------------------------------------------


def _fold_extras(description: str | None, lines: list[str]) -> str | None:
    if not lines:
        return description
    parts = ([description] if description else []) + lines
    return "\n".join(parts)


def uml_to_frame(model: UmlModel, trace: TraceMap | None = None) -> ReverseResult:
    """Translate a valid model back into a frame diagram.

    With a trace, original frame ids, geometry and document order are
    restored exactly; elements missing from the trace get fresh ids and
    no geometry.  Without a trace, ids run 1..n in model order.  Class
    attributes beyond the standard three are folded into the Var
    description as ``attr: name:type`` lines (warning ATTRS_FOLDED);
    non-standard instance slots fold as ``slot: name=value`` lines
    (warning SLOTS_FOLDED).
    """
    model_diags = validate_model(model)
    if model_diags:
        raise ValidationError(model_diags, "model does not validate")

    warnings: list[Diagnostic] = []
    order: list[str] = []  # uml ids in output document order
    frame_ids: dict[str, int] = {}
    boxes: dict[str, BoundingBox | None] = {}

    model_order = model.element_ids()
    if trace is not None:
        seen_frame: set[int] = set()
        seen_uml: set[str] = set()
        for pair in trace.pairs:
            if pair.frame_id in seen_frame or pair.uml_id in seen_uml:
                raise FrameForgeError(f"malformed trace: duplicate pair for {pair.uml_id!r}")
            seen_frame.add(pair.frame_id)
            seen_uml.add(pair.uml_id)
        known = set(model_order)
        stale = [p.uml_id for p in trace.pairs if p.uml_id not in known]
        if stale:
            raise StaleTraceError(f"trace references unknown uml ids: {', '.join(stale)}")
        for pair in trace.pairs:
            order.append(pair.uml_id)
            frame_ids[pair.uml_id] = pair.frame_id
            boxes[pair.uml_id] = pair.bbox
        next_id = max(frame_ids.values(), default=0) + 1
        for uml_id in model_order:
            if uml_id not in frame_ids:
                order.append(uml_id)
                frame_ids[uml_id] = next_id
                next_id += 1
                boxes[uml_id] = None
    else:
        for number, uml_id in enumerate(model_order, start=1):
            order.append(uml_id)
            frame_ids[uml_id] = number
            boxes[uml_id] = None

    classes = {c.id: c for c in model.classes}
    instances = {i.id: i for i in model.instances}
    relations = {r.id: r for r in model.relations}

    elements: list[FrameElement] = []
    for uml_id in order:
        fid = frame_ids[uml_id]
        bbox = boxes[uml_id]
        if uml_id in classes:
            cls = classes[uml_id]
            attrs = list(cls.attributes)
            if tuple(attrs[: len(STANDARD_ATTRIBUTES)]) == STANDARD_ATTRIBUTES:
                extras = attrs[len(STANDARD_ATTRIBUTES) :]
            else:
                extras = attrs
            lines = [f"attr: {n}:{t}" for n, t in extras]
            if lines:
                warnings.append(
                    Diagnostic(
                        "ATTRS_FOLDED",
                        f"class {cls.id!r}: {len(lines)} extra attributes folded into description",
                        fid,
                        severity="warning",
                    )
                )
            elements.append(
                FrameElement(fid, ElementKind.from_tag("Var"), cls.name, bbox=bbox,
                             description=_fold_extras(cls.description, lines))
            )
        elif uml_id in instances:
            inst = instances[uml_id]
            description: str | None = None
            extra_lines: list[str] = []
            for slot_name, value in inst.slots:
                if slot_name == "description" and description is None:
                    description = value
                elif slot_name in ("id", "name"):
                    continue  # redundant with identity and display name
                else:
                    extra_lines.append(f"slot: {slot_name}={value}")
            if extra_lines:
                warnings.append(
                    Diagnostic(
                        "SLOTS_FOLDED",
                        f"instance {inst.id!r}: {len(extra_lines)} extra slots folded into description",
                        fid,
                        severity="warning",
                    )
                )
            elements.append(
                FrameElement(fid, ElementKind.from_tag("Concept"), inst.name, bbox=bbox,
                             description=_fold_extras(description, extra_lines))
            )
        else:
            rel = relations[uml_id]
            if rel.kind is RelationKind.INSTANCE_OF:
                kind, rel_name = "i", INSTANCE_ROLE_NAME
            elif rel.kind is RelationKind.GENERALIZATION:
                kind, rel_name = "g", GENERALIZATION_ROLE_NAME
            else:
                kind, rel_name = "a", rel.label or ""
            elements.append(
                FrameElement(fid, ElementKind.from_tag(kind), rel_name, bbox=bbox,
                             prev=frame_ids[rel.source], next=frame_ids[rel.target])
            )

    diagram = FrameDiagram(tuple(elements))
    diagnostics = validate_diagram(diagram)
    if diagnostics:  # cannot happen for a validating model; defensive
        raise ValidationError(diagnostics, "reverse translation produced an invalid diagram")
    return ReverseResult(diagram, tuple(warnings))


# ---------------------------------------------------------------------------
# Round-trip check
# ---------------------------------------------------------------------------


def check_round_trip(diagram: FrameDiagram) -> list[Diagnostic]:
    """Translate forward (lenient) and back with trace; report every
    field-level difference from the original.  Empty means lossless."""
    try:
        forward = frame_to_uml(diagram, strict=False)
    except TranslationError as exc:
        return list(exc.diagnostics)
    reverse = uml_to_frame(forward.model, forward.trace)

    diffs: list[Diagnostic] = []
    original = {el.id: el for el in diagram.elements}
    result = {el.id: el for el in reverse.diagram.elements}

    for el in diagram.elements:
        after = result.get(el.id)
        if after is None:
            diffs.append(Diagnostic("ROUNDTRIP_DIFF", f"element {el.id} lost in round trip", el.id))
            continue
        for field_name in ("kind", "name", "bbox", "prev", "next", "description"):
            before_v, after_v = getattr(el, field_name), getattr(after, field_name)
            if before_v != after_v:
                diffs.append(
                    Diagnostic(
                        "ROUNDTRIP_DIFF",
                        f"element {el.id} field {field_name} changed: {before_v!r} -> {after_v!r}",
                        el.id,
                    )
                )
    for el in reverse.diagram.elements:
        if el.id not in original:
            diffs.append(Diagnostic("ROUNDTRIP_DIFF", f"element {el.id} appeared in round trip", el.id))
    if not diffs and diagram.ids() != reverse.diagram.ids():
        diffs.append(Diagnostic("ROUNDTRIP_DIFF", "element order changed"))
    return diffs


# ---------------------------------------------------------------------------
# Trace sidecar format
# ---------------------------------------------------------------------------


def trace_to_json(trace: TraceMap) -> dict:
    return {
        "diagram_name": trace.diagram_name,
        "pairs": [
            {
                "frame_id": p.frame_id,
                "uml_id": p.uml_id,
                "bbox": p.bbox.as_list() if p.bbox else None,
            }
            for p in trace.pairs
        ],
    }


def trace_from_json(payload: dict) -> TraceMap:
    try:
        pairs = []
        for item in payload["pairs"]:
            bbox_raw = item.get("bbox")
            bbox = None
            if bbox_raw is not None:
                left, top, width, height = (int(v) for v in bbox_raw)
                bbox = BoundingBox(left, top, width, height)
            pairs.append(TracePair(int(item["frame_id"]), str(item["uml_id"]), bbox))
        return TraceMap(str(payload.get("diagram_name", "")), tuple(pairs))
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameForgeError(f"bad trace payload: {exc}") from exc


def trace_to_bytes(trace: TraceMap) -> bytes:
    """Stable sidecar-file bytes for a trace."""
    return (json.dumps(trace_to_json(trace), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def trace_from_bytes(data: bytes) -> TraceMap:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise FrameForgeError(f"bad trace file: {exc}") from exc
    return trace_from_json(payload)
