"""Minimal UML 2 class-diagram model: classes, instances, relations, comments.

This is the translation target for frame diagrams.  Identity is the
``UmlId`` string (unique across all element kinds of one model); names
may repeat.  Models are value-semantic and immutable.

``validate_model`` diagnostic codes (closed set):

====================  ======================================================
code                  meaning
====================  ======================================================
BAD_ID                empty id string
DUP_ID                id reused across the model
EMPTY_NAME            class/instance name or association label is empty
DANGLING_REF          classifier/endpoint/anchor reference does not resolve
BAD_RELATION_ENDS     endpoints of a relation have the wrong kinds or coincide
SLOT_MISMATCH         slot name not among the classifier's attribute names
MISSING_INSTANCEOF    instance lacks its instance-of relation
INSTANCEOF_MISMATCH   instance-of relation disagrees with the classifier,
                      or an instance has more than one
====================  ======================================================

Every instance pairs with exactly one ``INSTANCE_OF`` relation targeting
its classifier; relations follow a canonical order (generalizations
grouped by source class, then one instance-of per instance, then
associations) so that XMI emission and re-import are mutual inverses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .frame_model import Diagnostic

__all__ = [
    "RelationKind",
    "UmlClass",
    "UmlInstance",
    "UmlRelation",
    "UmlComment",
    "UmlModel",
    "STANDARD_ATTRIBUTES",
    "validate_model",
    "find_by_name",
]

#: Attributes every class translated from a frame carries, in order.
STANDARD_ATTRIBUTES: tuple[tuple[str, str], ...] = (
    ("id", "int"),
    ("name", "string"),
    ("description", "string"),
)


class RelationKind(Enum):
    INSTANCE_OF = "instanceOf"
    GENERALIZATION = "generalization"
    ASSOCIATION = "association"


@dataclass(frozen=True)
class UmlClass:
    id: str
    name: str
    attributes: tuple[tuple[str, str], ...] = STANDARD_ATTRIBUTES
    description: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.attributes, tuple):
            object.__setattr__(self, "attributes", tuple(tuple(a) for a in self.attributes))


@dataclass(frozen=True)
class UmlInstance:
    id: str
    name: str
    classifier: str
    slots: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.slots, tuple):
            object.__setattr__(self, "slots", tuple(tuple(s) for s in self.slots))


@dataclass(frozen=True)
class UmlRelation:
    id: str
    kind: RelationKind
    source: str
    target: str
    label: str | None = None  # association label; None for other kinds

    @property
    def name(self) -> str | None:
        """Displayed name: the label for associations, nothing otherwise."""
        return self.label if self.kind is RelationKind.ASSOCIATION else None


@dataclass(frozen=True)
class UmlComment:
    text: str
    anchor: str | None = None


@dataclass(frozen=True)
class UmlModel:
    name: str = ""
    classes: tuple[UmlClass, ...] = ()
    instances: tuple[UmlInstance, ...] = ()
    relations: tuple[UmlRelation, ...] = ()
    comments: tuple[UmlComment, ...] = ()

    def __post_init__(self) -> None:
        for attr in ("classes", "instances", "relations", "comments"):
            value = getattr(self, attr)
            if not isinstance(value, tuple):
                object.__setattr__(self, attr, tuple(value))

    def class_by_id(self, uml_id: str) -> UmlClass | None:
        for c in self.classes:
            if c.id == uml_id:
                return c
        return None

    def element_ids(self) -> list[str]:
        """Ids of all elements in model order (classes, instances, relations)."""
        return (
            [c.id for c in self.classes]
            + [i.id for i in self.instances]
            + [r.id for r in self.relations]
        )

    def is_empty(self) -> bool:
        return not (self.classes or self.instances or self.relations or self.comments)


def validate_model(model: UmlModel) -> list[Diagnostic]:
    """Check all model invariants; empty result means valid.

    Pure and deterministic: findings come out in model order (classes,
    instances, relations, comments), then code.
    """
    found: list[tuple[int, Diagnostic]] = []

    def add(pos: int, code: str, message: str) -> None:
        found.append((pos, Diagnostic(code, message)))

    classes = {c.id: c for c in model.classes}
    instances = {i.id: i for i in model.instances}

    seen: set[str] = set()
    pos = 0
    for uml_id in model.element_ids():
        if uml_id == "":
            add(pos, "BAD_ID", f"element #{pos} has an empty id")
        elif uml_id in seen:
            add(pos, "DUP_ID", f"id {uml_id!r} used more than once")
        seen.add(uml_id)
        pos += 1

    base = 0
    for offset, cls in enumerate(model.classes):
        if cls.name == "":
            add(base + offset, "EMPTY_NAME", f"class {cls.id!r} has an empty name")

    base = len(model.classes)
    instance_of: dict[str, list[UmlRelation]] = {}
    for rel in model.relations:
        if rel.kind is RelationKind.INSTANCE_OF:
            instance_of.setdefault(rel.source, []).append(rel)

    for offset, inst in enumerate(model.instances):
        p = base + offset
        if inst.name == "":
            add(p, "EMPTY_NAME", f"instance {inst.id!r} has an empty name")
        classifier = classes.get(inst.classifier)
        if classifier is None:
            add(p, "DANGLING_REF", f"instance {inst.id!r} classifier {inst.classifier!r} not found")
        else:
            attr_names = {name for name, _ in classifier.attributes}
            for slot_name, _ in inst.slots:
                if slot_name not in attr_names:
                    add(p, "SLOT_MISMATCH", f"instance {inst.id!r} slot {slot_name!r} not in classifier")
        rels = instance_of.get(inst.id, [])
        if not rels:
            add(p, "MISSING_INSTANCEOF", f"instance {inst.id!r} has no instance-of relation")
        elif len(rels) > 1:
            add(p, "INSTANCEOF_MISMATCH", f"instance {inst.id!r} has {len(rels)} instance-of relations")
        elif rels[0].target != inst.classifier:
            add(
                p,
                "INSTANCEOF_MISMATCH",
                f"instance {inst.id!r} classifier {inst.classifier!r} but relation targets {rels[0].target!r}",
            )

    base = len(model.classes) + len(model.instances)
    for offset, rel in enumerate(model.relations):
        p = base + offset
        src_is_class, tgt_is_class = rel.source in classes, rel.target in classes
        src_is_instance, tgt_is_instance = rel.source in instances, rel.target in instances
        for label, resolved in (("source", src_is_class or src_is_instance), ("target", tgt_is_class or tgt_is_instance)):
            if not resolved:
                add(p, "DANGLING_REF", f"relation {rel.id!r} {label} does not resolve")
        if (src_is_class or src_is_instance) and (tgt_is_class or tgt_is_instance):
            if rel.source == rel.target:
                add(p, "BAD_RELATION_ENDS", f"relation {rel.id!r} links {rel.source!r} to itself")
            elif rel.kind is RelationKind.INSTANCE_OF:
                if not (src_is_instance and tgt_is_class):
                    add(p, "BAD_RELATION_ENDS", f"instance-of {rel.id!r} must run instance -> class")
            else:
                if not (src_is_class and tgt_is_class):
                    add(p, "BAD_RELATION_ENDS", f"{rel.kind.value} {rel.id!r} must link two classes")
        if rel.kind is RelationKind.ASSOCIATION and not rel.label:
            add(p, "EMPTY_NAME", f"association {rel.id!r} has no label")

    base = len(model.classes) + len(model.instances) + len(model.relations)
    known = set(model.element_ids())
    for offset, comment in enumerate(model.comments):
        if comment.anchor is not None and comment.anchor not in known:
            add(base + offset, "DANGLING_REF", f"comment anchor {comment.anchor!r} not found")

    found.sort(key=lambda item: (item[0], item[1].code))
    return [diag for _, diag in found]


def find_by_name(model: UmlModel, name: str) -> list[str]:
    """Ids of all elements whose display name equals the query, in model
    order (classes, then instances, then relations)."""
    hits = [c.id for c in model.classes if c.name == name]
    hits += [i.id for i in model.instances if i.name == name]
    hits += [r.id for r in model.relations if r.name == name]
    return hits
