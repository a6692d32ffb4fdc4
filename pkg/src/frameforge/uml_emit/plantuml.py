"""Deterministic PlantUML class-diagram text for a UML model.

Line templates (normative, see docs/formats.md):

* ``class "NAME" as ID`` followed by one ``ID : +attr : type`` per attribute
* ``object "NAME" as ID`` followed by one ``ID : slot = value`` per slot
* ``SRC ..> DST : <<instanceOf>>`` for instance-of relations
* ``SRC --|> DST`` for generalizations
* ``SRC --> DST : label`` for associations
* ``note "text" as Nk`` per comment, plus ``Nk .. ANCHOR`` when anchored

Emission order: classes, instances, relations, notes, each in model
order.  PlantUML is a rendering handoff, not a storage format: quotes in
names become apostrophes and newlines become spaces.
"""

from __future__ import annotations

from ..uml_model import RelationKind, UmlModel

__all__ = ["to_plantuml"]


def _text(value: str) -> str:
    return value.replace('"', "'").replace("\r\n", " ").replace("\n", " ").replace("\r", " ")


def to_plantuml(model: UmlModel) -> str:
    lines = ["@startuml"]
    for cls in model.classes:
        lines.append(f'class "{_text(cls.name)}" as {cls.id}')
        for attr_name, type_name in cls.attributes:
            lines.append(f"{cls.id} : +{_text(attr_name)} : {_text(type_name)}")
    for inst in model.instances:
        lines.append(f'object "{_text(inst.name)}" as {inst.id}')
        for slot_name, value in inst.slots:
            lines.append(f"{inst.id} : {_text(slot_name)} = {_text(value)}")
    for rel in model.relations:
        if rel.kind is RelationKind.INSTANCE_OF:
            lines.append(f"{rel.source} ..> {rel.target} : <<instanceOf>>")
        elif rel.kind is RelationKind.GENERALIZATION:
            lines.append(f"{rel.source} --|> {rel.target}")
        else:
            lines.append(f"{rel.source} --> {rel.target} : {_text(rel.label or '')}")
    for number, comment in enumerate(model.comments, start=1):
        lines.append(f'note "{_text(comment.text)}" as N{number}')
        if comment.anchor is not None:
            lines.append(f"N{number} .. {comment.anchor}")
    lines.append("@enduml")
    return "\n".join(lines) + "\n"
