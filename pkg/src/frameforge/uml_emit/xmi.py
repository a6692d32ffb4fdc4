"""XMI 2.1 serialization of UML models and its inverse.

The emitted document shape (normative, see docs/formats.md): an
``xmi:XMI`` root holding one ``uml:Model``; primitive types, classes,
instance specifications and associations as ``packagedElement`` entries;
generalizations as children of their source class; the instance-of
relation as the instance's ``classifier`` reference element, which
carries the relation's ``xmi:id``; model comments as ``ownedComment``.
``xmi:id`` equals the model element's id throughout.

Re-import accepts everything this writer produces plus a documented
subset of foreign XMI (classes with attributes, instance specifications
with slots, generalizations, binary associations, primitive/data types,
comments).  Unsupported or unrepresentable content degrades to model
comments with ``UNSUPPORTED_ELEMENT``/``NAME_DEFAULTED`` warnings;
references to ids that exist nowhere in the document raise
``StaleRefError``.  Relations are rebuilt in carrier order
(generalizations by class, instance-of by instance, associations last),
so emit-then-import is the identity on models whose relations already
follow that canonical order -- everything the translator produces does.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from ..frame_model import Diagnostic, FrameForgeError
from ..uml_model import (
    RelationKind,
    UmlClass,
    UmlComment,
    UmlInstance,
    UmlModel,
    UmlRelation,
    validate_model,
)

__all__ = ["XmiImport", "XmiParseError", "StaleRefError", "to_xmi", "from_xmi"]

XMI_NS = "http://schema.omg.org/spec/XMI/2.1"
UML_NS = "http://schema.omg.org/spec/UML/2.1"
MODEL_ID = "_model"


class XmiParseError(FrameForgeError):
    """The document is not usable XMI (bad XML, missing ids, no model)."""


class StaleRefError(FrameForgeError):
    """A reference points at an id that exists nowhere in the document."""


@dataclass(frozen=True)
class XmiImport:
    model: UmlModel
    warnings: tuple[Diagnostic, ...] = ()


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------


def _attr_escape(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\t", "&#9;")
        .replace("\r", "&#13;")
    )


def _text_escape(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\r", "&#13;")


def to_xmi(model: UmlModel) -> bytes:
    """Serialize a model to deterministic XMI bytes (LF endings, UTF-8)."""
    diagnostics = validate_model(model)
    if diagnostics:
        from ..frame_model import ValidationError

        raise ValidationError(diagnostics, "cannot serialize an invalid model")
    type_ids: dict[str, str] = {}
    for cls in model.classes:
        for _, type_name in cls.attributes:
            if type_name not in type_ids:
                type_ids[type_name] = f"T{len(type_ids)}"

    attr_ids: dict[tuple[str, int], str] = {}
    for cls in model.classes:
        for index in range(len(cls.attributes)):
            attr_ids[(cls.id, index)] = f"{cls.id}-attr{index}"
    attr_by_name: dict[str, dict[str, str]] = {
        cls.id: {name: attr_ids[(cls.id, i)] for i, (name, _) in enumerate(cls.attributes)}
        for cls in model.classes
    }

    gens: dict[str, list[UmlRelation]] = {}
    instance_of: dict[str, UmlRelation] = {}
    associations: list[UmlRelation] = []
    for rel in model.relations:
        if rel.kind is RelationKind.GENERALIZATION:
            gens.setdefault(rel.source, []).append(rel)
        elif rel.kind is RelationKind.INSTANCE_OF:
            instance_of[rel.source] = rel
        else:
            associations.append(rel)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<xmi:XMI xmi:version="2.1" xmlns:xmi="{XMI_NS}" xmlns:uml="{UML_NS}">',
    ]
    model_attrs = f'xmi:id="{MODEL_ID}" name="{_attr_escape(model.name)}"'
    if model.is_empty():
        lines.append(f"  <uml:Model {model_attrs} />")
    else:
        lines.append(f"  <uml:Model {model_attrs}>")
        for type_name, type_id in type_ids.items():
            lines.append(
                f'    <packagedElement xmi:type="uml:PrimitiveType" xmi:id="{type_id}"'
                f' name="{_attr_escape(type_name)}" />'
            )
        for cls in model.classes:
            lines.append(
                f'    <packagedElement xmi:type="uml:Class" xmi:id="{cls.id}" name="{_attr_escape(cls.name)}">'
            )
            if cls.description is not None:
                lines.append(f'      <ownedComment xmi:id="{cls.id}-comment">')
                lines.append(f"        <body>{_text_escape(cls.description)}</body>")
                lines.append("      </ownedComment>")
            for index, (attr_name, type_name) in enumerate(cls.attributes):
                lines.append(
                    f'      <ownedAttribute xmi:id="{attr_ids[(cls.id, index)]}"'
                    f' name="{_attr_escape(attr_name)}" type="{type_ids[type_name]}" />'
                )
            for rel in gens.get(cls.id, ()):
                lines.append(f'      <generalization xmi:id="{rel.id}" general="{rel.target}" />')
            lines.append("    </packagedElement>")
        for inst in model.instances:
            lines.append(
                f'    <packagedElement xmi:type="uml:InstanceSpecification" xmi:id="{inst.id}"'
                f' name="{_attr_escape(inst.name)}">'
            )
            rel = instance_of.get(inst.id)
            if rel is not None:
                lines.append(f'      <classifier xmi:id="{rel.id}" xmi:idref="{inst.classifier}" />')
            else:
                lines.append(f'      <classifier xmi:idref="{inst.classifier}" />')
            features = attr_by_name.get(inst.classifier, {})
            for index, (slot_name, value) in enumerate(inst.slots):
                lines.append(
                    f'      <slot xmi:id="{inst.id}-slot{index}" definingFeature="{features[slot_name]}">'
                )
                lines.append(
                    f'        <value xmi:type="uml:LiteralString" xmi:id="{inst.id}-slot{index}-value"'
                    f' value="{_attr_escape(value)}" />'
                )
                lines.append("      </slot>")
            lines.append("    </packagedElement>")
        for rel in associations:
            lines.append(
                f'    <packagedElement xmi:type="uml:Association" xmi:id="{rel.id}"'
                f' name="{_attr_escape(rel.label or "")}">'
            )
            lines.append(f'      <memberEnd xmi:idref="{rel.id}-src" />')
            lines.append(f'      <memberEnd xmi:idref="{rel.id}-dst" />')
            lines.append(f'      <ownedEnd xmi:id="{rel.id}-src" name="source" type="{rel.source}" />')
            lines.append(f'      <ownedEnd xmi:id="{rel.id}-dst" name="target" type="{rel.target}" />')
            lines.append("    </packagedElement>")
        for number, comment in enumerate(model.comments, start=1):
            lines.append(f'    <ownedComment xmi:id="MC{number}">')
            lines.append(f"      <body>{_text_escape(comment.text)}</body>")
            if comment.anchor is not None:
                lines.append(f'      <annotatedElement xmi:idref="{comment.anchor}" />')
            lines.append("    </ownedComment>")
        lines.append("  </uml:Model>")
    lines.append("</xmi:XMI>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _ns_attr(element: ET.Element, name: str) -> str | None:
    """Namespaced attribute (xmi:id and friends) under any namespace URI."""
    for key, value in element.attrib.items():
        if key.endswith("}" + name):
            return value
    return None


def _xmi_kind(element: ET.Element) -> str | None:
    """Local part of the xmi:type / xsi:type discriminator."""
    value = _ns_attr(element, "type")
    if value is None:
        return None
    return value.split(":", 1)[-1]


def _ref(element: ET.Element) -> str | None:
    """Reference carried by an element: xmi:idref, bare idref, or href tail."""
    value = _ns_attr(element, "idref") or element.attrib.get("idref")
    if value is not None:
        return value
    href = element.attrib.get("href") or _ns_attr(element, "href")
    if href is not None:
        return href.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    return None


def _body_text(element: ET.Element) -> str:
    parts = [child.text or "" for child in element if _local(child.tag) == "body"]
    return "\n".join(parts)


def from_xmi(data: bytes) -> XmiImport:
    """Parse an XMI document into a model plus import warnings.

    Raises ``XmiParseError`` for malformed XML, a missing model element,
    missing/duplicate ``xmi:id``, and ``StaleRefError`` for references to
    ids absent from the whole document.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise XmiParseError(f"malformed XML: {exc.msg} (line {line}, column {column})") from exc

    if _local(root.tag) == "Model":
        model_el = root
    else:
        model_el = next((child for child in root if _local(child.tag) == "Model"), None)
        if model_el is None:
            raise XmiParseError("document contains no uml:Model element")

    warnings: list[Diagnostic] = []
    comments: list[UmlComment] = []

    def warn(code: str, message: str) -> None:
        warnings.append(Diagnostic(code, message, severity="warning"))

    # First pass: index every id and every named packaged element.
    packaged = [child for child in model_el if _local(child.tag) == "packagedElement"]
    all_ids: set[str] = set()
    names: dict[str, str] = {}  # any packaged element id -> its name

    def collect_ids(element: ET.Element) -> None:
        value = _ns_attr(element, "id")
        if value is not None:
            all_ids.add(value)
        for child in element:
            collect_ids(child)

    collect_ids(model_el)
    for element in packaged:
        xmi_id = _ns_attr(element, "id")
        if xmi_id is not None:
            names[xmi_id] = element.attrib.get("name", "")

    def check_ref(ref: str, context: str) -> None:
        if ref not in all_ids:
            raise StaleRefError(f"{context} references unknown id {ref!r}")

    classes: list[UmlClass] = []
    # class id -> (attr name, type ref or literal type name, needs_resolution)
    class_attr_types: dict[str, list[tuple[str, str, bool]]] = {}
    class_gens: dict[str, list[tuple[str, str]]] = {}  # class id -> (rel id, general ref)
    attr_feature: dict[str, tuple[str, str]] = {}  # attribute id -> (class id, attr name)
    instance_rows: list[tuple[str, str, str, str, list[tuple[str, str]]]] = []
    # (instance id, name, classifier ref, relation id, raw slots)
    association_rows: list[tuple[str, str, list[str]]] = []  # (id, label, end refs)

    def default_name(xmi_id: str, raw: str | None, what: str) -> str:
        if raw:
            return raw
        warn("NAME_DEFAULTED", f"{what} {xmi_id!r} has no name; using its id")
        return xmi_id

    for position, element in enumerate(packaged):
        kind = _xmi_kind(element)
        xmi_id = _ns_attr(element, "id")
        if kind in ("PrimitiveType", "DataType"):
            continue  # only contributes to the name table
        if kind == "Class":
            if xmi_id is None:
                raise XmiParseError(f"packagedElement #{position} (uml:Class) has no xmi:id")
            name = default_name(xmi_id, element.attrib.get("name"), "class")
            description: str | None = None
            attrs: list[tuple[str, str]] = []
            for child in element:
                local = _local(child.tag)
                if local == "ownedComment":
                    text = _body_text(child)
                    description = text if description is None else description + "\n" + text
                elif local == "ownedAttribute":
                    attr_id = _ns_attr(child, "id") or f"{xmi_id}-attr{len(attrs)}"
                    attr_name = child.attrib.get("name", "")
                    type_ref = child.attrib.get("type")
                    needs_resolution = type_ref is not None
                    if type_ref is None:
                        type_child = next((c for c in child if _local(c.tag) == "type"), None)
                        if type_child is not None:
                            href = type_child.attrib.get("href") or _ns_attr(type_child, "href")
                            if href is not None:
                                # external reference: the fragment tail is the type name
                                type_ref = href.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
                            else:
                                type_ref = _ref(type_child)
                                needs_resolution = type_ref is not None
                    attrs.append((attr_name, type_ref or "", needs_resolution))
                    attr_feature[attr_id] = (xmi_id, attr_name)
                elif local == "generalization":
                    general = child.attrib.get("general")
                    if general is None:
                        general_child = next((c for c in child if _local(c.tag) == "general"), None)
                        general = _ref(general_child) if general_child is not None else None
                    if general is None:
                        warn("UNSUPPORTED_ELEMENT", f"generalization in {xmi_id!r} has no target; skipped")
                        continue
                    rel_id = _ns_attr(child, "id") or f"{xmi_id}-gen{len(class_gens.get(xmi_id, []))}"
                    class_gens.setdefault(xmi_id, []).append((rel_id, general))
            classes.append(UmlClass(xmi_id, name, (), description))
            class_attr_types[xmi_id] = attrs
        elif kind == "InstanceSpecification":
            if xmi_id is None:
                raise XmiParseError(f"packagedElement #{position} (uml:InstanceSpecification) has no xmi:id")
            name = default_name(xmi_id, element.attrib.get("name"), "instance")
            classifier_els = [c for c in element if _local(c.tag) == "classifier"]
            if not classifier_els:
                warn("UNSUPPORTED_ELEMENT", f"instance {xmi_id!r} has no classifier; kept as comment")
                comments.append(UmlComment(f"InstanceSpecification:{name}"))
                continue
            if len(classifier_els) > 1:
                warn("UNSUPPORTED_ELEMENT", f"instance {xmi_id!r} has several classifiers; first used")
            classifier_el = classifier_els[0]
            classifier_ref = _ref(classifier_el)
            if classifier_ref is None:
                warn("UNSUPPORTED_ELEMENT", f"instance {xmi_id!r} classifier has no reference; kept as comment")
                comments.append(UmlComment(f"InstanceSpecification:{name}"))
                continue
            check_ref(classifier_ref, f"instance {xmi_id!r} classifier")
            rel_id = _ns_attr(classifier_el, "id") or f"{xmi_id}-instanceof"
            raw_slots: list[tuple[str, str]] = []
            for child in element:
                if _local(child.tag) != "slot":
                    continue
                feature = child.attrib.get("definingFeature")
                if feature is None:
                    warn("UNSUPPORTED_ELEMENT", f"slot without definingFeature in {xmi_id!r}; skipped")
                    continue
                check_ref(feature, f"slot in instance {xmi_id!r}")
                value_el = next((c for c in child if _local(c.tag) == "value"), None)
                value = value_el.attrib.get("value", "") if value_el is not None else ""
                raw_slots.append((feature, value))
            instance_rows.append((xmi_id, name, classifier_ref, rel_id, raw_slots))
        elif kind == "Association":
            if xmi_id is None:
                raise XmiParseError(f"packagedElement #{position} (uml:Association) has no xmi:id")
            label = element.attrib.get("name")
            if not label:
                label = "association"
                warn("NAME_DEFAULTED", f"association {xmi_id!r} has no name; labelled 'association'")
            ends = []
            for child in element:
                if _local(child.tag) == "ownedEnd":
                    end_type = child.attrib.get("type")
                    if end_type is None:
                        type_child = next((c for c in child if _local(c.tag) == "type"), None)
                        end_type = _ref(type_child) if type_child is not None else None
                    if end_type is not None:
                        ends.append(end_type)
            association_rows.append((xmi_id, label, ends))
        else:
            shown = kind or _local(element.tag)
            warn("UNSUPPORTED_ELEMENT", f"packagedElement kind {shown!r} kept as comment")
            comments.append(UmlComment(f"{shown}:{element.attrib.get('name', '')}"))

    class_ids = {c.id for c in classes}

    # Resolve local attribute type references against every named element;
    # external href tails already hold the literal type name.
    resolved_classes: list[UmlClass] = []
    for cls in classes:
        resolved: list[tuple[str, str]] = []
        for attr_name, type_ref, needs_resolution in class_attr_types[cls.id]:
            if not needs_resolution:
                resolved.append((attr_name, type_ref))
            elif type_ref in names:
                resolved.append((attr_name, names[type_ref]))
            elif type_ref in all_ids:
                resolved.append((attr_name, type_ref))
            else:
                raise StaleRefError(f"attribute {attr_name!r} of class {cls.id!r} references unknown type {type_ref!r}")
        resolved_classes.append(UmlClass(cls.id, cls.name, tuple(resolved), cls.description))
    classes = resolved_classes

    instances: list[UmlInstance] = []
    instance_of_rels: list[UmlRelation] = []
    for inst_id, name, classifier_ref, rel_id, raw_slots in instance_rows:
        if classifier_ref not in class_ids:
            warn("UNSUPPORTED_ELEMENT", f"instance {inst_id!r} classified by non-class; kept as comment")
            comments.append(UmlComment(f"InstanceSpecification:{name}"))
            continue
        slots: list[tuple[str, str]] = []
        for feature, value in raw_slots:
            owner = attr_feature.get(feature)
            if owner is None or owner[0] != classifier_ref:
                warn("UNSUPPORTED_ELEMENT", f"slot {feature!r} of {inst_id!r} not on the classifier; skipped")
                continue
            slots.append((owner[1], value))
        instances.append(UmlInstance(inst_id, name, classifier_ref, tuple(slots)))
        instance_of_rels.append(UmlRelation(rel_id, RelationKind.INSTANCE_OF, inst_id, classifier_ref))

    relations: list[UmlRelation] = []
    for cls in classes:
        for rel_id, general in class_gens.get(cls.id, ()):
            check_ref(general, f"generalization {rel_id!r}")
            if general not in class_ids or general == cls.id:
                warn("UNSUPPORTED_ELEMENT", f"generalization {rel_id!r} target unusable; skipped")
                continue
            relations.append(UmlRelation(rel_id, RelationKind.GENERALIZATION, cls.id, general))
    relations.extend(instance_of_rels)
    for assoc_id, label, ends in association_rows:
        for end in ends:
            check_ref(end, f"association {assoc_id!r} end")
        usable = [e for e in ends if e in class_ids]
        if len(usable) < 2 or usable[0] == usable[1]:
            warn("UNSUPPORTED_ELEMENT", f"association {assoc_id!r} lacks two distinct class ends; kept as comment")
            comments.append(UmlComment(f"Association:{label}"))
            continue
        relations.append(UmlRelation(assoc_id, RelationKind.ASSOCIATION, usable[0], usable[1], label=label))

    for child in model_el:
        if _local(child.tag) != "ownedComment":
            continue
        anchor = None
        anchor_el = next((c for c in child if _local(c.tag) == "annotatedElement"), None)
        if anchor_el is not None:
            anchor = _ref(anchor_el)
            if anchor is not None:
                check_ref(anchor, "comment anchor")
        comments.append(UmlComment(_body_text(child), anchor))

    element_ids = [c.id for c in classes] + [i.id for i in instances] + [r.id for r in relations]
    if len(set(element_ids)) != len(element_ids):
        dupes = sorted({i for i in element_ids if element_ids.count(i) > 1})
        raise XmiParseError(f"duplicate xmi:id values: {', '.join(dupes)}")

    known = set(element_ids)
    comments = [
        c if (c.anchor is None or c.anchor in known) else UmlComment(c.text, None) for c in comments
    ]

    model = UmlModel(
        name=model_el.attrib.get("name", ""),
        classes=tuple(classes),
        instances=tuple(instances),
        relations=tuple(relations),
        comments=tuple(comments),
    )
    diagnostics = validate_model(model)
    if diagnostics:
        raise XmiParseError(
            "imported model does not validate: " + "; ".join(f"{d.code}: {d.message}" for d in diagnostics)
        )
    return XmiImport(model, tuple(warnings))
