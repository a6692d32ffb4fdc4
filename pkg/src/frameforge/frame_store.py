"""Reader/writer for the frame XML storage dialect and its XSD schema.

Documents look like::

    <?xml version="1.0" standalone="yes"?>
    <NewDataSet>
      <Elements>
        <Id>1</Id>
        <Type>Var</Type>
        <Name>USER</Name>
        <Left>50</Left>
        <Top>70</Top>
        <Width>150</Width>
        <Height>80</Height>
        <Prev>0</Prev>
        <Next>0</Next>
      </Elements>
    </NewDataSet>

The writer always produces this exact canonical shape (two-space indent,
one field per line, fixed field order, LF endings, trailing newline), so
saving the same diagram twice yields byte-identical files.  The reader is
lenient: it accepts reordered fields, ignores unknown fields and foreign
tooling attributes, tolerates a UTF-8 BOM, and only insists on Id, Type
and Name plus all-or-nothing geometry.

``validate_against_schema`` reports conformance findings against the
storage schema without raising; ``parse_frame_xml`` raises
``FrameParseError`` on anything it cannot turn into a valid diagram.

Schema diagnostic codes: MALFORMED_XML, WRONG_ROOT, UNKNOWN_FIELD
(warning), BAD_FIELD_TYPE, BAD_FIELD_ORDER (warning when merely
reordered, error when a field repeats).  Parse errors may additionally
carry MISSING_FIELD, BAD_GEOMETRY and any ``validate_diagram`` code.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

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

__all__ = [
    "FrameParseError",
    "parse_frame_xml",
    "serialize_frame_xml",
    "validate_against_schema",
    "emit_schema",
    "element_to_json",
    "element_from_json",
    "diagram_to_json",
    "diagram_from_json",
]

XML_DECLARATION = '<?xml version="1.0" standalone="yes"?>'

#: Canonical field order inside an Elements record (also the schema order).
FIELD_ORDER = ("Id", "Type", "Name", "Left", "Top", "Width", "Height", "Prev", "Next", "Description")
_INT_FIELDS = frozenset({"Id", "Left", "Top", "Width", "Height", "Prev", "Next"})
_GEOMETRY_FIELDS = ("Left", "Top", "Width", "Height")

# xs:int is a 32-bit signed integer.
_XS_INT_MIN = -(2**31)
_XS_INT_MAX = 2**31 - 1


class FrameParseError(FrameForgeError):
    """A document could not be parsed into a valid diagram."""

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        column: int | None = None,
        diagnostics: tuple[Diagnostic, ...] | list[Diagnostic] = (),
    ):
        self.line = line
        self.column = column
        self.diagnostics = tuple(diagnostics)
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


def _escape_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\r", "&#13;")


def _parse_xs_int(raw: str) -> int:
    value = int(raw.strip())
    if not _XS_INT_MIN <= value <= _XS_INT_MAX:
        raise ValueError(f"{value} outside xs:int range")
    return value


def _read_root(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise FrameParseError(f"malformed XML: {exc.msg}", line=line, column=column) from exc


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_frame_xml(data: bytes) -> FrameDiagram:
    """Parse one frame document; the result always validates clean.

    Raises ``FrameParseError`` for malformed XML, a wrong root element,
    missing Id/Type/Name, unusable field values, partial geometry, or any
    semantic violation (duplicate ids, dangling links, ...) -- semantic
    findings ride along on ``.diagnostics``.
    """
    root = _read_root(data)
    if root.tag != "NewDataSet":
        raise FrameParseError(
            f"root element is {root.tag!r}, expected NewDataSet",
            diagnostics=[Diagnostic("WRONG_ROOT", f"root element is {root.tag!r}")],
        )

    elements: list[FrameElement] = []
    for position, record in enumerate(root):
        if record.tag != "Elements":
            continue  # foreign child; validate_against_schema reports it
        fields: dict[str, str] = {}
        for child in record:
            name = child.tag
            if name not in FIELD_ORDER:
                continue  # extension field, dropped (documented lossiness)
            if name in fields:
                raise FrameParseError(
                    f"Elements #{position}: field {name} appears more than once",
                    diagnostics=[Diagnostic("BAD_FIELD_ORDER", f"field {name} repeated")],
                )
            if len(child):
                raise FrameParseError(
                    f"Elements #{position}: field {name} has child elements",
                    diagnostics=[Diagnostic("BAD_FIELD_TYPE", f"field {name} is not a simple value")],
                )
            fields[name] = child.text or ""

        for required in ("Id", "Type", "Name"):
            if required not in fields:
                raise FrameParseError(
                    f"Elements #{position}: missing required field {required}",
                    diagnostics=[Diagnostic("MISSING_FIELD", f"Elements #{position} lacks {required}")],
                )

        ints: dict[str, int] = {}
        for name in fields:
            if name not in _INT_FIELDS:
                continue
            try:
                ints[name] = _parse_xs_int(fields[name])
            except ValueError:
                raise FrameParseError(
                    f"Elements #{position}: field {name} value {fields[name]!r} is not an xs:int",
                    diagnostics=[Diagnostic("BAD_FIELD_TYPE", f"{name}={fields[name]!r} is not an integer")],
                ) from None

        present = [f for f in _GEOMETRY_FIELDS if f in fields]
        if present and len(present) != len(_GEOMETRY_FIELDS):
            missing = [f for f in _GEOMETRY_FIELDS if f not in fields]
            raise FrameParseError(
                f"Elements #{position}: partial geometry, missing {', '.join(missing)}",
                diagnostics=[Diagnostic("BAD_GEOMETRY", f"Elements #{position} has partial geometry")],
            )
        bbox = (
            BoundingBox(ints["Left"], ints["Top"], ints["Width"], ints["Height"]) if present else None
        )

        elements.append(
            FrameElement(
                id=ints["Id"],
                kind=ElementKind.from_tag(fields["Type"]),
                name=fields["Name"],
                bbox=bbox,
                prev=ints.get("Prev", 0),
                next=ints.get("Next", 0),
                description=fields.get("Description"),
            )
        )

    diagram = FrameDiagram(tuple(elements))
    diagnostics = validate_diagram(diagram)
    if diagnostics:
        raise FrameParseError("document describes an invalid diagram", diagnostics=diagnostics)
    return diagram


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize_frame_xml(diagram: FrameDiagram) -> bytes:
    """Emit the canonical byte form; refuses diagrams that do not validate."""
    diagnostics = validate_diagram(diagram)
    if diagnostics:
        raise ValidationError(diagnostics, "cannot serialize an invalid diagram")

    lines = [XML_DECLARATION]
    if not diagram.elements:
        lines.append("<NewDataSet />")
    else:
        lines.append("<NewDataSet>")
        for el in diagram.elements:
            lines.append("  <Elements>")
            lines.append(f"    <Id>{el.id}</Id>")
            lines.append(f"    <Type>{_escape_text(el.kind.tag)}</Type>")
            lines.append(f"    <Name>{_escape_text(el.name)}</Name>")
            if el.bbox is not None:
                lines.append(f"    <Left>{el.bbox.left}</Left>")
                lines.append(f"    <Top>{el.bbox.top}</Top>")
                lines.append(f"    <Width>{el.bbox.width}</Width>")
                lines.append(f"    <Height>{el.bbox.height}</Height>")
            lines.append(f"    <Prev>{el.prev}</Prev>")
            lines.append(f"    <Next>{el.next}</Next>")
            if el.description is not None:
                lines.append(f"    <Description>{_escape_text(el.description)}</Description>")
            lines.append("  </Elements>")
        lines.append("</NewDataSet>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------


def validate_against_schema(data: bytes) -> list[Diagnostic]:
    """Check a document against the storage schema; violations are data.

    Unknown fields and merely reordered fields are warnings (the parser
    tolerates them); everything else is an error.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        return [Diagnostic("MALFORMED_XML", f"malformed XML: {exc.msg} (line {line}, column {column})")]

    if root.tag != "NewDataSet":
        return [Diagnostic("WRONG_ROOT", f"root element is {root.tag!r}, expected NewDataSet")]

    findings: list[Diagnostic] = []
    for position, record in enumerate(root):
        if record.tag != "Elements":
            findings.append(
                Diagnostic(
                    "UNKNOWN_FIELD",
                    f"unexpected element {record.tag!r} under NewDataSet",
                    severity="warning",
                )
            )
            continue

        element_id: int | None = None
        id_field = record.find("Id")
        if id_field is not None and id_field.text:
            try:
                element_id = _parse_xs_int(id_field.text)
            except ValueError:
                element_id = None

        last_index = -1
        seen: set[str] = set()
        for child in record:
            name = child.tag
            if name not in FIELD_ORDER:
                findings.append(
                    Diagnostic(
                        "UNKNOWN_FIELD",
                        f"Elements #{position}: unknown field {name!r}",
                        element_id=element_id,
                        severity="warning",
                    )
                )
                continue
            index = FIELD_ORDER.index(name)
            if name in seen:
                findings.append(
                    Diagnostic(
                        "BAD_FIELD_ORDER",
                        f"Elements #{position}: field {name} appears more than once",
                        element_id=element_id,
                    )
                )
            elif index < last_index:
                findings.append(
                    Diagnostic(
                        "BAD_FIELD_ORDER",
                        f"Elements #{position}: field {name} out of schema order",
                        element_id=element_id,
                        severity="warning",
                    )
                )
            seen.add(name)
            last_index = max(last_index, index)

            if len(child):
                findings.append(
                    Diagnostic(
                        "BAD_FIELD_TYPE",
                        f"Elements #{position}: field {name} is not a simple value",
                        element_id=element_id,
                    )
                )
            elif name in _INT_FIELDS:
                try:
                    _parse_xs_int(child.text or "")
                except ValueError:
                    findings.append(
                        Diagnostic(
                            "BAD_FIELD_TYPE",
                            f"Elements #{position}: {name}={child.text!r} is not an xs:int",
                            element_id=element_id,
                        )
                    )
    return findings


_SCHEMA = """<?xml version="1.0" encoding="utf-8"?>
<xs:schema id="NewDataSet" xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="NewDataSet">
    <xs:complexType>
      <xs:choice minOccurs="0" maxOccurs="unbounded">
        <xs:element name="Elements">
          <xs:complexType>
            <xs:sequence>
              <xs:element name="Id" type="xs:int" minOccurs="0" />
              <xs:element name="Type" type="xs:string" minOccurs="0" />
              <xs:element name="Name" type="xs:string" minOccurs="0" />
              <xs:element name="Left" type="xs:int" minOccurs="0" />
              <xs:element name="Top" type="xs:int" minOccurs="0" />
              <xs:element name="Width" type="xs:int" minOccurs="0" />
              <xs:element name="Height" type="xs:int" minOccurs="0" />
              <xs:element name="Prev" type="xs:int" minOccurs="0" />
              <xs:element name="Next" type="xs:int" minOccurs="0" />
              <xs:element name="Description" type="xs:string" minOccurs="0" />
            </xs:sequence>
          </xs:complexType>
        </xs:element>
      </xs:choice>
    </xs:complexType>
  </xs:element>
</xs:schema>
"""


def emit_schema() -> bytes:
    """Standalone XSD for the storage format (stable bytes)."""
    return _SCHEMA.encode("utf-8")


# ---------------------------------------------------------------------------
# JSON mirror (service wire format and editor working copy)
# ---------------------------------------------------------------------------


def element_to_json(element: FrameElement) -> dict:
    return {
        "id": element.id,
        "kind": element.kind.tag,
        "name": element.name,
        "bbox": element.bbox.as_list() if element.bbox else None,
        "prev": element.prev,
        "next": element.next,
        "description": element.description,
    }


def element_from_json(payload: dict) -> FrameElement:
    try:
        bbox_raw = payload.get("bbox")
        bbox = None
        if bbox_raw is not None:
            left, top, width, height = (int(v) for v in bbox_raw)
            bbox = BoundingBox(left, top, width, height)
        return FrameElement(
            id=int(payload["id"]),
            kind=ElementKind.from_tag(str(payload["kind"])),
            name=str(payload["name"]),
            bbox=bbox,
            prev=int(payload.get("prev", 0)),
            next=int(payload.get("next", 0)),
            description=None if payload.get("description") is None else str(payload["description"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameParseError(f"bad element object: {exc}") from exc


def diagram_to_json(diagram: FrameDiagram) -> list[dict]:
    return [element_to_json(el) for el in diagram.elements]


def diagram_from_json(payload: list) -> FrameDiagram:
    """Build and validate a diagram from its JSON mirror."""
    if not isinstance(payload, list):
        raise FrameParseError("expected a JSON array of element objects")
    diagram = FrameDiagram(tuple(element_from_json(item) for item in payload))
    diagnostics = validate_diagram(diagram)
    if diagnostics:
        raise FrameParseError("payload describes an invalid diagram", diagnostics=diagnostics)
    return diagram
