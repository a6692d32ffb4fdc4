"""frameforge: frame-diagram modelling with bidirectional UML interchange.

The pipeline runs from frame diagrams (semantic-network slot/value nodes
joined by role arcs, persisted as a small XML dialect) through a
provenance-traced translation into UML class models, emitted as XMI and
PlantUML, and back again without loss.
"""

__version__ = "0.1.0"

from .frame_model import (
    CONCEPT,
    NULL_ID,
    ROLE_A,
    ROLE_G,
    ROLE_I,
    VAR,
    BoundingBox,
    Diagnostic,
    ElementKind,
    FrameDiagram,
    FrameElement,
    FrameForgeError,
    NotFoundError,
    ValidationError,
    WrongKindError,
    add_element,
    arc_endpoints,
    remove_element,
    validate_diagram,
)
from .frame_store import (
    FrameParseError,
    emit_schema,
    parse_frame_xml,
    serialize_frame_xml,
    validate_against_schema,
)
from .layout import CyclicHierarchyError, LayoutParams, auto_layout
from .translate import (
    ReverseResult,
    StaleTraceError,
    TraceMap,
    TracePair,
    TranslationError,
    TranslationResult,
    check_round_trip,
    frame_to_uml,
    trace_from_json,
    trace_to_json,
    uml_to_frame,
)
from .uml_emit import (
    MissingGeometryError,
    StaleRefError,
    XmiImport,
    XmiParseError,
    from_xmi,
    render_frame_svg,
    to_plantuml,
    to_xmi,
)
from .uml_model import (
    STANDARD_ATTRIBUTES,
    RelationKind,
    UmlClass,
    UmlComment,
    UmlInstance,
    UmlModel,
    UmlRelation,
    find_by_name,
    validate_model,
)

__all__ = [
    "__version__",
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
    "FrameParseError",
    "parse_frame_xml",
    "serialize_frame_xml",
    "validate_against_schema",
    "emit_schema",
    "RelationKind",
    "UmlClass",
    "UmlInstance",
    "UmlRelation",
    "UmlComment",
    "UmlModel",
    "STANDARD_ATTRIBUTES",
    "validate_model",
    "find_by_name",
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
    "LayoutParams",
    "CyclicHierarchyError",
    "auto_layout",
    "to_plantuml",
    "to_xmi",
    "from_xmi",
    "XmiImport",
    "XmiParseError",
    "StaleRefError",
    "render_frame_svg",
    "MissingGeometryError",
]
