"""UML model emission and re-import: PlantUML text, XMI documents, frame SVG."""

from .plantuml import to_plantuml
from .svg import MissingGeometryError, render_frame_svg
from .xmi import StaleRefError, XmiImport, XmiParseError, from_xmi, to_xmi

__all__ = [
    "to_plantuml",
    "to_xmi",
    "from_xmi",
    "XmiImport",
    "XmiParseError",
    "StaleRefError",
    "render_frame_svg",
    "MissingGeometryError",
]
