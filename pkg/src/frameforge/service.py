"""Local HTTP facade: a file-backed document store plus translation endpoints.

Routes (all JSON responses UTF-8; error bodies are
``{"error": code, "diagnostics": [...]}``):

* ``GET  /api/health``
* ``GET  /api/documents``                      -- listing with revisions
* ``PUT  /api/documents/{id}?expected_revision=N``
* ``GET  /api/documents/{id}?format=xml|json`` -- revision in ``X-Revision``
* ``POST /api/documents/{id}/translate``
* ``POST /api/documents/{id}/render``          -- SVG, laying out if needed
* ``POST /api/reverse``                        -- XMI (+ optional trace) to frame XML

Documents persist as canonical ``.frame.xml`` files in the data
directory, one per document id, written atomically; revisions live in a
``index.json`` sidecar and increase by exactly one per accepted write.
Optimistic concurrency: a PUT carrying ``expected_revision`` is rejected
with 409 unless it matches the current revision.  The store is a single
process with an in-memory index rebuilt from disk at startup.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response

from . import __version__
from .frame_model import FrameDiagram, ValidationError
from .frame_store import (
    FrameParseError,
    diagram_from_json,
    diagram_to_json,
    parse_frame_xml,
    serialize_frame_xml,
)
from .layout import CyclicHierarchyError, auto_layout
from .translate import (
    StaleTraceError,
    TranslationError,
    frame_to_uml,
    trace_from_json,
    trace_to_json,
    uml_to_frame,
)
from .uml_emit import XmiParseError, StaleRefError, from_xmi, render_frame_svg, to_plantuml, to_xmi

__all__ = ["DocumentStore", "StoredDocument", "RevisionConflict", "create_app"]

logger = logging.getLogger(__name__)

_DOC_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,63}$")
DOCUMENT_SUFFIX = ".frame.xml"
INDEX_FILE = "index.json"


class RevisionConflict(Exception):
    def __init__(self, doc_id: str, current: int | None):
        self.doc_id = doc_id
        self.current = current
        super().__init__(f"document {doc_id!r} is at revision {current}")


@dataclass(frozen=True)
class StoredDocument:
    doc_id: str
    revision: int
    diagram: FrameDiagram
    name: str

    def summary(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "name": self.name,
            "revision": self.revision,
            "element_count": len(self.diagram),
        }


class DocumentStore:
    """Disk-backed store; all writes serialized under one lock."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._docs: dict[str, StoredDocument] = {}
        self._load()

    def _doc_path(self, doc_id: str) -> Path:
        return self.data_dir / f"{doc_id}{DOCUMENT_SUFFIX}"

    def _load(self) -> None:
        index: dict = {}
        index_path = self.data_dir / INDEX_FILE
        if index_path.exists():
            try:
                index = json.loads(index_path.read_text(encoding="utf-8")).get("documents", {})
            except (ValueError, OSError) as exc:
                logger.warning("unreadable %s: %s; revisions reset to 1", INDEX_FILE, exc)
        for path in sorted(self.data_dir.glob(f"*{DOCUMENT_SUFFIX}")):
            doc_id = path.name[: -len(DOCUMENT_SUFFIX)]
            try:
                diagram = parse_frame_xml(path.read_bytes())
            except (FrameParseError, OSError) as exc:
                logger.warning("skipping %s: %s", path.name, exc)
                continue
            meta = index.get(doc_id, {})
            self._docs[doc_id] = StoredDocument(
                doc_id,
                int(meta.get("revision", 1)),
                diagram,
                str(meta.get("name", doc_id)),
            )

    def _write_atomic(self, path: Path, data: bytes) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def _flush_index(self) -> None:
        payload = {
            "documents": {
                doc_id: {"revision": doc.revision, "name": doc.name}
                for doc_id, doc in sorted(self._docs.items())
            }
        }
        self._write_atomic(
            self.data_dir / INDEX_FILE, (json.dumps(payload, indent=2) + "\n").encode("utf-8")
        )

    def list(self) -> list[StoredDocument]:
        with self._lock:
            return [self._docs[k] for k in sorted(self._docs)]

    def get(self, doc_id: str) -> StoredDocument | None:
        with self._lock:
            return self._docs.get(doc_id)

    def put(
        self,
        doc_id: str,
        diagram: FrameDiagram,
        *,
        name: str | None = None,
        expected_revision: int | None = None,
    ) -> tuple[StoredDocument, bool]:
        """Create or replace; returns (document, created)."""
        with self._lock:
            current = self._docs.get(doc_id)
            if expected_revision is not None and (current is None or current.revision != expected_revision):
                raise RevisionConflict(doc_id, current.revision if current else None)
            revision = 1 if current is None else current.revision + 1
            doc_name = name if name is not None else (current.name if current else doc_id)
            document = StoredDocument(doc_id, revision, diagram, doc_name)
            self._write_atomic(self._doc_path(doc_id), serialize_frame_xml(diagram))
            self._docs[doc_id] = document
            self._flush_index()
            return document, current is None


def _error(status: int, code: str, diagnostics=()) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": code, "diagnostics": [d.to_json() for d in diagnostics]},
    )


def create_app(
    data_dir: str | Path,
    *,
    max_body_kb: int = 1024,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    store = DocumentStore(data_dir)
    max_body = max_body_kb * 1024
    app = FastAPI(title="frameforge", version=__version__)
    app.state.store = store

    @app.get("/api/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/api/documents")
    async def list_documents() -> dict:
        return {"documents": [doc.summary() for doc in store.list()]}

    @app.put("/api/documents/{doc_id}")
    async def put_document(
        doc_id: str, request: Request, expected_revision: int | None = Query(default=None)
    ):
        if not _DOC_ID.match(doc_id):
            return _error(400, "BAD_DOC_ID")
        body = await request.body()
        if len(body) > max_body:
            return _error(413, "BODY_TOO_LARGE")
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        name: str | None = None
        try:
            if content_type == "application/json" or (
                content_type == "" and body.lstrip()[:1] not in (b"<", b"")
            ):
                payload = json.loads(body)
                if isinstance(payload, dict):
                    raw_name = payload.get("name")
                    name = str(raw_name) if raw_name is not None else None
                    elements = payload.get("elements", [])
                else:
                    elements = payload
                diagram = diagram_from_json(elements)
            else:
                diagram = parse_frame_xml(body)
        except FrameParseError as exc:
            return _error(400, "PARSE_ERROR", exc.diagnostics)
        except ValueError:
            return _error(400, "PARSE_ERROR")
        try:
            document, created = store.put(
                doc_id, diagram, name=name, expected_revision=expected_revision
            )
        except RevisionConflict:
            return _error(409, "REVISION_CONFLICT")
        return JSONResponse(status_code=201 if created else 200, content=document.summary())

    @app.get("/api/documents/{doc_id}")
    async def get_document(doc_id: str, format: str = Query(default="xml")):
        document = store.get(doc_id)
        if document is None:
            return _error(404, "NOT_FOUND")
        headers = {"X-Revision": str(document.revision)}
        if format == "xml":
            return Response(
                content=serialize_frame_xml(document.diagram),
                media_type="application/xml",
                headers=headers,
            )
        if format == "json":
            return JSONResponse(content=diagram_to_json(document.diagram), headers=headers)
        return _error(400, "BAD_FORMAT")

    @app.post("/api/documents/{doc_id}/translate")
    async def translate_document(doc_id: str):
        document = store.get(doc_id)
        if document is None:
            return _error(404, "NOT_FOUND")
        try:
            result = frame_to_uml(document.diagram, strict=False, name=document.name)
        except TranslationError as exc:
            return _error(422, "TRANSLATION_ERROR", exc.diagnostics)
        return {
            "plantuml": to_plantuml(result.model),
            "xmi": to_xmi(result.model).decode("utf-8"),
            "trace": trace_to_json(result.trace),
            "warnings": [d.to_json() for d in result.warnings],
        }

    @app.post("/api/documents/{doc_id}/render")
    async def render_document(doc_id: str):
        document = store.get(doc_id)
        if document is None:
            return _error(404, "NOT_FOUND")
        diagram = document.diagram
        try:
            if any(el.bbox is None for el in diagram.elements):
                diagram = auto_layout(diagram)
            return Response(content=render_frame_svg(diagram), media_type="image/svg+xml")
        except CyclicHierarchyError:
            return _error(422, "CYCLIC_HIERARCHY")

    @app.post("/api/reverse")
    async def reverse(request: Request):
        body = await request.body()
        if len(body) > max_body:
            return _error(413, "BODY_TOO_LARGE")
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        trace = None
        xmi_bytes = body
        if content_type == "application/json":
            try:
                payload = json.loads(body)
                xmi_bytes = str(payload["xmi"]).encode("utf-8")
                if payload.get("trace") is not None:
                    trace = trace_from_json(payload["trace"])
            except (ValueError, KeyError, TypeError):
                return _error(400, "BAD_REQUEST")
        try:
            imported = from_xmi(xmi_bytes)
            result = uml_to_frame(imported.model, trace)
        except (XmiParseError, StaleRefError):
            return _error(400, "PARSE_ERROR")
        except StaleTraceError:
            return _error(409, "STALE_TRACE")
        except ValidationError as exc:
            return _error(400, "VALIDATION_ERROR", exc.diagnostics)
        diagram = result.diagram
        try:
            if any(el.bbox is None for el in diagram.elements):
                diagram = auto_layout(diagram)
        except CyclicHierarchyError:
            return _error(422, "CYCLIC_HIERARCHY")
        return Response(content=serialize_frame_xml(diagram), media_type="application/xml")

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
