import concurrent.futures
import json

import pytest
from fastapi.testclient import TestClient

from frameforge.frame_store import diagram_to_json, parse_frame_xml, serialize_frame_xml
from frameforge.service import DocumentStore, create_app
from frameforge.translate import frame_to_uml, trace_to_json
from frameforge.uml_emit import to_plantuml, to_xmi


@pytest.fixture()
def data_dir(tmp_path):
    return tmp_path / "docs"


@pytest.fixture()
def client(data_dir):
    with TestClient(create_app(data_dir)) as c:
        yield c


def put_fig1(client, fig1_bytes, doc_id="fig1"):
    return client.put(
        f"/api/documents/{doc_id}", content=fig1_bytes, headers={"content-type": "application/xml"}
    )


class TestHealthAndListing:
    def test_health(self, client):
        body = client.get("/api/health").json()
        assert body["status"] == "ok"

    def test_listing(self, client, fig1_bytes):
        assert client.get("/api/documents").json() == {"documents": []}
        put_fig1(client, fig1_bytes)
        docs = client.get("/api/documents").json()["documents"]
        assert docs == [{"doc_id": "fig1", "name": "fig1", "revision": 1, "element_count": 3}]


class TestPut:
    def test_create_returns_201_revision_1(self, client, fig1_bytes):
        response = put_fig1(client, fig1_bytes)
        assert response.status_code == 201
        assert response.json()["revision"] == 1

    def test_conditional_replace(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        response = client.put(
            "/api/documents/fig1?expected_revision=1",
            content=fig1_bytes,
            headers={"content-type": "application/xml"},
        )
        assert response.status_code == 200
        assert response.json()["revision"] == 2

    def test_stale_expected_revision_conflicts(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        put_fig1(client, fig1_bytes)  # revision 2
        response = client.put(
            "/api/documents/fig1?expected_revision=1",
            content=fig1_bytes,
            headers={"content-type": "application/xml"},
        )
        assert response.status_code == 409
        assert response.json() == {"error": "REVISION_CONFLICT", "diagnostics": []}

    def test_invalid_document_rejected(self, client):
        response = client.put(
            "/api/documents/x",
            content=b"<NewDataSet><Elements><Id>1</Id></Elements></NewDataSet>",
            headers={"content-type": "application/xml"},
        )
        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "PARSE_ERROR"
        assert body["diagnostics"][0]["code"] == "MISSING_FIELD"

    def test_json_body(self, client, fig1_bytes):
        elements = diagram_to_json(parse_frame_xml(fig1_bytes))
        response = client.put(
            "/api/documents/j1",
            json={"name": "my diagram", "elements": elements},
        )
        assert response.status_code == 201
        assert response.json()["name"] == "my diagram"

    def test_bare_json_array_body(self, client, fig1_bytes):
        elements = diagram_to_json(parse_frame_xml(fig1_bytes))
        assert client.put("/api/documents/j2", json=elements).status_code == 201

    def test_body_too_large(self, data_dir, fig1_bytes):
        with TestClient(create_app(data_dir, max_body_kb=1)) as small:
            response = put_fig1(small, fig1_bytes + b" " * 2048)
            assert response.status_code == 413
            assert response.json()["error"] == "BODY_TOO_LARGE"

    def test_bad_doc_id(self, client, fig1_bytes):
        response = client.put("/api/documents/bad%20id%21", content=fig1_bytes)
        assert response.status_code == 400
        assert response.json()["error"] == "BAD_DOC_ID"
        # traversal-shaped ids never even match the route
        assert client.put("/api/documents/..%2fescape", content=fig1_bytes).status_code == 404

    def test_revisions_never_skip(self, client, fig1_bytes):
        for expected in (1, 2, 3):
            response = put_fig1(client, fig1_bytes)
            assert response.json()["revision"] == expected


class TestGet:
    def test_xml_round_trip(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        response = client.get("/api/documents/fig1?format=xml")
        assert response.content == fig1_bytes
        assert response.headers["x-revision"] == "1"

    def test_json_mirror(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        response = client.get("/api/documents/fig1?format=json")
        payload = response.json()
        assert isinstance(payload, list) and len(payload) == 3
        assert set(payload[0]) == {"id", "kind", "name", "bbox", "prev", "next", "description"}
        assert response.headers["x-revision"] == "1"

    def test_unknown_document(self, client):
        assert client.get("/api/documents/none").status_code == 404

    def test_bad_format(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        assert client.get("/api/documents/fig1?format=yaml").status_code == 400


class TestTranslate:
    def test_artifacts(self, client, fig1_bytes, fig1_diagram):
        put_fig1(client, fig1_bytes)
        body = client.post("/api/documents/fig1/translate").json()
        expected = frame_to_uml(fig1_diagram, strict=False, name="fig1")
        assert body["plantuml"] == to_plantuml(expected.model)
        assert 'class "USER" as C1' in body["plantuml"]
        assert body["xmi"] == to_xmi(expected.model).decode()
        assert body["trace"] == trace_to_json(expected.trace)
        assert body["warnings"] == []

    def test_empty_document(self, client):
        client.put("/api/documents/empty", json=[])
        body = client.post("/api/documents/empty/translate").json()
        assert body["plantuml"] == "@startuml\n@enduml\n"
        assert body["warnings"] == []

    def test_ambiguous_classifier_is_422(self, client):
        elements = [
            {"id": 1, "kind": "Var", "name": "A", "bbox": None, "prev": 0, "next": 0, "description": None},
            {"id": 2, "kind": "Var", "name": "B", "bbox": None, "prev": 0, "next": 0, "description": None},
            {"id": 3, "kind": "Concept", "name": "x", "bbox": None, "prev": 0, "next": 0, "description": None},
            {"id": 4, "kind": "i", "name": "i role", "bbox": None, "prev": 3, "next": 1, "description": None},
            {"id": 5, "kind": "i", "name": "i role", "bbox": None, "prev": 3, "next": 2, "description": None},
        ]
        client.put("/api/documents/amb", json=elements)
        response = client.post("/api/documents/amb/translate")
        assert response.status_code == 422
        body = response.json()
        assert body["error"] == "TRANSLATION_ERROR"
        assert body["diagnostics"][0]["code"] == "AMBIGUOUS_CLASSIFIER"

    def test_unknown_document(self, client):
        assert client.post("/api/documents/none/translate").status_code == 404


class TestReverse:
    def test_with_trace_reproduces_fixture(self, client, fig1_bytes, fig1_diagram):
        result = frame_to_uml(fig1_diagram, name="fig1")
        response = client.post(
            "/api/reverse",
            json={"xmi": to_xmi(result.model).decode(), "trace": trace_to_json(result.trace)},
        )
        assert response.status_code == 200
        assert response.content == fig1_bytes

    def test_without_trace_is_isomorphic_and_laid_out(self, client, fig1_diagram):
        result = frame_to_uml(fig1_diagram, name="fig1")
        response = client.post(
            "/api/reverse",
            content=to_xmi(result.model),
            headers={"content-type": "application/xml"},
        )
        assert response.status_code == 200
        diagram = parse_frame_xml(response.content)
        assert sorted(el.kind.tag for el in diagram) == ["Concept", "Var", "i"]
        assert all(el.bbox is not None for el in diagram)

    def test_garbage_body(self, client):
        response = client.post(
            "/api/reverse", content=b"not xmi", headers={"content-type": "application/xml"}
        )
        assert response.status_code == 400

    def test_stale_trace_conflicts(self, client, fig1_diagram):
        result = frame_to_uml(fig1_diagram)
        trace = trace_to_json(result.trace)
        trace["pairs"].append({"frame_id": 99, "uml_id": "C99", "bbox": None})
        response = client.post(
            "/api/reverse", json={"xmi": to_xmi(result.model).decode(), "trace": trace}
        )
        assert response.status_code == 409
        assert response.json()["error"] == "STALE_TRACE"


class TestRender:
    def test_svg(self, client, fig1_bytes):
        put_fig1(client, fig1_bytes)
        response = client.post("/api/documents/fig1/render")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("image/svg+xml")
        assert ">USER</text>" in response.text

    def test_layout_applied_when_geometry_absent(self, client):
        client.put(
            "/api/documents/plain",
            json=[{"id": 1, "kind": "Var", "name": "A", "bbox": None, "prev": 0, "next": 0, "description": None}],
        )
        response = client.post("/api/documents/plain/render")
        assert response.status_code == 200
        assert 'x="50"' in response.text


class TestPersistence:
    def test_store_survives_restart(self, data_dir, fig1_bytes):
        with TestClient(create_app(data_dir)) as first:
            put_fig1(first, fig1_bytes)
            put_fig1(first, fig1_bytes)  # revision 2
        with TestClient(create_app(data_dir)) as second:
            response = second.get("/api/documents/fig1")
            assert response.content == fig1_bytes
            assert response.headers["x-revision"] == "2"

    def test_documents_stored_as_canonical_files(self, data_dir, fig1_bytes):
        store = DocumentStore(data_dir)
        store.put("fig1", parse_frame_xml(fig1_bytes))
        assert (data_dir / "fig1.frame.xml").read_bytes() == fig1_bytes
        index = json.loads((data_dir / "index.json").read_text())
        assert index["documents"]["fig1"]["revision"] == 1


class TestConcurrency:
    def test_exactly_one_conditional_writer_wins(self, data_dir, fig1_bytes):
        store = DocumentStore(data_dir)
        diagram = parse_frame_xml(fig1_bytes)
        store.put("doc", diagram)

        def write(_):
            from frameforge.service import RevisionConflict

            try:
                store.put("doc", diagram, expected_revision=1)
                return "win"
            except RevisionConflict:
                return "conflict"

        with concurrent.futures.ThreadPoolExecutor(max_workers=2) as pool:
            outcomes = sorted(pool.map(write, range(2)))
        assert outcomes == ["conflict", "win"]
        assert store.get("doc").revision == 2
