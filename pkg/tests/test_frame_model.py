import pytest
from hypothesis import given
from hypothesis import strategies as st

from frameforge.frame_model import (
    CONCEPT,
    ROLE_A,
    ROLE_G,
    ROLE_I,
    VAR,
    BoundingBox,
    ElementKind,
    FrameDiagram,
    FrameElement,
    NotFoundError,
    ValidationError,
    WrongKindError,
    add_element,
    arc_endpoints,
    remove_element,
    validate_diagram,
)
from strategies import frame_diagrams


def codes(diagnostics):
    return [d.code for d in diagnostics]


class TestElementKind:
    def test_known_tags(self):
        assert VAR.is_var and VAR.is_node_kind and not VAR.is_role
        assert CONCEPT.is_concept and CONCEPT.is_node_kind
        for kind in (ROLE_I, ROLE_G, ROLE_A):
            assert kind.is_role and not kind.is_node_kind and not kind.is_unknown

    def test_unknown_tag_preserved_verbatim(self):
        kind = ElementKind.from_tag("metaLink")
        assert kind.is_unknown
        assert kind.tag == "metaLink"

    def test_from_tag_interns_known_kinds(self):
        assert ElementKind.from_tag("Var") is VAR
        assert ElementKind.from_tag("i") is ROLE_I

    def test_unknown_element_node_or_arc_by_links(self):
        node = FrameElement(1, ElementKind.from_tag("x"), "n")
        arc = FrameElement(2, ElementKind.from_tag("x"), "n", prev=3, next=4)
        assert node.is_node and not node.is_arc
        assert arc.is_arc and not arc.is_node


class TestValidateDiagram:
    def test_fig1_fixture_is_clean(self, fig1_diagram):
        assert validate_diagram(fig1_diagram) == []

    def test_empty_diagram_is_clean(self):
        assert validate_diagram(FrameDiagram()) == []

    def test_duplicate_id(self):
        d = FrameDiagram((FrameElement(1, VAR, "A"), FrameElement(1, VAR, "B")))
        diags = validate_diagram(d)
        assert codes(diags) == ["DUP_ID"]
        assert diags[0].element_id == 1

    def test_node_with_links(self):
        d = FrameDiagram((FrameElement(1, VAR, "A", prev=2),))
        assert codes(validate_diagram(d)) == ["NODE_HAS_LINKS"]

    def test_arc_with_dangling_refs(self):
        d = FrameDiagram((FrameElement(1, VAR, "A"), FrameElement(2, ROLE_G, "g role", prev=9, next=1)))
        assert codes(validate_diagram(d)) == ["DANGLING_REF"]

    def test_arc_missing_endpoint(self):
        d = FrameDiagram((FrameElement(1, VAR, "A"), FrameElement(2, ROLE_I, "i role", prev=1, next=0)))
        assert "ARC_MISSING_ENDPOINT" in codes(validate_diagram(d))

    def test_arc_self_loop(self):
        d = FrameDiagram((FrameElement(1, VAR, "A"), FrameElement(2, ROLE_A, "x", prev=1, next=1)))
        assert "ARC_SELF_LOOP" in codes(validate_diagram(d))

    def test_arc_endpoint_is_arc(self):
        d = FrameDiagram(
            (
                FrameElement(1, VAR, "A"),
                FrameElement(2, VAR, "B"),
                FrameElement(3, ROLE_G, "g role", prev=2, next=1),
                FrameElement(4, ROLE_A, "x", prev=3, next=1),
            )
        )
        assert codes(validate_diagram(d)) == ["ARC_ENDPOINT_NOT_NODE"]

    def test_bad_geometry(self):
        d = FrameDiagram((FrameElement(1, VAR, "A", bbox=BoundingBox(0, 0, 0, 10)),))
        assert codes(validate_diagram(d)) == ["BAD_GEOMETRY"]

    def test_negative_position_is_fine(self):
        d = FrameDiagram((FrameElement(1, VAR, "A", bbox=BoundingBox(-10, -20, 5, 5)),))
        assert validate_diagram(d) == []

    def test_bad_id_and_empty_name(self):
        d = FrameDiagram((FrameElement(0, VAR, ""),))
        assert codes(validate_diagram(d)) == ["BAD_ID", "EMPTY_NAME"]

    def test_non_xml_name(self):
        d = FrameDiagram((FrameElement(1, VAR, "a\x01b"),))
        assert codes(validate_diagram(d)) == ["BAD_NAME"]

    def test_order_is_document_order_then_code(self):
        d = FrameDiagram(
            (
                FrameElement(1, VAR, "", prev=5),  # EMPTY_NAME + NODE_HAS_LINKS
                FrameElement(2, ROLE_I, "i role", prev=9, next=0),  # missing + dangling
            )
        )
        diags = validate_diagram(d)
        assert codes(diags) == ["EMPTY_NAME", "NODE_HAS_LINKS", "ARC_MISSING_ENDPOINT", "DANGLING_REF"]

    def test_pure_and_deterministic(self, fig1_diagram):
        assert validate_diagram(fig1_diagram) == validate_diagram(fig1_diagram)

    @given(frame_diagrams(allow_unknown=True))
    def test_generated_diagrams_are_clean(self, diagram):
        assert validate_diagram(diagram) == []


class TestAddElement:
    def test_first_id_is_one(self):
        grown, new_id = add_element(FrameDiagram(), VAR, "USER")
        assert new_id == 1
        assert [el.id for el in grown] == [1]

    def test_id_is_max_plus_one(self, fig1_diagram):
        grown, new_id = add_element(fig1_diagram, CONCEPT, "sergey.zykov")
        assert new_id == 5  # existing ids 1, 2, 4
        assert len(grown) == 4

    def test_original_diagram_untouched(self, fig1_diagram):
        before = fig1_diagram.elements
        add_element(fig1_diagram, VAR, "X")
        assert fig1_diagram.elements == before

    def test_dangling_link_rejected(self, fig1_diagram):
        with pytest.raises(ValidationError) as err:
            add_element(fig1_diagram, ROLE_I, "i role", prev=99, next=1)
        assert "DANGLING_REF" in codes(err.value.diagnostics)

    def test_node_with_links_rejected(self):
        d, _ = add_element(FrameDiagram(), VAR, "A")
        with pytest.raises(ValidationError):
            add_element(d, VAR, "B", prev=1, next=0)

    def test_id_assignment_deterministic(self):
        def run():
            d = FrameDiagram()
            out = []
            for name in ("A", "B", "C"):
                d, new_id = add_element(d, VAR, name)
                out.append(new_id)
            return out

        assert run() == run() == [1, 2, 3]

    @given(frame_diagrams())
    def test_add_then_remove_is_identity(self, diagram):
        grown, new_id = add_element(diagram, VAR, "fresh")
        assert remove_element(grown, new_id) == diagram


class TestRemoveElement:
    def test_cascade_removes_incident_arcs(self, fig1_diagram):
        result = remove_element(fig1_diagram, 1)
        assert result.ids() == [2]  # arc 4 cascaded away with the USER node
        assert validate_diagram(result) == []

    def test_removing_arc_keeps_nodes(self, fig1_diagram):
        result = remove_element(fig1_diagram, 4)
        assert result.ids() == [1, 2]

    def test_unknown_id(self, fig1_diagram):
        with pytest.raises(NotFoundError):
            remove_element(fig1_diagram, 3)


class TestArcEndpoints:
    def test_fig1_instantiation_arc(self, fig1_diagram):
        assert arc_endpoints(fig1_diagram, 4) == (2, 1)

    def test_on_node(self, fig1_diagram):
        with pytest.raises(WrongKindError):
            arc_endpoints(fig1_diagram, 1)

    def test_absent(self, fig1_diagram):
        with pytest.raises(NotFoundError):
            arc_endpoints(fig1_diagram, 3)

    def test_read_back_of_self_built_arc(self):
        d = FrameDiagram(
            (
                FrameElement(10, VAR, "A"),
                FrameElement(11, VAR, "B"),
                FrameElement(12, ROLE_G, "g role", prev=10, next=11),
            )
        )
        assert arc_endpoints(d, 12) == (10, 11)


@given(frame_diagrams(), st.integers(0, 10_000))
def test_valid_diagrams_satisfy_arc_invariants(diagram, _seed):
    by_id = {el.id: el for el in diagram}
    assert len(by_id) == len(diagram)
    for el in diagram:
        if el.is_arc:
            assert el.prev in by_id and el.next in by_id
            assert by_id[el.prev].is_node and by_id[el.next].is_node
            assert el.prev != el.next
        else:
            assert el.prev == 0 and el.next == 0
