import pytest

from frameforge.frame_model import VAR, BoundingBox, FrameDiagram, FrameElement
from frameforge.layout import auto_layout
from frameforge.uml_emit import MissingGeometryError, render_frame_svg


class TestRender:
    def test_fig1_content(self, fig1_diagram):
        svg = render_frame_svg(fig1_diagram)
        assert ">USER</text>" in svg
        assert ">sergey.zykov</text>" in svg
        assert svg.count("<line ") == 1
        assert svg.count("<rect ") == 2

    def test_concept_is_rounded(self, fig1_diagram):
        svg = render_frame_svg(fig1_diagram)
        rects = [line for line in svg.splitlines() if "<rect" in line]
        assert sum("rx=" in r for r in rects) == 1

    def test_empty_diagram_margin_only_canvas(self):
        svg = render_frame_svg(FrameDiagram())
        assert 'width="40" height="40"' in svg
        assert 'viewBox="0 0 40 40"' in svg
        assert "<rect" not in svg and "<line" not in svg

    def test_deterministic(self, fig1_diagram):
        assert render_frame_svg(fig1_diagram) == render_frame_svg(fig1_diagram)

    def test_missing_geometry_names_element(self):
        d = FrameDiagram((FrameElement(7, VAR, "A"),))
        with pytest.raises(MissingGeometryError) as err:
            render_frame_svg(d)
        assert err.value.element_id == 7

    def test_canvas_covers_union_plus_margin(self):
        d = FrameDiagram(
            (
                FrameElement(1, VAR, "A", bbox=BoundingBox(0, 0, 100, 50)),
                FrameElement(2, VAR, "B", bbox=BoundingBox(300, 200, 100, 50)),
            )
        )
        svg = render_frame_svg(d)
        assert 'viewBox="-20 -20 440 290"' in svg

    def test_escaping(self):
        d = auto_layout(FrameDiagram((FrameElement(1, VAR, "a<b>&c"),)))
        svg = render_frame_svg(d)
        assert ">a&lt;b&gt;&amp;c</text>" in svg

    def test_arrowhead_marker_present(self, fig1_diagram):
        svg = render_frame_svg(fig1_diagram)
        assert 'marker-end="url(#arrow)"' in svg
        assert '<marker id="arrow"' in svg
