from app.core.drawing import NAMED_STYLES, circle_positions, style_for_page, to_dot, to_svg
from app.core.fixtures import C3C3_COLOR_NAMES


def test_svg_has_one_group_per_page_and_one_line_per_edge(c3c3):
    svg = to_svg(c3c3, C3C3_COLOR_NAMES)
    assert svg.count('<g class="page page-') == 5
    assert svg.count("<line ") == 18
    assert svg.count('class="vertex"') == 9
    assert 'stroke="green" stroke-width="3" stroke-dasharray="8 4"' in svg


def test_svg_is_deterministic(c3c3):
    assert to_svg(c3c3, C3C3_COLOR_NAMES) == to_svg(c3c3, C3C3_COLOR_NAMES)


def test_first_position_sits_at_angle_zero(c3c3):
    coords = circle_positions(c3c3, 3.0)
    assert coords[1] == (3.0, 0.0)
    svg = to_svg(c3c3, size=400)
    assert '<circle class="vertex" cx="370.00" cy="200.00"' in svg


def test_dot_pins_positions_counter_clockwise(c3c3):
    dot = to_dot(c3c3, C3C3_COLOR_NAMES)
    assert dot.startswith("graph G {\n")
    assert '    1 [pos="3.000,0.000!"];' in dot
    # vertex 6 is third after vertex 1, a third of the way round
    assert '    6 [pos="-1.500,2.598!"];' in dot
    assert dot.count('comment="page 4"') == 2
    assert dot.count(" -- ") == 18


def test_page_styles():
    assert style_for_page(1) == NAMED_STYLES["red"]
    assert style_for_page(1, {1: "purple"}) == NAMED_STYLES["purple"]
    assert style_for_page(2, {2: "navy"}).color == "navy"
    extra = style_for_page(7)
    assert extra.color == "teal"
    assert extra.dash == "1 3"
    assert "style=dashed" in extra.dot_attributes()
