import pytest

from aps_homology.geometry import diagram_from_curves, regular_polygon, sample_curve
from aps_homology.diagram import validate_diagram


def test_single_polygon_is_free_loop():
    d = diagram_from_curves([regular_polygon(0, 0, 1)])
    assert d.k == 0 and len(d.loops) == 1
    assert validate_diagram(d) == []


def test_overlapping_polygons_cross_twice():
    d = diagram_from_curves([regular_polygon(0, 0, 1), regular_polygon(1.2, 0, 1)])
    assert d.k == 2
    assert len(d.link_components) == 2


def test_puncture_lands_in_smallest_face():
    d = diagram_from_curves([regular_polygon(0, 0, 3), regular_polygon(-1, 0, 1)],
                            {"p1": (-1, 0), "p2": (1.5, 0)})
    faces = d.puncture_faces
    assert faces["p1"] != faces["p2"]
    assert len(d.nesting) == 1


def test_puncture_outside_every_curve_rejected():
    with pytest.raises(ValueError, match="outer face"):
        diagram_from_curves([regular_polygon(0, 0, 1)], {"p1": (5, 5)})


def test_degenerate_input_rejected():
    square = [(0, 0), (2, 0), (2, 2), (0, 2)]
    touching = [(2, 0), (4, 0), (4, 2)]
    with pytest.raises(ValueError):
        diagram_from_curves([square, touching])


def test_alternation_without_heights():
    import math
    curve = sample_curve(lambda t: (math.sin(t) + 2 * math.sin(2 * t), math.cos(t) - 2 * math.cos(2 * t)), 60)
    d = diagram_from_curves([curve])
    assert d.k == 3
    # an alternating trefoil has all crossings of one sign
    assert {d.crossing_sign(i) for i in range(3)} in ({1}, {-1})
