import json

import pytest

from aps_homology.diagram import (Diagram, build_diagram, diagram_from_dict, diagram_to_dict, parse_diagram,
                                  reorder_crossings, serialize, validate_diagram)
from aps_homology.errors import BadPermutation, InvalidDiagram, ParseError, SchemaError
from aps_homology.surface import PlanarSurface

from conftest import CORPUS, corpus

ANNULUS_DOC = {
    "format": "aps-diagram/1",
    "surface": {"punctures": ["p1"]},
    "darts": [0, 1],
    "edges": [[0, 1]],
    "vertices": [{"kind": "loop", "rotation": [0, 1]}],
    "outer_face": 1,
    "puncture_faces": {"p1": 0},
}


def hopf_doc():
    return json.loads((CORPUS / "hopf.json").read_text())


def test_parse_annulus_loop():
    d = diagram_from_dict(ANNULUS_DOC)
    assert d.k == 0
    assert len(d.loops) == 1
    assert validate_diagram(d) == []


def test_parse_hopf():
    d = parse_diagram((CORPUS / "hopf.json").read_text())
    assert d.k == 2
    assert d.n_minus + d.n_plus == 2


def test_dart_twice_in_rotations():
    doc = hopf_doc()
    doc["vertices"][1]["rotation"][0] = doc["vertices"][0]["rotation"][0]
    with pytest.raises(SchemaError, match="referenced twice"):
        diagram_from_dict(doc)


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as info:
        parse_diagram('{"surface": \n [}')
    assert info.value.line == 2
    doc = dict(ANNULUS_DOC)
    del doc["edges"]
    with pytest.raises(SchemaError) as info:
        diagram_from_dict(doc)
    assert info.value.path == "/edges"
    doc = dict(ANNULUS_DOC, outer_face=7)
    with pytest.raises(SchemaError, match="out of range"):
        diagram_from_dict(doc)


def test_puncture_in_outer_face_is_violation():
    doc = dict(ANNULUS_DOC, puncture_faces={"p1": 1})
    with pytest.raises(InvalidDiagram, match="outer face"):
        diagram_from_dict(doc)


def test_three_valent_vertex_is_violation():
    # a theta graph: two 3-valent vertices joined by three edges
    inv = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    d = Diagram(PlanarSurface(()), inv, (), ((0, 2, 4), (1, 5, 3)), 0, (), (), frozenset({0, 2, 4}))
    bad = validate_diagram(d)
    assert any("3-valent" in b for b in bad)


def test_valid_corpus_diagrams():
    for name in ("trefoil", "figure_eight", "unlink2", "nested_loops", "braid12_two_holes"):
        assert validate_diagram(corpus(name)) == []


def test_round_trip_is_lossless():
    for name in ("hopf", "trefoil", "nested_loops", "two_hole_eight", "empty"):
        d = corpus(name)
        again = parse_diagram(serialize(d))
        assert again == d
        assert again.forward == d.forward
        assert again.crossings == d.crossings
        assert serialize(again) == serialize(d)


def test_orientation_override_changes_signs(hopf):
    doc = diagram_to_dict(hopf)
    comps = hopf.link_components
    # reverse the second component
    other = hopf.involution[comps[1][0]]
    doc["orientations"] = [comps[0][0], other]
    flipped = diagram_from_dict(doc)
    assert (flipped.n_minus, flipped.n_plus) == (hopf.n_plus, hopf.n_minus)
    # the stored crossing still starts at the incoming under dart
    assert validate_diagram(flipped) == []


def test_conflicting_orientations():
    d = corpus("trefoil")
    doc = diagram_to_dict(d)
    x = doc["orientations"][0]
    doc["orientations"] = [x, d.involution[x]]
    with pytest.raises(SchemaError, match="conflict"):
        diagram_from_dict(doc)


def test_reorder(hopf):
    assert reorder_crossings(hopf, [1, 2]) == hopf
    swapped = reorder_crossings(hopf, [2, 1])
    assert swapped.crossings == hopf.crossings[::-1]
    with pytest.raises(BadPermutation):
        reorder_crossings(hopf, [1, 1])
    with pytest.raises(BadPermutation):
        reorder_crossings(hopf, [1, 2, 3])


def test_crossing_signs(trefoil):
    signs = {trefoil.crossing_sign(i) for i in range(trefoil.k)}
    assert len(signs) == 1
    assert trefoil.n_minus in (0, 3)


def test_empty_diagram_round_trip():
    d = build_diagram(PlanarSurface(("p1",)), {}, [], [], None, {})
    assert validate_diagram(d) == []
    assert diagram_to_dict(d)["outer_face"] is None
    assert parse_diagram(serialize(d)) == d


def test_nesting_required_for_disconnected():
    doc = diagram_to_dict(corpus("unlink2"))
    del doc["nesting"]
    with pytest.raises(InvalidDiagram, match="nesting"):
        diagram_from_dict(doc)
