import pytest

from aps_homology.resolution import (all_vectors, classify, cube_edges, cube_states, edge_descriptor,
                                     resolve)

from conftest import corpus


def circle_counts(d):
    return {st.v: len(st.circles) for st in cube_states(d)}


def test_hopf_cube(hopf):
    assert circle_counts(hopf) == {(0, 0): 2, (0, 1): 1, (1, 0): 1, (1, 1): 2}
    kinds = [(e.v, e.i, e.kind) for e in cube_edges(hopf)]
    assert kinds == [((0, 0), 0, "merge"), ((0, 0), 1, "merge"),
                     ((0, 1), 0, "split"), ((1, 0), 1, "split")]


def test_trefoil_circle_counts(trefoil):
    counts = circle_counts(trefoil)
    assert counts[(0, 0, 0)] == 2
    assert counts[(1, 1, 1)] == 3
    assert sorted(counts.values()) == [1, 1, 1, 2, 2, 2, 2, 3]


def test_nested_loops_enclosed_sets():
    st = resolve(corpus("nested_loops"), ())
    assert sorted(sorted(c.enclosed) for c in st.circles) == [["p1"], ["p1", "p2"]]
    assert all(classify(c)[0] == "essential" for c in st.circles)


def test_two_hole_eight_resolutions():
    d = corpus("two_hole_eight")
    s0, s1 = resolve(d, (0,)), resolve(d, (1,))
    assert [sorted(c.enclosed) for c in s0.circles] == [["p1", "p2"]]
    assert sorted(sorted(c.enclosed) for c in s1.circles) == [["p1"], ["p2"]]
    e = edge_descriptor(s0, s1, 0)
    assert e.kind == "split"


def test_annular_trefoil_braidlike_state():
    d = corpus("annular_trefoil")
    st = resolve(d, (0, 0, 0))
    assert [c.key for c in st.circles] == [frozenset({"p1"})] * 2
    # every other state has only contractible circles
    for v in all_vectors(3):
        if any(v):
            assert all(c.contractible for c in resolve(d, v).circles)


def test_contractible_classification(unknot):
    (c,) = resolve(unknot, ()).circles
    assert classify(c) == ("contractible", None)


def test_circles_partition_darts(figure_eight):
    for st in cube_states(figure_eight):
        darts = sorted(x for c in st.circles for x in c.cycle)
        assert darts == sorted(figure_eight.involution)


def test_resolution_vector_length_checked(hopf):
    with pytest.raises(ValueError):
        resolve(hopf, (0,))


def test_empty_diagram():
    d = corpus("empty")
    assert resolve(d, ()).circles == ()
