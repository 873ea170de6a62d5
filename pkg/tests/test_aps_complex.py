import json

import pytest

from aps_homology.aps_complex import (VMINUS, VPLUS, WCCW, WCW, assemble, complex_from_dump,
                                      dump_complex, edge_sign, generator_basis, local_merge,
                                      local_split, quantum_like_grade, winding_grade)
from aps_homology.errors import UnrealizableCase
from aps_homology.linalg import homology
from aps_homology.resolution import cube_states, resolve

from conftest import corpus

C = frozenset()
P1 = frozenset({"p1"})
P2 = frozenset({"p2"})
P12 = frozenset({"p1", "p2"})


def test_merge_contractible():
    assert local_merge(C, C, C, VPLUS, VPLUS) == [(VPLUS, 1)]
    assert local_merge(C, C, C, VPLUS, VMINUS) == [(VMINUS, 1)]
    assert local_merge(C, C, C, VMINUS, VPLUS) == [(VMINUS, 1)]
    assert local_merge(C, C, C, VMINUS, VMINUS) == []


def test_merge_contractible_with_essential():
    for o in (WCCW, WCW):
        assert local_merge(C, P1, P1, VPLUS, o) == [(o, 1)]
        assert local_merge(P1, C, P1, o, VPLUS) == [(o, 1)]
        assert local_merge(C, P1, P1, VMINUS, o) == []
        assert local_merge(P1, C, P1, o, VMINUS) == []


def test_merge_parallel_essential_to_contractible():
    assert local_merge(P1, P1, C, WCCW, WCCW) == []
    assert local_merge(P1, P1, C, WCW, WCW) == []
    assert local_merge(P1, P1, C, WCCW, WCW) == [(VMINUS, 1)]
    assert local_merge(P1, P1, C, WCW, WCCW) == [(VMINUS, 1)]


def test_merge_all_essential_is_zero():
    for a in (WCCW, WCW):
        for b in (WCCW, WCW):
            assert local_merge(P1, P2, P12, a, b) == []


def test_merge_unrealizable():
    with pytest.raises(UnrealizableCase):
        local_merge(C, C, P1, VPLUS, VPLUS)
    with pytest.raises(UnrealizableCase):
        local_merge(C, P1, P2, VPLUS, WCCW)
    with pytest.raises(UnrealizableCase):
        local_merge(P1, P2, C, WCCW, WCW)


def test_split_tables():
    assert local_split(C, C, C, VPLUS) == [((VPLUS, VMINUS), 1), ((VMINUS, VPLUS), 1)]
    assert local_split(C, C, C, VMINUS) == [((VMINUS, VMINUS), 1)]
    assert local_split(P1, C, P1, WCCW) == [((VMINUS, WCCW), 1)]
    assert local_split(P1, P1, C, WCW) == [((WCW, VMINUS), 1)]
    assert local_split(C, P1, P1, VPLUS) == [((WCCW, WCW), 1), ((WCW, WCCW), 1)]
    assert local_split(C, P1, P1, VMINUS) == []
    assert local_split(P12, P1, P2, WCCW) == []
    with pytest.raises(UnrealizableCase):
        local_split(P1, C, C, WCCW)


def test_edge_sign():
    assert edge_sign((0, 0, 0), 0) == 1
    assert edge_sign((1, 0, 1), 1) == -1
    assert edge_sign((1, 1, 0), 2) == 1
    with pytest.raises(ValueError):
        edge_sign((1, 0), 0)


def test_generator_basis_order():
    st = resolve(corpus("unknot"), ())
    assert generator_basis(st) == [(VPLUS,), (VMINUS,)]
    st = resolve(corpus("nested_loops"), ())
    assert len(generator_basis(st)) == 4


def test_winding_grade():
    st = resolve(corpus("annular_trefoil"), (0, 0, 0))
    assert [winding_grade(st, g) for g in range(4)] == [2, 0, 0, -2]
    st = resolve(corpus("hopf"), (0, 0))
    assert [winding_grade(st, g) for g in range(4)] == [0, 0, 0, 0]
    assert [quantum_like_grade(st, g) for g in range(4)] == [2, 0, 0, -2]


def test_essential_loop_complex(annulus_loop):
    c = assemble(annulus_loop)
    assert c.dims == [2]
    assert c.differentials == []


def test_hopf_dims(hopf):
    c = assemble(hopf)
    assert c.dims == [4, 4, 4]
    assert c.verify_d_squared()


def test_dimension_bookkeeping(figure_eight):
    c = assemble(figure_eight)
    assert sum(c.dims) == sum(2 ** len(st.circles) for st in cube_states(figure_eight))


def test_mod2_path_matches_integer_path():
    for name in ("trefoil", "figure_eight", "annular_trefoil", "two_hole_eight"):
        d = corpus(name)
        cz, c2 = assemble(d, "Z"), assemble(d, "F2")
        assert [m.mod2() for m in cz.differentials] == c2.differentials


def test_threads_give_identical_matrices(figure_eight):
    a = assemble(figure_eight, "Z", threads=1)
    b = assemble(figure_eight, "Z", threads=3)
    assert [m.entries for m in a.differentials] == [m.entries for m in b.differentials]


def test_dump_round_trip(trefoil):
    c = assemble(trefoil)
    doc = json.loads(dump_complex(c))
    assert doc["format"] == "aps-complex/1"
    again = complex_from_dump(doc)
    assert again.dims == c.dims
    assert homology(again).profile() == homology(c).profile()


def test_sign_corruption_breaks_d_squared(trefoil):
    doc = json.loads(dump_complex(assemble(trefoil)))
    first = next(dd for dd in doc["differentials"] if dd["entries"])
    first["entries"][0][2] *= -1
    assert not complex_from_dump(doc).verify_d_squared()


def test_unknown_ring(hopf):
    with pytest.raises(ValueError):
        assemble(hopf, "R")
