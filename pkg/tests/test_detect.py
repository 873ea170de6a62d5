import importlib

import pytest

from aps_homology.aps_complex import assemble
from aps_homology.detect import (Verdict, complex_checks, detect, invariance_suite,
                                 orientation_swap_symmetric, property_checks, state_sum_euler,
                                 verdict_for_rank, winding_homogeneous)
from aps_homology.linalg import homology
from aps_homology.moves import MoveSite, find_sites

from conftest import corpus


def test_verdict_is_function_of_rank():
    assert verdict_for_rank(1) is Verdict.EMPTY_LINK
    assert verdict_for_rank(2) is Verdict.EMBEDDED_KNOT_CANDIDATE
    assert verdict_for_rank(6) is Verdict.NOT_EMBEDDED_KNOT
    with pytest.raises(ValueError):
        verdict_for_rank(0)


def test_essential_loop_is_candidate(annulus_loop):
    v = detect(annulus_loop)
    assert (v.total_rank_mod2, v.verdict) == (2, Verdict.EMBEDDED_KNOT_CANDIDATE)


def test_two_component_unlink():
    v = detect(corpus("unlink2"))
    assert (v.total_rank_mod2, v.verdict) == (4, Verdict.NOT_EMBEDDED_KNOT)


def test_empty_link():
    v = detect(corpus("empty"))
    assert (v.total_rank_mod2, v.verdict) == (1, Verdict.EMPTY_LINK)


def test_knot_around_two_holes():
    v = detect(corpus("two_hole_eight"))
    assert v.total_rank_mod2 == 6
    assert v.verdict is Verdict.NOT_EMBEDDED_KNOT


def test_state_sum_examples(unknot, hopf):
    assert state_sum_euler(unknot) == 2
    assert state_sum_euler(hopf) == 4
    assert state_sum_euler(corpus("empty")) == 1
    assert homology(assemble(hopf)).euler_characteristic == 4


def test_state_sum_matches_every_ring():
    for name in ("trefoil", "figure_eight", "two_hole_eight", "annular_trefoil", "nested_loops"):
        d = corpus(name)
        chi = state_sum_euler(d)
        c = assemble(d)
        for ring in ("Z", "Q"):
            assert homology(c, ring).euler_characteristic == chi
        assert homology(assemble(d, "F2")).euler_characteristic == chi


def test_invariance_examples(annulus_loop, hopf):
    assert invariance_suite(annulus_loop, [MoveSite("R1", (0,))]).ok
    x = annulus_loop.outer
    rep = invariance_suite(annulus_loop, [MoveSite("R2", (x, x))])
    assert rep.ok
    after = rep.diagrams[-1]
    bigon = find_sites(after, "R2_inverse")[0]
    assert invariance_suite(after, [bigon]).ok
    assert invariance_suite(hopf, [MoveSite("reorder", (2, 1))]).ok


def test_invariance_reports_divergence(trefoil, monkeypatch):
    # a broken "move" that swaps in a different knot must be caught
    detect_mod = importlib.import_module("aps_homology.detect")
    other = corpus("figure_eight")
    monkeypatch.setattr(detect_mod, "apply_move", lambda d, site: other)
    rep = invariance_suite(trefoil, [MoveSite("R1", (0,)), MoveSite("R1", (0,))])
    assert not rep.ok
    assert rep.divergence == 1
    assert len(rep.profiles) == 3


def test_winding_and_orientation_swap():
    c = assemble(corpus("annular_trefoil"))
    total, bad = winding_homogeneous(c)
    assert total > 0 and bad == 0
    assert orientation_swap_symmetric(c)


def test_property_battery_on_corpus():
    for name in ("hopf", "trefoil", "two_hole_eight", "nested_loops", "empty"):
        res = property_checks(corpus(name))
        assert all(res.values()), (name, res)


def test_complex_checks(trefoil):
    assert complex_checks(assemble(trefoil)) == {"d_squared": True, "winding": True}
