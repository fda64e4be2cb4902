from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transverse import catalog
from transverse.cech import (
    Component,
    CoverDecl,
    CoverError,
    Edge,
    NoArrowsWitness,
    Nontrivial,
    ParityGraph,
    Piece,
    SignEvaluationError,
    Trivial,
    W1Verdict,
    bisect,
    brute_force_trivial,
    build_parity_graph,
    check_certificate,
    combine,
    cylinder_graph,
    decide_trivial,
    edgewise_product,
    mobius_graph,
    pull_back_assignment,
    random_parity_graph,
    sign_changes,
    transverse_volume_form_criterion,
    verify_assignment,
    verify_cycle,
    volume_sign_graph,
    w1tr,
)
from transverse.chars import ORIENTATION, VOLUME
from transverse.groupoid import (
    GpdLineRep,
    additive_part,
    canonical_groupoid_rep,
    mod_evidence,
    sign_part,
    tilde_cocycle,
)
from transverse.symcore import Truth

F = Fraction


def two_arc_cover():
    return CoverDecl((
        Piece("L", (Component((F(-1),), ((None, F(1)),)),)),
        Piece("R", (Component((F(1),), ((F(-1), None),)),)),
    ))


# parity graphs ----------------------------------------------------------------------------

def test_mobius_and_cylinder():
    m = decide_trivial(mobius_graph())
    assert isinstance(m, Nontrivial) and verify_cycle(mobius_graph(), m.cycle)
    c = decide_trivial(cylinder_graph())
    assert isinstance(c, Trivial) and verify_assignment(cylinder_graph(), c.assignment)


def test_small_examples():
    loop = ParityGraph(("a",), (Edge("a", "a", -1),))
    assert not decide_trivial(loop).trivial
    tri = ParityGraph(("a", "b", "c"), (Edge("a", "b", -1), Edge("b", "c", -1), Edge("c", "a", 1)))
    assert decide_trivial(tri).trivial
    odd = ParityGraph(("a", "b", "c"), (Edge("a", "b", -1), Edge("b", "c", -1), Edge("c", "a", -1)))
    res = decide_trivial(odd)
    assert not res.trivial and len(res.cycle) == 3
    assert decide_trivial(ParityGraph((), ())).trivial


def test_edge_rejects_bad_parity_and_unknown_nodes():
    with pytest.raises(ValueError):
        Edge("a", "b", 0)
    with pytest.raises(ValueError):
        ParityGraph(("a",), (Edge("a", "b", 1),))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_decision_matches_brute_force(seed):
    P = random_parity_graph(random.Random(seed))
    res = decide_trivial(P)
    assert res.trivial == brute_force_trivial(P)
    assert check_certificate(P, res)


def test_forged_certificates_fail():
    P = mobius_graph()
    assert not verify_assignment(P, {"U": 1, "V": 1})
    assert not verify_cycle(P, (("U", "V", 1, 0), ("V", "U", 1, 0)))
    assert not verify_cycle(P, ())
    assert not verify_cycle(P, (("U", "V", -1, 5),))
    C = cylinder_graph()
    assert not verify_cycle(C, (("U", "V", 1, 0), ("V", "U", -1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_edgewise_product_laws(seed):
    rng = random.Random(seed)
    P = random_parity_graph(rng)
    flips = tuple(Edge(e.a, e.b, rng.choice((1, -1)), e.label) for e in P.edges)
    Q = ParityGraph(P.nodes, flips)
    # squares are trivial, and the class is additive on trivial factors
    assert decide_trivial(edgewise_product(P, P)).trivial
    a, b = decide_trivial(P), decide_trivial(Q)
    if a.trivial and b.trivial:
        prod = {n: a.assignment[n] * b.assignment[n] for n in P.nodes}
        assert verify_assignment(edgewise_product(P, Q), prod)
    if a.trivial != b.trivial:
        assert not decide_trivial(edgewise_product(P, Q)).trivial


def test_edgewise_product_needs_matching_arrows():
    with pytest.raises(ValueError):
        edgewise_product(mobius_graph(), ParityGraph(("U", "V"), (Edge("U", "V", 1),)))


def test_parity_graph_json_round_trip():
    for P in (mobius_graph(), cylinder_graph(), random_parity_graph(random.Random(5))):
        assert ParityGraph.from_json(P.to_json()) == P


# groupoid models -------------------------------------------------------------------------

def test_reflection_is_nonorientable():
    v = w1tr(catalog.reflection())
    assert not v.trivial
    assert verify_cycle(v.graph, v.result.cycle)


@pytest.mark.parametrize("name", ["shift", "doubling", "translations", "scaling", "weighted-scaling", "affine"])
def test_orientable_models(name):
    v = w1tr(catalog.MODELS[name]())
    assert v.trivial and verify_assignment(v.graph, v.result.assignment)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pair_groupoid_is_orientable(n):
    assert w1tr(catalog.pair(n)).trivial
    if n == 1:
        v = w1tr(catalog.pair(1), two_arc_cover())
        assert v.trivial and len(v.graph.edges) == 3


def test_sign_twist_with_zero_additive_cocycle_is_detected_by_parity():
    R = catalog.reflection()
    c = tilde_cocycle(GpdLineRep(R, (ORIENTATION,)))
    assert additive_part(c).is_zero() is Truth.TRUE
    P = build_parity_graph(R, CoverDecl.single(1), sign_part(c).value)
    assert not decide_trivial(P).trivial


def test_bisection_keeps_nontrivial_class():
    R = catalog.reflection()
    cover = CoverDecl.single(1)
    for _ in range(3):
        first = cover.pieces[0].name
        cover, _ = bisect(cover, first, 0, 0)
        assert not w1tr(R, cover).trivial


@pytest.mark.parametrize("name", ["doubling", "shift", "scaling"])
def test_refinement_pulls_back_trivializations(name):
    G = catalog.MODELS[name]()
    cover = CoverDecl.single(1)
    v = w1tr(G, cover)
    assert v.trivial
    for cut in (0, F(1, 2), F(-3)):
        piece = cover.pieces[-1].name
        lo, hi = cover.pieces[-1].components[0].box[0]
        if (lo is not None and cut <= lo) or (hi is not None and cut >= hi):
            continue
        refined, node_map = bisect(cover, piece, 0, cut)
        assignment = pull_back_assignment(v.result.assignment, node_map)
        assert verify_assignment(volume_sign_graph(G, refined), assignment)
        assert w1tr(G, refined).trivial
        cover, v = refined, W1Verdict(volume_sign_graph(G, refined), decide_trivial(volume_sign_graph(G, refined)))


def test_bisect_rejects_cut_outside_box():
    with pytest.raises(CoverError):
        bisect(two_arc_cover(), "L", 0, 5)


def test_sign_evaluation_errors():
    inversion = catalog.discrete(catalog.R1, (("1/x",), ("1/x",)))
    with pytest.raises(SignEvaluationError):
        w1tr(inversion, CoverDecl.single(1, base=(0,)))


def test_uncovered_target_is_a_cover_error():
    cover = CoverDecl((Piece("U", (Component((F(1),), ((F(0), F(2)),)),)),))
    with pytest.raises(CoverError):
        w1tr(catalog.shift(), cover)


def test_cover_validation():
    with pytest.raises(CoverError):
        CoverDecl.from_json({"pieces": [{"name": "U", "box": [[0, 1]], "base_points": [[3]]}]}, 1)
    with pytest.raises(CoverError):
        CoverDecl.from_json({"pieces": [{"name": "U"}, {"name": "U"}]}, 1)
    with pytest.raises(CoverError):
        CoverDecl.from_json({"pieces": [{"name": "U", "box": [[0, 1], [0, 1]]}]}, 1)


def test_cover_json_round_trip():
    for cover in (two_arc_cover(), CoverDecl.single(2), bisect(CoverDecl.single(1), "M", 0, 0)[0]):
        dim = len(cover.pieces[0].components[0].base)
        assert CoverDecl.from_json(cover.to_json(), dim) == cover


def test_multi_component_pieces_get_separate_nodes():
    cover = CoverDecl.from_json(
        {"pieces": [{"name": "U", "components": [{"base": [-2], "box": [[None, -1]]}, {"base": [2], "box": [[1, None]]}]},
                    {"name": "V", "box": [[-2, 2]], "base_points": [[0]]}]},
        1,
    )
    assert [n for n, _ in cover.nodes()] == ["U#1", "U#2", "V"]
    v = w1tr(catalog.reflection(), cover)
    assert not v.trivial


def test_sign_changes_sampling():
    fold = catalog.discrete(catalog.R2, (("x", "x*y"), ("x", "y/x")))
    assert sign_changes(fold, CoverDecl.single(2))
    half = CoverDecl((Piece("H", (Component((F(1), F(1)), ((F(0), None), (None, None))),)),))
    assert sign_changes(fold, half) == []
    assert sign_changes(catalog.reflection(), CoverDecl.single(1)) == []


# the combined criterion --------------------------------------------------------------------

def test_volume_form_criterion_examples():
    P = catalog.pair(1)
    v = transverse_volume_form_criterion(P, None, mod_evidence(P))
    assert v.answer == "yes" and v.volume_form
    D = catalog.doubling()
    v = transverse_volume_form_criterion(D, None, mod_evidence(D, 1, [(((0, 1),), (0,))]))
    assert v.answer == "no" and v.reasons[0]["obstruction"] == "mod != 0"
    R = catalog.reflection()
    v = transverse_volume_form_criterion(R, None, mod_evidence(R))
    assert v.answer == "no" and v.reasons[0]["obstruction"] == "w1tr != 0"
    v = transverse_volume_form_criterion(D, None, mod_evidence(D))
    assert v.answer == "unknown"


def test_unit_groupoid_on_mobius_band():
    # no arrows, so mod vanishes, yet the band is not orientable
    m = W1Verdict(mobius_graph(), decide_trivial(mobius_graph()))
    assert combine(NoArrowsWitness(), m).answer == "no"
    c = W1Verdict(cylinder_graph(), decide_trivial(cylinder_graph()))
    assert combine(NoArrowsWitness(), c).answer == "yes"


def test_volume_orientation_and_density_graphs_agree():
    # VOLUME = DENSITY (x) ORIENTATION; densities carry no sign
    for name in ("reflection", "doubling", "shift"):
        G = catalog.MODELS[name]()
        cover = CoverDecl.single(1)
        vol = build_parity_graph(G, cover, sign_part(tilde_cocycle(GpdLineRep(G, (VOLUME,)))).value)
        ori = build_parity_graph(G, cover, sign_part(tilde_cocycle(canonical_groupoid_rep(G, ORIENTATION))).value)
        assert vol == ori
