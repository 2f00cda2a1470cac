import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cubeparity.builders import catalogue, catalogue_spheres
from cubeparity.derivative import (
    build_DK,
    build_NK,
    derivation_check,
    derivative_identity_holds,
    eps_is_free_involutive_automorphism,
    link_maps_are_isomorphisms,
    strata_counts,
)
from cubeparity.lattice import FPolynomial
from cubeparity.poset import NotLattice, disjoint_union, find_isomorphism, order_ideal


def brute_force_pairs(K):
    """Ordered pairs of facets of a common face whose closed ideals are disjoint."""
    out = {}
    for x in K.ids:
        fs = K.lower_covers(x)
        for b in fs:
            for c in fs:
                if b != c and not (order_ideal(K, b) & order_ideal(K, c)):
                    out[(b, c)] = x
    return out


@pytest.mark.parametrize("name", ["cube2", "cube3", "cube4", "zono(3,5)", "6gon", "4gon*4gon"])
def test_pairs_match_brute_force(name):
    K = catalogue(name)
    dc = build_DK(K)
    pairs = brute_force_pairs(K)
    assert {dc.pair(e): dc.join_NK[e] for e in dc.NK.ids} == pairs
    for e in dc.NK.ids:
        b, c = dc.pair(e)
        assert dc.NK.rank[e] == K.rank[b] == K.rank[dc.join_NK[e]] - 1


def test_square_boundary():
    dc = build_DK(catalogue("4gon"))
    assert dc.DK.f_vector() == [4] and dc.NK.f_vector() == [8]


def test_cube3_has_three_equatorial_bands():
    dc = build_DK(catalogue("cube3"))
    assert dc.DK.f_vector() == [12, 12]
    comps = list(nx.weakly_connected_components(dc.DK.hasse_graph()))
    assert len(comps) == 3
    square = catalogue("4gon")
    for comp in comps:
        sub = dc.DK.hasse_graph().subgraph(comp)
        assert nx.is_isomorphic(sub, square.hasse_graph())


def test_cube4():
    assert build_DK(catalogue("cube4")).DK.f_vector() == [32, 48, 24]


@pytest.mark.parametrize("name", [n for n in catalogue_spheres() if n != "zono(4,7)"] + ["4gon*4gon", "cube3*interval", "solid3"])
def test_derivative_identity(name):
    K = catalogue(name)
    dc = build_DK(K)
    assert derivative_identity_holds(K, dc)
    expected = FPolynomial(K.f_vector()).derivative().trimmed()
    assert FPolynomial(dc.DK.f_vector()).trimmed() == expected
    assert dc.NK.f_vector() == [2 * x for x in dc.DK.f_vector()]


def test_cover_map_is_two_to_one():
    dc = build_DK(catalogue("zono(3,4)"))
    counts = {}
    for e, o in dc.cover_map.items():
        counts[o] = counts.get(o, 0) + 1
    assert set(counts.values()) == {2} and len(counts) == len(dc.DK)


@pytest.mark.parametrize("name", ["cube3", "cube4", "zono(3,4)", "8gon"])
def test_eps_and_links(name):
    dc = build_DK(catalogue(name))
    assert eps_is_free_involutive_automorphism(dc)
    assert link_maps_are_isomorphisms(dc)


def test_strata_counts():
    s3 = strata_counts(catalogue("cube3"))
    assert s3[2] == 6 and s3[1] == 12  # squares are the double points, edges the simple arcs
    s4 = strata_counts(catalogue("cube4"))
    assert s4[3] == 8
    for name in ["cube3", "cube4", "zono(3,5)", "zono(4,5)"]:
        K = catalogue(name)
        s = strata_counts(K)
        assert [s[i] for i in range(K.dim + 1)] == K.f_vector()


def test_disjoint_union_adds():
    K1, K2 = catalogue("cube3"), catalogue("6gon")
    f = build_DK(disjoint_union(K1, K2)).DK.f_vector()
    a, b = build_DK(K1).DK.f_vector(), build_DK(K2).DK.f_vector()
    assert FPolynomial(f) == FPolynomial(a) + FPolynomial(b)


def test_non_lattice_input_is_refused():
    with pytest.raises(NotLattice):
        build_DK(catalogue("rp(cube3)"))


def test_build_NK_matches():
    K = catalogue("cube3")
    assert build_NK(K).f_vector() == [24, 24]


@pytest.mark.parametrize(
    "a,b,f",
    [
        ("4gon", "4gon", [32, 32]),
        ("4gon", "point", [4]),
        ("4gon", "interval", [12, 8]),
        ("cube3", "4gon", [80, 144, 72]),
        ("square", "interval", [12, 12, 3]),
    ],
)
def test_derivation(a, b, f):
    rep = derivation_check(catalogue(a), catalogue(b))
    assert rep["pass"] and rep["f"] == f


def test_derivation_single_vertex_factor():
    K1 = catalogue("4gon")
    rep = derivation_check(K1, catalogue("point"))
    assert find_isomorphism(build_DK(K1).DK, build_DK(catalogue("4gon*point")).DK) is not None
    assert len(rep["bijection"]) == 4


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["4gon", "6gon", "interval", "point", "cube2", "square", "zono(2,4)"]), st.sampled_from(["4gon", "interval", "point", "cube3"]))
def test_derivation_random_pairs(a, b):
    assert derivation_check(catalogue(a), catalogue(b))["pass"]
