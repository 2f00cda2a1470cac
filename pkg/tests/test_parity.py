import random

import pytest
from hypothesis import given, settings, strategies as st

from cubeparity.builders import antipodal_quotient, catalogue, polygon
from cubeparity.parity import (
    ChainOperators,
    HypothesisFailure,
    NotEulerian,
    Obstruction,
    bicolor,
    color_count_check,
    eulerian_degree,
    theorem52_check,
)
from cubeparity.poset import disjoint_union

SMALL_SPHERES = ["cube2", "cube3", "cube4", "6gon", "8gon", "zono(3,4)", "zono(3,5)", "zono(2,4)"]


def parity_oracle(K):
    """Black = even number of +1 coordinates in the vertex label."""
    return {v for v in K.elements_of_rank(0) if sum(1 for s in K.labels[v] if s == 1) % 2 == 0}


@pytest.mark.parametrize("n,half", [(4, 8), (6, 32)])
def test_cube_bicoloring_matches_coordinate_parity(n, half):
    K = catalogue(f"cube{n}")
    col = bicolor(K)
    assert col.is_valid(K)
    oracle = parity_oracle(K)
    assert col.black in (oracle, set(K.elements_of_rank(0)) - oracle)
    rep = color_count_check(K)
    assert rep["f_b"] == rep["f_w"] == half


def test_hexagon_bicoloring():
    col = bicolor(polygon(6))
    assert len(col.black) == len(col.white) == 3
    assert color_count_check(polygon(6))["n"] == 2


def test_odd_cycle_obstruction():
    with pytest.raises(Obstruction) as err:
        bicolor(polygon(5))
    assert len(err.value.cycle) == 5


def test_rp2_is_decided_by_the_solver():
    K = antipodal_quotient(catalogue("cube3"))
    with pytest.raises(Obstruction) as err:
        bicolor(K)
    cyc = err.value.cycle
    assert len(cyc) % 2 == 1
    # every vertex meets the certificate in an even number of edges: it is a 1-cycle
    for v in K.elements_of_rank(0):
        assert len(set(K.upper_covers(v)) & cyc) % 2 == 0


@pytest.mark.parametrize("name,n", [("cube3", 0), ("cube4", 2), ("8gon", 2), ("zono(4,5)", 2), ("cube5", 0)])
def test_eulerian_degree(name, n):
    assert eulerian_degree(catalogue(name)) == n


def test_not_eulerian():
    K = disjoint_union(catalogue("cube3"), catalogue("4gon"))
    with pytest.raises(NotEulerian):
        eulerian_degree(K)


def test_color_count_needs_nonzero_n():
    with pytest.raises(HypothesisFailure):
        color_count_check(catalogue("cube3"))


@pytest.fixture(scope="module")
def ops3():
    return ChainOperators(catalogue("cube3"))


def test_gamma_of_square(ops3):
    K = ops3.K
    q = K.elements_of_rank(2)[0]
    g = ops3.gamma([(q,)])
    assert len(g) == 4
    edges = set(K.lower_covers(q))
    for (e,) in g:
        b, c = ops3.dc.pair(e)
        assert {b, c} <= edges and not (set(K.lower_covers(b)) & set(K.lower_covers(c)))


def test_gamma_of_vertex_is_zero(ops3):
    assert ops3.gamma([(ops3.K.elements_of_rank(0)[0],)]) == frozenset()


def test_tau_on_vertex_edge_flag(ops3):
    K = ops3.K
    v = K.elements_of_rank(0)[0]
    e = K.upper_covers(v)[0]
    (w,) = set(K.lower_covers(e)) - {v}
    t = ops3.tau([(v, e)])
    assert {ops3.dc.pair(f[0]) for f in t} == {(v, w)}
    assert ops3.sigma(t) == ops3.gamma(ops3.boundary([(v, e)])) ^ ops3.boundary(ops3.gamma([(v, e)]))


def test_tau_of_zero_chain_is_zero(ops3):
    assert ops3.tau([(x,) for x in ops3.K.ids]) == frozenset()


def test_P_counts_on_cube3(ops3):
    assert len(ops3.P(1)) == 48
    assert len(ops3.P(0)) == 20
    assert not ops3.boundary(ops3.P(1))


@pytest.mark.parametrize("name", SMALL_SPHERES)
def test_P_and_images(name):
    ops = ChainOperators(catalogue(name))
    d = ops.d
    for i in range(d + 1):
        top = [f for f in ops.SK.of_dim(i) if all(ops.K.rank[x] >= d - i for x in f)]
        assert ops.P(i) == set(ops.SK.of_dim(i)) - set(top)
        assert ops.gamma(ops.P(i)) == ops.gamma_P_expected(i)
        if i >= 1:
            assert ops.tau(ops.P(i)) == ops.gamma(ops.P(i - 1)) == ops.tau_P_expected(i)
        if 0 < i < d:
            assert not ops.boundary(ops.P(i))


@pytest.mark.parametrize("name", ["cube3", "cube4", "zono(3,4)", "6gon"])
def test_section_W(name):
    ops = ChainOperators(catalogue(name))
    W = ops.section_W()
    allflags = set().union(*map(set, ops.SNK.flags.values()))
    assert ops.sigma(W) == allflags
    assert not (W & ops.eps_star(W))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["cube2", "cube3", "cube4", "zono(3,4)", "6gon"]), st.integers(0, 2**32 - 1), st.floats(0.05, 0.6))
def test_operator_identities_random(name, seed, density):
    ops = _ops(name)
    rep = ops.check_identities(random.Random(seed), trials=2, density=density)
    assert rep["pass"], rep


_cache = {}


def _ops(name):
    if name not in _cache:
        _cache[name] = ChainOperators(catalogue(name))
    return _cache[name]


@pytest.mark.parametrize("name", ["cube2", "cube3", "cube4", "zono(3,4)", "zono(4,5)", "cube6", "8gon"])
def test_theorem52(name):
    rep = theorem52_check(catalogue(name), chain_level=name in ("cube3", "cube4", "zono(3,4)"))
    assert rep["pass"] and rep["parity_sum"] == 0
    if rep["d"] % 2:
        f = rep["f"]
        assert rep["odd_sum"] == sum(f[i] for i in range(1, rep["d"] - 1, 2))


def test_theorem52_cube6_value():
    assert theorem52_check(catalogue("cube6"))["odd_sum"] == 192 + 160


def test_theorem52_hypotheses_checked():
    with pytest.raises(HypothesisFailure):
        theorem52_check(catalogue("4gon*4gon"))
    with pytest.raises(HypothesisFailure):
        theorem52_check(catalogue("solid3"))
