import pytest
from hypothesis import given, settings, strategies as st

from cubeparity.builders import antipodal_quotient, catalogue, polygon
from cubeparity.mod2 import (
    FlagComplex,
    Mod2Matrix,
    NoSolution,
    betti_numbers,
    cellular_boundary,
    cellular_coboundary,
    chain,
    flag_boundary,
    homology_rank,
)


def test_chain_cancels_repeats():
    assert chain([1, 2, 1, 3]) == {2, 3}


def test_square_cellular_boundary():
    K = catalogue("4gon")
    d1 = cellular_boundary(K, 1)
    for e, img in zip(d1.dom, d1.images):
        assert d1.decode(img) == set(K.lower_covers(e))
        assert bin(img).count("1") == 2


def test_flags_of_an_edge():
    K = catalogue("interval")
    v, w = K.elements_of_rank(0)
    (e,) = K.elements_of_rank(1)
    S = FlagComplex(K)
    assert sorted(S.flags[0]) == [(v,), (w,), (e,)] and sorted(S.flags[1]) == [(v, e), (w, e)]
    assert flag_boundary([(v, e)]) == {(v,), (e,)}


@pytest.mark.parametrize("name", ["cube3", "cube4", "zono(3,4)"])
def test_boundary_squared_zero(name):
    S = FlagComplex(catalogue(name))
    for i in range(2, S.dim + 1):
        assert S.boundary(i - 1).compose(S.boundary(i)).is_zero()
    K = catalogue(name)
    for i in range(2, K.dim + 1):
        assert cellular_boundary(K, i - 1).compose(cellular_boundary(K, i)).is_zero()


@pytest.mark.parametrize(
    "name,betti",
    [("cube4", [1, 0, 0, 1]), ("cube3", [1, 0, 1]), ("4gon*4gon", [1, 2, 1]), ("solid3", [1, 0, 0, 0]), ("cube3+4gon", [2, 1, 1])],
)
def test_betti_both_routes(name, betti):
    K = catalogue(name)
    assert betti_numbers(K) == betti
    assert betti_numbers(K, method="order") == betti


def test_rp2_first_homology():
    K = antipodal_quotient(catalogue("cube3"))
    assert homology_rank(K, 1) == 1 == homology_rank(K, 1, method="order")


def test_odd_cycle_has_no_bicoloring_solution():
    K = polygon(5)
    delta = cellular_coboundary(K, 0)
    edges = K.elements_of_rank(1)
    with pytest.raises(NoSolution) as err:
        delta.solve(edges)
    cert = err.value.certificate
    assert cert == set(edges)
    # certificate vanishes on the image of every vertex
    for v in K.elements_of_rank(0):
        assert len(delta.apply([v]) & cert) % 2 == 0


def test_dump_lines_sorted():
    M = Mod2Matrix.from_map(["a", "b"], ["x", "y"], {"a": ["y"], "b": ["x", "y"]}.get)
    assert M.dump_lines() == ["0 1", "1 0", "1 1"]


matrices = st.integers(1, 8).flatmap(
    lambda n: st.integers(1, 8).flatmap(
        lambda m: st.tuples(st.just(n), st.just(m), st.lists(st.integers(0, 2**m - 1), min_size=n, max_size=n))
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_nullity(data):
    n, m, images = data
    M = Mod2Matrix(range(n), range(m), images)
    assert M.rank() + M.nullity() == n
    assert M.rank() == M.transpose().rank()
    for k in M.kernel():
        assert not M.apply(k)


@settings(max_examples=200, deadline=None)
@given(matrices, st.data())
def test_solve_exact_or_certified(data, draw):
    n, m, images = data
    M = Mod2Matrix(range(n), range(m), images)
    target = draw.draw(st.frozensets(st.integers(0, m - 1)))
    try:
        x = M.solve(target)
    except NoSolution as exc:
        cert = exc.certificate
        assert len(cert & target) % 2 == 1
        assert all(len(M.apply([j]) & cert) % 2 == 0 for j in range(n))
    else:
        assert M.apply(x) == target
