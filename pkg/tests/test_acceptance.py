"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL
line (visible under ``pytest -v`` and when run as a script)."""

import random
import sys
import time

import pytest

from cubeparity.builders import catalogue, catalogue_names, moment_curve_arrangement, random_generic_arrangement, zonotope_boundary
from cubeparity.cubation import example, run_pipeline, strata_chi, ut_audit, verify_cor62, verify_thm61
from cubeparity.derivative import build_DK, derivation_check
from cubeparity.lattice import F, FPolynomial, facet_parity_d3_holds, mine_modular_equations, saturation, smith_invariants, span_E
from cubeparity.mod2 import betti_numbers
from cubeparity.parity import ChainOperators, bicolor, color_count_check, eulerian_degree, theorem52_check
from cubeparity.poset import euler_characteristic, validate_cubical

@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        with capsys.disabled():
            print("\n" + line)

    return emit


CUBES = [f"cube{n}" for n in range(2, 7)]
POLYGONS = [f"{2 * n}gon" for n in range(2, 9)]
ZONOS = [f"zono({d + 1},{d + 1 + n})" for d in range(1, 4) for n in range(0, 4)]
PRODUCTS = [n for n in catalogue_names() if "*" in n]


def test_criterion_01_derivative_identity(report):
    t0 = time.perf_counter()
    names = CUBES + POLYGONS + ZONOS + PRODUCTS
    bad = []
    for name in names:
        K = catalogue(name)
        fd = FPolynomial(build_DK(K).DK.f_vector()).trimmed()
        if fd != FPolynomial(K.f_vector()).derivative().trimmed():
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    report(1, ok, f"f(DK) = f'(K) on {len(names)} complexes, failures {bad}, {dt:.2f}s (limit 10s)")
    assert ok


PAIRS = [("4gon", "4gon"), ("4gon", "point"), ("4gon", "interval"), ("cube3", "4gon"), ("square", "interval"), ("cube4", "6gon")]


def test_criterion_02_derivation(report):
    results = []
    for a, b in PAIRS:
        try:
            results.append(derivation_check(catalogue(a), catalogue(b))["pass"])
        except AssertionError:
            results.append(False)
    ok = all(results) and len(results) >= 5
    report(2, ok, f"explicit isomorphism D(K1 x K2) = DK1 x K2 + K1 x DK2 on {sum(results)}/{len(PAIRS)} pairs")
    assert ok


def test_criterion_03_zonotope_recursion(report):
    mismatches = []
    for d in range(0, 4):
        for n in range(0, 4):
            Z = zonotope_boundary(moment_curve_arrangement(d + 1, n + d + 1))
            if Z.f_vector() != F(d, n).as_list():
                mismatches.append((d, n, Z.f_vector(), F(d, n).as_list()))
    ok = not mismatches and F(2, 1).as_list() == [14, 24, 12]
    report(3, ok, f"F(d,n) = f(zonotope) for d <= 3, n <= 3; mismatches {mismatches}")
    assert ok


def test_criterion_04_lattice_ranks(report):
    t0 = time.perf_counter()
    ranks = {d: span_E(d).rank for d in range(1, 11)}  # span_E raises unless stabilized
    dt = time.perf_counter() - t0
    ok = all(r == (d + 1) // 2 for d, r in ranks.items()) and dt < 5
    report(4, ok, f"rank E^d = floor((d+1)/2) for d = 1..10: {list(ranks.values())}, {dt:.2f}s (limit 5s)")
    assert ok


def test_criterion_05_modular_mining(report):
    invariants, moduli = {}, {}
    for d in range(1, 11):
        L = span_E(d)
        invariants[d] = smith_invariants(L, saturation(L))
        vecs = [F(d, n).as_list() for n in range(d + 2)]
        moduli[d] = sorted({e.modulus for e in mine_modular_equations(vecs, include_exact=False)})
    ok = all(inv and set(inv) == {2} for inv in invariants.values()) and all(m == [2] for m in moduli.values())
    report(5, ok, f"Smith invariants of saturation/E^d all 2 and mined moduli {{2}} for d = 1..10")
    assert ok


def test_criterion_06_bicoloring(report):
    counts = {}
    for name in ("cube4", "cube6"):
        K = catalogue(name)
        col = bicolor(K)
        rep = color_count_check(K)
        counts[name] = (rep["f_b"], rep["f_w"], col.is_valid(K))
    degrees_ok = True
    for name in CUBES + POLYGONS + ZONOS:
        K = catalogue(name)
        if eulerian_degree(K) != 1 + (-1) ** (K.dim - 1):
            degrees_ok = False
    ok = counts == {"cube4": (8, 8, True), "cube6": (32, 32, True)} and degrees_ok
    report(6, ok, f"bicolor counts {counts}; eulerian degree 1+(-1)^(d-1) on all catalogue spheres: {degrees_ok}")
    assert ok


def test_criterion_07_chain_identities(report):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    chains = 0
    failures = {}
    exact_ok = True
    for name in ["cube2", "cube3", "cube4", "6gon", "zono(3,4)", "zono(3,5)", "zono(4,5)"]:
        ops = ChainOperators(catalogue(name))
        rep = ops.check_identities(rng, trials=10, density=0.25)
        chains += rep["chains"]
        for k, v in rep["failures"].items():
            failures[k] = failures.get(k, 0) + v
        d = ops.d
        for i in range(d + 1):
            Pi = ops.P(i)
            if i >= 1 and ops.tau(Pi) != ops.gamma(ops.P(i - 1)):
                exact_ok = False
            if 0 < i < d and ops.boundary(Pi):
                exact_ok = False
    dt = time.perf_counter() - t0
    ok = chains >= 200 and not any(failures.values()) and exact_ok and dt < 60
    report(7, ok, f"{chains} seeded random chains, failures {failures}, tau P_i = gamma P_(i-1) and dP_i = 0: {exact_ok}, {dt:.1f}s (limit 60s)")
    assert ok


def test_criterion_08_theorem52(report):
    names = ["cube4", "cube6"] + [f"zono(4,{4 + n})" for n in range(4)] + POLYGONS
    sums = {}
    ok = True
    for name in names:
        K = catalogue(name)
        rep = theorem52_check(K)
        sums[name] = rep.get("odd_sum", 0)
        ok &= rep["pass"] and rep["parity_sum"] == 0
    ok &= sums["cube4"] == 32
    report(8, ok, f"odd-index face sums even on {len(names)} odd-dimensional spheres; d=3 sums {[sums[n] for n in names[:1] + names[2:6]]}")
    assert ok


def test_criterion_09_cubation(report):
    t0 = time.perf_counter()
    eq = run_pipeline(example("equator"))
    fe = run_pipeline(example("figure_eight"))
    eq_f, fe_f = eq.f, fe.f
    a = euler_characteristic(eq.Kop) == 2 and all(x % 2 == 0 for x in eq_f)
    a &= validate_cubical(eq.Kop) is not None and verify_thm61(eq.data, eq)["pass"]
    strata = [strata_chi(fe.data, i) for i in range(3)]
    b = [x % 2 for x in fe_f] == [1, 0, 1] and strata == [3, -2, 1]
    b &= [x % 2 for x in strata] == [x % 2 for x in fe_f] and betti_numbers(fe.Kop) == [1, 0, 1]
    b &= verify_thm61(fe.data, fe)["pass"]
    c = not ut_audit(eq)["violations"] and not ut_audit(fe)["violations"]
    dt = time.perf_counter() - t0
    ok = a and b and c and dt < 60
    report(9, ok, f"(a) equator f={eq_f}: {a}; (b) figure-eight f={fe_f}, strata {strata}: {b}; (c) U(t) audit: {c}; {dt:.1f}s (limit 60s)")
    assert ok


def test_criterion_10_facet_parity_d3(report):
    spheres = {name: catalogue(name).f_vector() for name in ["cube4"] + [f"zono(4,{z})" for z in range(4, 8)]}
    rng = random.Random(7)
    for k in range(4):
        arr = random_generic_arrangement(4, 5 + k % 3, rng)
        spheres[f"random-zonotope-{k}"] = zonotope_boundary(arr).f_vector()
    cub = run_pipeline(example("octahedron_in_s3"))
    verify_cor62(cub.data, cub)
    spheres["cubation(octahedron in S^3)"] = cub.f
    bad = [n for n, f in spheres.items() if len(f) != 4 or not facet_parity_d3_holds(f)]
    ok = not bad
    report(10, ok, f"f0 = f1 = f2+f3 = 0 mod 2 on {len(spheres)} cubical 3-spheres, violations {bad}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
