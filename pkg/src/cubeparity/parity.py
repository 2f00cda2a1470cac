"""Vertex bicolorings, Eulerian degree, and the mod-2 chain operators relating
flags of K to flags of NK."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .derivative import DerivativeComplex, build_DK
from .mod2 import FlagComplex, Mod2Matrix, NoSolution, cellular_coboundary, betti_numbers, flag_boundary
from .poset import RankedPoset, euler_characteristic, link


class Obstruction(ValueError):
    """No bicoloring; ``cycle`` is a set of edges forming a 1-cycle of odd length."""

    def __init__(self, cycle: frozenset):
        super().__init__(f"not bicolorable: odd 1-cycle with {len(cycle)} edges")
        self.cycle = cycle


class NotEulerian(ValueError):
    def __init__(self, v1, v2, n1, n2):
        super().__init__(f"vertex links differ: chi={n1} at {v1}, chi={n2} at {v2}")
        self.vertices = (v1, v2)


class HypothesisFailure(ValueError):
    def __init__(self, hypothesis: str, detail: str = ""):
        super().__init__(f"{hypothesis} fails {detail}".rstrip())
        self.hypothesis = hypothesis


class TheoremViolation(AssertionError):
    pass


@dataclass(frozen=True)
class Bicoloring:
    black: frozenset
    white: frozenset

    def color(self, v) -> str:
        return "black" if v in self.black else "white"

    def is_valid(self, K: RankedPoset) -> bool:
        for e in K.elements_of_rank(1):
            ends = K.lower_covers(e)
            if sum(1 for v in ends if v in self.black) != 1:
                return False
        return True


def bicolor(K: RankedPoset) -> Bicoloring:
    """Solve delta c = (all edges) over GF(2); c is the black vertex set."""
    delta = cellular_coboundary(K, 0)
    try:
        black = delta.solve(K.elements_of_rank(1))
    except NoSolution as exc:
        raise Obstruction(exc.certificate) from None
    verts = frozenset(K.elements_of_rank(0))
    return Bicoloring(frozenset(black), verts - black)


def vertex_link_chi(K: RankedPoset, v) -> int:
    return sum((-1) ** (K.rank[k] - 1) for k in K.strictly_above[v])


def eulerian_degree(K: RankedPoset) -> int:
    first = None
    for v in K.elements_of_rank(0):
        n = vertex_link_chi(K, v)
        if first is None:
            first = (v, n)
        elif n != first[1]:
            raise NotEulerian(first[0], v, first[1], n)
    if first is None:
        raise ValueError("complex has no vertices")
    return first[1]


def color_count_check(K: RankedPoset) -> dict:
    coloring = bicolor(K)
    n = eulerian_degree(K)
    if n == 0:
        raise HypothesisFailure("n-Eulerian with n != 0", "(n = 0)")
    d = K.dim
    fb = [0] * (d + 1)
    fw = [0] * (d + 1)
    for v in K.elements_of_rank(0):
        counts = fb if v in coloring.black else fw
        for k in K.strictly_above[v]:
            counts[K.rank[k]] += 1
    alt_b = sum((-1) ** (i - 1) * fb[i] for i in range(1, d + 1))
    alt_w = sum((-1) ** (i - 1) * fw[i] for i in range(1, d + 1))
    f_b, f_w = len(coloring.black), len(coloring.white)
    ok = (
        f_b == f_w
        and n * f_b == alt_b
        and n * f_w == alt_w
        and fb[1:] == fw[1:]
        and coloring.is_valid(K)
    )
    if not ok:
        raise TheoremViolation(f"color counts {f_b}/{f_w} with n = {n}")
    return {
        "check": "color_count",
        "pass": True,
        "n": n,
        "f_b": f_b,
        "f_w": f_w,
        "incidences_b": fb[1:],
        "incidences_w": fw[1:],
    }


# chain operators


class ChainOperators:
    """sigma, gamma, tau and the P_i chains for a cubical complex K.

    Chains are frozensets of flags (tuples of element ids increasing in the
    order); flags of K use K ids and flags of NK use NK ids.
    """

    def __init__(self, K: RankedPoset, dc: DerivativeComplex | None = None):
        self.K = K
        self.dc = dc or build_DK(K)
        self.NK = self.dc.NK
        self.d = K.dim
        self.join = self.dc.join_NK
        pre: dict[int, list[int]] = {x: [] for x in K.ids}
        for e, x in self.join.items():
            pre[x].append(e)
        self.pre = {x: sorted(v) for x, v in pre.items()}

    @cached_property
    def SK(self) -> FlagComplex:
        return FlagComplex(self.K)

    @cached_property
    def SNK(self) -> FlagComplex:
        return FlagComplex(self.NK)

    def _nk_lt(self, e: int, f: int) -> bool:
        NK = self.NK
        return e != f and bool(NK.down_masks[NK.pos[f]] >> NK.pos[e] & 1)

    boundary = staticmethod(flag_boundary)

    def eps_star(self, ch: Iterable[tuple]) -> frozenset:
        eps = self.dc.eps
        return frozenset(tuple(eps[e] for e in f) for f in ch)

    def sigma(self, ch: Iterable[tuple]) -> frozenset:
        ch = frozenset(ch)
        return ch ^ self.eps_star(ch)

    def _lifts(self, candidates: list[list[int]]) -> list[tuple]:
        out = []

        def grow(prefix: tuple, i: int) -> None:
            if i == len(candidates):
                out.append(prefix)
                return
            for e in candidates[i]:
                if not prefix or self._nk_lt(prefix[-1], e):
                    grow(prefix + (e,), i + 1)

        grow((), 0)
        return out

    def gamma_flag(self, a: tuple) -> frozenset:
        return frozenset(self._lifts([self.pre[x] for x in a]))

    def tau_flag(self, a: tuple) -> frozenset:
        if len(a) < 2:
            return frozenset()
        a0 = a[0]
        K = self.K
        cands = [[e for e in self.pre[x] if K.leq(a0, self.dc.pair(e)[0])] for x in a[1:]]
        return frozenset(self._lifts(cands))

    def gamma(self, ch: Iterable[tuple]) -> frozenset:
        out: set = set()
        for a in ch:
            out ^= self.gamma_flag(a)
        return frozenset(out)

    def tau(self, ch: Iterable[tuple]) -> frozenset:
        out: set = set()
        for a in ch:
            out ^= self.tau_flag(a)
        return frozenset(out)

    def P(self, i: int) -> frozenset:
        """i-flags of K not lying entirely in ranks d-i, ..., d."""
        lo = self.d - i
        return frozenset(f for f in self.SK.of_dim(i) if any(self.K.rank[x] < lo for x in f))

    def gamma_P_expected(self, i: int) -> frozenset:
        """i-flags of NK not lying entirely in ranks d-i-1, ..., d-1."""
        lo = self.d - 1 - i
        return frozenset(f for f in self.SNK.of_dim(i) if any(self.NK.rank[e] < lo for e in f))

    def tau_P_expected(self, i: int) -> frozenset:
        """(i-1)-flags of NK not lying entirely in ranks d-i, ..., d-1."""
        lo = self.d - i
        return frozenset(f for f in self.SNK.of_dim(i - 1) if any(self.NK.rank[e] < lo for e in f))

    def section_W(self) -> frozenset:
        """One flag per eps-orbit: the one whose first pair (b, c) has b < c."""
        out = set()
        for flags in self.SNK.flags.values():
            for f in flags:
                b, c = self.dc.pair(f[0])
                if b < c:
                    out.add(f)
        return frozenset(out)

    def random_chain(self, rng: random.Random, which: str, dim: int, density: float = 0.3) -> frozenset:
        flags = (self.SK if which == "K" else self.SNK).of_dim(dim)
        return frozenset(f for f in flags if rng.random() < density)

    def check_identities(self, rng: random.Random, trials: int = 20, density: float = 0.3) -> dict:
        """Evaluate the operator identities on random chains; returns failure counts."""
        fails = {"d_sigma": 0, "d_tau": 0, "sigma_tau": 0, "gamma_image": 0}
        checked = 0
        for _ in range(trials):
            for i in range(0, self.d + 1):
                a = self.random_chain(rng, "K", i, density)
                e = self.random_chain(rng, "NK", min(i, max(self.NK.dim, 0)), density) if len(self.NK) else frozenset()
                checked += 1
                bd = self.boundary
                if bd(self.sigma(e)) != self.sigma(bd(e)):
                    fails["d_sigma"] += 1
                if bd(self.tau(a)) != self.tau(bd(a)):
                    fails["d_tau"] += 1
                if self.sigma(self.tau(a)) != bd(self.gamma(a)) ^ self.gamma(bd(a)):
                    fails["sigma_tau"] += 1
                g = self.gamma(a)
                if self.sigma(self.section_W() & g) != g:
                    fails["gamma_image"] += 1
        return {"chains": checked, "failures": fails, "pass": not any(fails.values())}


def link_chi(K: RankedPoset, x) -> int:
    return euler_characteristic(link(K, x))


def theorem52_check(K: RankedPoset, chain_level: bool = False) -> dict:
    """Check the hypotheses, then the parity conclusions, on a cubical complex K of dimension d.

    Hypotheses: every face link has even Euler characteristic, and the mod-2
    homology vanishes strictly between degree 0 and d.  Conclusion:
    d f_d == sum_i i f_i (mod 2); for odd d this is f_1 + f_3 + ... + f_{d-2} even.
    """
    d = K.dim
    f = K.f_vector()
    for x in K.ids:
        chi = link_chi(K, x)
        if chi % 2:
            raise HypothesisFailure("even link Euler characteristics", f"(face {x} has link chi {chi})")
    betti = betti_numbers(K)
    for i in range(1, d):
        if betti[i]:
            raise HypothesisFailure("H_i(K; Z/2) = 0 for 0 < i < d", f"(b_{i} = {betti[i]})")
    general = (d * f[d] + sum(i * fi for i, fi in enumerate(f))) % 2
    report = {
        "check": "thm52",
        "d": d,
        "f": f,
        "betti": betti,
        "general_congruence": general == 0,
    }
    if d % 2:
        odd_sum = sum(f[i] for i in range(1, d - 1, 2))
        report["odd_sum"] = odd_sum
        report["parity_sum"] = odd_sum % 2
    else:
        report["parity_sum"] = general
    if chain_level:
        report["chain_level"] = _chain_level(K)
    report["pass"] = report["parity_sum"] == 0 and general == 0
    if not report["pass"]:
        raise TheoremViolation(f"parity fails on a qualifying complex: {report}")
    return report


def _chain_level(K: RankedPoset) -> dict:
    """dP_i = 0, tau P_i = gamma P_(i-1), and a witness Q_i with dQ_i = P_i for 0 < i < d."""
    ops = ChainOperators(K)
    d = ops.d
    out = {"boundary_zero": True, "tau_gamma": True, "fillings": True}
    for i in range(0, d + 1):
        Pi = ops.P(i)
        if 0 < i < d:
            if ops.boundary(Pi):
                out["boundary_zero"] = False
            bd: Mod2Matrix = ops.SK.boundary(i + 1)
            try:
                Q = bd.solve(Pi)
            except NoSolution:
                out["fillings"] = False
            else:
                if ops.boundary(Q) != Pi:
                    out["fillings"] = False
        if i >= 1 and ops.tau(Pi) != ops.gamma(ops.P(i - 1)):
            out["tau_gamma"] = False
    out["pass"] = all(out.values())
    return out
