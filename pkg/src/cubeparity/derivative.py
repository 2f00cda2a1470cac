"""Derivative complexes: ordered pairs of opposite facets (NK), their
unordered quotient (DK), the swap involution and the join maps to K."""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import FPolynomial
from .poset import (
    CubicalComplex,
    NotLattice,
    RankedPoset,
    disjoint_union,
    is_order_preserving_bijection,
    link,
    product,
    validate_cubical,
)


class IsomorphismFailure(AssertionError):
    def __init__(self, invariant: str):
        super().__init__(invariant)
        self.invariant = invariant


@dataclass
class DerivativeComplex:
    K: RankedPoset
    NK: CubicalComplex
    DK: CubicalComplex
    eps: dict[int, int]
    cover_map: dict[int, int]
    join_NK: dict[int, int]
    join_DK: dict[int, int]

    def pair(self, e: int) -> tuple[int, int]:
        """The (b, c) pair of K-ids behind an NK element."""
        return self.NK.labels[e]

    def preimages(self, x: int) -> list[int]:
        """NK elements whose join is x."""
        return [e for e, j in self.join_NK.items() if j == x]


def _opposite_pairs(K: RankedPoset) -> dict[tuple[int, int], int]:
    """(b, c) -> join for all ordered pairs of facets with no common lower bound."""
    pairs: dict[tuple[int, int], int] = {}
    masks = K.down_masks
    for x in K.ids:
        facets = K.lower_covers(x)
        for b in facets:
            mb = masks[K.pos[b]]
            for c in facets:
                if b != c and not mb & masks[K.pos[c]]:
                    if (b, c) in pairs:
                        raise NotLattice(b, c)
                    pairs[(b, c)] = x
    return pairs


def build_NK(K: RankedPoset) -> CubicalComplex:
    return build_DK(K).NK


def build_DK(K: RankedPoset) -> DerivativeComplex:
    pairs = _opposite_pairs(K)
    ranks = {p: K.rank[p[0]] for p in pairs}
    covers = []
    for b2, c2 in pairs:
        for b in K.lower_covers(b2):
            for c in K.lower_covers(c2):
                if (b, c) in pairs:
                    covers.append(((b, c), (b2, c2)))
    NK = validate_cubical(RankedPoset.from_labeled(ranks, covers), require_lattice=False)

    def orbit(p):
        return (p[0], p[1]) if p[0] < p[1] else (p[1], p[0])

    d_ranks = {orbit(p): r for p, r in ranks.items()}
    d_covers = {(orbit(a), orbit(b)) for a, b in covers}
    DK = validate_cubical(RankedPoset.from_labeled(d_ranks, d_covers), require_lattice=False)

    eps = {NK.id_of(p): NK.id_of((p[1], p[0])) for p in pairs}
    cover_map = {NK.id_of(p): DK.id_of(orbit(p)) for p in pairs}
    join_NK = {NK.id_of(p): x for p, x in pairs.items()}
    join_DK = {DK.id_of(orbit(p)): x for p, x in pairs.items()}
    return DerivativeComplex(K, NK, DK, eps, cover_map, join_NK, join_DK)


def derivative_identity_holds(K: RankedPoset, dc: DerivativeComplex | None = None) -> bool:
    """f(DK, t) == d/dt f(K, t) and f(NK) == 2 f(DK)."""
    dc = dc or build_DK(K)
    fk = FPolynomial(K.f_vector()).derivative().trimmed()
    fd = FPolynomial(dc.DK.f_vector()).trimmed()
    fn = FPolynomial(dc.NK.f_vector()).trimmed()
    return fk == fd and fn == (fd * 2).trimmed()


def derivation_check(K1: RankedPoset, K2: RankedPoset) -> dict:
    """Explicit isomorphism D(K1 x K2) -> (DK1 x K2) + (K1 x DK2).

    A pair of opposite facets of (x1, x2) either varies only the first factor
    or only the second (mixed pairs share a face); that dichotomy is the map.
    """
    P = product(K1, K2)
    dP = build_DK(P)
    d1, d2 = build_DK(K1), build_DK(K2)
    left_part = product(d1.DK, K2)
    right_part = product(K1, d2.DK)
    target = disjoint_union(left_part, right_part)

    phi = {}
    for e in dP.DK.ids:
        p, q = dP.DK.labels[e]
        (a1, b1), (a2, b2) = P.labels[p], P.labels[q]
        if b1 == b2:
            pair = (a1, a2) if a1 < a2 else (a2, a1)
            img = target.id_of((0, left_part.id_of((d1.DK.id_of(pair), b1))))
        elif a1 == a2:
            pair = (b1, b2) if b1 < b2 else (b2, b1)
            img = target.id_of((1, right_part.id_of((a1, d2.DK.id_of(pair)))))
        else:
            raise IsomorphismFailure(f"pair {P.labels[p]}, {P.labels[q]} differs in both factors")
        phi[e] = img

    f_left = FPolynomial(dP.DK.f_vector()).trimmed()
    f1, f2 = FPolynomial(K1.f_vector()), FPolynomial(K2.f_vector())
    f_oracle = (f1.derivative() * f2 + f1 * f2.derivative()).trimmed() if len(f1) and len(f2) else FPolynomial(())
    if f_left != f_oracle:
        raise IsomorphismFailure(f"f-vectors differ: {f_left.as_list()} vs {f_oracle.as_list()}")
    if not is_order_preserving_bijection(dP.DK, target, phi):
        raise IsomorphismFailure("explicit map does not carry covers onto covers")
    return {
        "check": "derivation",
        "pass": True,
        "f": f_left.as_list(),
        "f_identity": True,
        "bijection": sorted([e, phi[e]] for e in phi),
    }


def strata_counts(K: RankedPoset, dc: DerivativeComplex | None = None) -> dict[int, int]:
    """i -> (-1)^(d-i) * closed-support Euler characteristic of the i-fold locus.

    A point in the open dual cell of a face x has as many preimages as there
    are DK elements joining to x; that cell contributes (-1)^(d - rank x).
    For a cubical d-manifold the result equals f_i(K).
    """
    dc = dc or build_DK(K)
    d = K.dim
    mult = {x: 0 for x in K.ids}
    for x in dc.join_DK.values():
        mult[x] += 1
    chi: dict[int, int] = {}
    for x, m in mult.items():
        chi[m] = chi.get(m, 0) + (-1) ** (d - K.rank[x])
    return {i: (-1) ** (d - i) * c for i, c in sorted(chi.items())}


def link_maps_are_isomorphisms(dc: DerivativeComplex) -> bool:
    """For each e in NK, j restricted to the link of e is an isomorphism onto link(j(e))."""
    for e in dc.NK.ids:
        L_e = link(dc.NK, e)
        L_x = link(dc.K, dc.join_NK[e])
        phi = {u: dc.join_NK[u] for u in L_e.ids}
        if not is_order_preserving_bijection(L_e, L_x, phi):
            return False
    return True


def eps_is_free_involutive_automorphism(dc: DerivativeComplex) -> bool:
    eps = dc.eps
    if any(eps[eps[e]] != e or eps[e] == e for e in eps):
        return False
    return is_order_preserving_bijection(dc.NK, dc.NK, eps)
