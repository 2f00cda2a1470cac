"""f-polynomials, the zonotopal f-vector family, its affine lattice, and
modular-equation mining by Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence

from .normal_forms import hnf_basis, smith_normal_form


@dataclass(frozen=True)
class FPolynomial:
    """Integer polynomial sum f_i t^i, stored as its coefficient tuple."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def _pad(self, other: "FPolynomial") -> tuple[list[int], list[int]]:
        n = max(len(self), len(other))
        return [self[i] for i in range(n)], [other[i] for i in range(n)]

    def __add__(self, other: "FPolynomial") -> "FPolynomial":
        a, b = self._pad(other)
        return FPolynomial(x + y for x, y in zip(a, b))

    def __sub__(self, other: "FPolynomial") -> "FPolynomial":
        a, b = self._pad(other)
        return FPolynomial(x - y for x, y in zip(a, b))

    def __mul__(self, other) -> "FPolynomial":
        if isinstance(other, int):
            return FPolynomial(other * c for c in self.coeffs)
        out = [0] * (len(self) + len(other) - 1) if len(self) and len(other) else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return FPolynomial(out)

    __rmul__ = __mul__

    def trimmed(self) -> "FPolynomial":
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        return FPolynomial(c)

    def times_one_plus_t(self) -> "FPolynomial":
        return self * FPolynomial((1, 1))

    def derivative(self) -> "FPolynomial":
        return FPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def evaluate(self, t: int) -> int:
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def as_list(self) -> list[int]:
        return list(self.coeffs)


def cube_boundary_fpoly(d: int) -> FPolynomial:
    """(2+t)^(d+1) - t^(d+1): boundary of the (d+1)-cube."""
    c = [comb(d + 1, i) * 2 ** (d + 1 - i) for i in range(d + 1)]
    return FPolynomial(c)


@lru_cache(maxsize=None)
def F(d: int, n: int) -> FPolynomial:
    """f-polynomial of the boundary of a cubical (d+1)-zonotope with n+d+1 zones."""
    if d < 0 or n < 0:
        raise ValueError("d and n must be non-negative")
    if d == 0:
        return FPolynomial((2,))
    if n == 0:
        return cube_boundary_fpoly(d)
    return F(d, n - 1) + F(d - 1, n).times_one_plus_t()


# affine lattices


class NotStabilized(RuntimeError):
    pass


@dataclass(frozen=True)
class AffineLattice:
    """base + Z-span(generators); generators kept as a Hermite basis."""

    base: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "AffineLattice":
        base = tuple(points[0])
        diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
        return cls.from_generators(base, diffs)

    @classmethod
    def from_generators(cls, base: Sequence[int], gens: Sequence[Sequence[int]]) -> "AffineLattice":
        m = len(base)
        return cls(tuple(base), tuple(tuple(r) for r in hnf_basis([list(g) for g in gens], m)))

    @property
    def ambient(self) -> int:
        return len(self.base)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def linear(self) -> "AffineLattice":
        return AffineLattice((0,) * self.ambient, self.generators)

    def contains(self, v: Sequence[int]) -> bool:
        try:
            coordinates_in(self.generators, [[a - b for a, b in zip(v, self.base)]])
        except ValueError:
            return False
        return True


def coordinates_in(basis: Sequence[Sequence[int]], rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer coordinates of ``rows`` in an echelon (Hermite) basis; ValueError if absent."""
    pivots = [next(j for j, x in enumerate(b) if x) for b in basis]
    out = []
    for row in rows:
        a = list(row)
        coords = []
        for b, p in zip(basis, pivots):
            if a[p] % b[p]:
                raise ValueError("vector not in lattice")
            c = a[p] // b[p]
            coords.append(c)
            if c:
                a = [x - c * y for x, y in zip(a, b)]
        if any(a):
            raise ValueError("vector not in lattice")
        out.append(coords)
    return out


def span_E(d: int, count: int | None = None) -> AffineLattice:
    """Z-affine span of F(d, 0..count), checked stable against one more generator."""
    bound = (d + 1) // 2
    if count is None:
        # the span of F(d, 0..d) is already the full lattice for d <= 10
        count = max(d, bound + 1)
    if count < bound + 1 and d > 0:
        raise ValueError(f"count must be at least {bound + 1}")
    pts = [F(d, i).as_list() for i in range(count + 1)]
    L = AffineLattice.from_points(pts)
    bigger = AffineLattice.from_points(pts + [F(d, count + 1).as_list()])
    if bigger != L:
        raise NotStabilized(f"span of F({d}, 0..{count}) grows with one more generator")
    return L


def saturation(L: AffineLattice) -> AffineLattice:
    """Integral points of the Q-span of L's difference lattice (same base)."""
    if not L.generators:
        return L
    snf = smith_normal_form([list(g) for g in L.generators], L.ambient)
    return AffineLattice.from_generators(L.base, snf.V_inv[: snf.rank])


def smith_invariants(L: AffineLattice, V: AffineLattice) -> list[int]:
    """Invariant factors of V/L, where L is a full-rank sublattice of V."""
    if not L.generators:
        return []
    coords = coordinates_in(V.generators, L.generators)
    return smith_normal_form(coords, len(V.generators)).invariants


# modular equations


@dataclass(frozen=True)
class ModularEquation:
    """sum coefficients_i * x_i == constant  (mod modulus); modulus 0 means exact."""

    coefficients: tuple[int, ...]
    constant: int
    modulus: int

    def value(self, v: Sequence[int]) -> int:
        s = sum(a * b for a, b in zip(self.coefficients, v))
        return s % self.modulus if self.modulus else s

    def holds(self, v: Sequence[int]) -> bool:
        return self.value(v) == self.constant

    def to_dict(self) -> dict:
        return {"coefficients": list(self.coefficients), "constant": self.constant, "modulus": self.modulus}


def mine_modular_equations(vectors: Sequence[Sequence[int]], include_exact: bool = True) -> list[ModularEquation]:
    """Generating set of the affine and modular equations satisfied by all vectors.

    With D the matrix of differences from the first vector and U D V = S its
    Smith form, the columns of V past the rank span the integer kernel (exact
    equations) and the column for each invariant factor s > 1 gives a
    surjective equation mod s.
    """
    if not vectors:
        raise ValueError("need at least one vector")
    base = [int(x) for x in vectors[0]]
    m = len(base)
    diffs = [[int(a) - b for a, b in zip(v, base)] for v in vectors[1:]]
    snf = smith_normal_form(diffs, m)
    cols = [[snf.V[i][j] for i in range(m)] for j in range(m)]
    out = []
    for j, s in enumerate(snf.invariants):
        if s > 1:
            a = tuple(c % s for c in cols[j])
            out.append(ModularEquation(a, sum(x * y for x, y in zip(a, base)) % s, s))
    if include_exact:
        for j in range(snf.rank, m):
            a = list(cols[j])
            g = 0
            for c in a:
                g = gcd(g, c)
            a = [c // g for c in a]
            if next(c for c in a if c) < 0:
                a = [-c for c in a]
            out.append(ModularEquation(tuple(a), sum(x * y for x, y in zip(a, base)), 0))
    return out


class Violation(AssertionError):
    def __init__(self, name: str, f: Sequence[int]):
        super().__init__(f"{name}: f = {list(f)} breaks f0 = f1 = f2+f3 = 0 mod 2")
        self.name = name


def facet_parity_d3_holds(f: Sequence[int]) -> bool:
    return f[0] % 2 == 0 and f[1] % 2 == 0 and (f[2] + f[3]) % 2 == 0


def verify_facet_parity_d3(named_fvectors: dict[str, Sequence[int]] | None = None) -> dict:
    """Check the d = 3 congruences on cubical 3-spheres (catalogue plus F(3, n))."""
    if named_fvectors is None:
        from .builders import catalogue

        named_fvectors = {name: catalogue(name).f_vector() for name in ("cube4", "zono(4,4)", "zono(4,5)", "zono(4,6)", "zono(4,7)")}
        named_fvectors.update({f"F(3,{n})": F(3, n).as_list() for n in range(6)})
    checked = {}
    for name, f in named_fvectors.items():
        if len(f) != 4:
            raise ValueError(f"{name} is not 3-dimensional")
        if not facet_parity_d3_holds(f):
            raise Violation(name, f)
        checked[name] = list(f)
    return {"check": "facet_parity_d3", "pass": True, "checked": checked}
