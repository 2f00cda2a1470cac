"""Constructors for the example families: cubes, polygons, zonotope boundaries,
antipodal quotients, and a named catalogue of small cubical complexes."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .poset import CubicalComplex, PosetError, RankedPoset, disjoint_union, product, validate_cubical


class NotGeneric(ValueError):
    def __init__(self, subset):
        super().__init__(f"normals {list(subset)} are linearly dependent")
        self.subset = tuple(subset)


class NotCentrallySymmetric(ValueError):
    pass


class UnknownName(KeyError):
    pass


# exact linear algebra over Q


def _row_reduce(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(_row_reduce(rows)[1]) if rows else 0


def rational_nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    red, pivots = _row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# arrangements and covectors


@dataclass(frozen=True)
class Arrangement:
    """Central hyperplane arrangement given by rational normal vectors."""

    normals: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.normals:
            raise ValueError("arrangement needs at least one normal")
        if len({len(v) for v in self.normals}) != 1:
            raise ValueError("normals have different lengths")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Iterable]):
        return cls(tuple(tuple(Fraction(x) for x in v) for v in vectors))

    @property
    def ambient_dim(self) -> int:
        return len(self.normals[0])

    def __len__(self) -> int:
        return len(self.normals)

    def check_generic(self) -> None:
        """Every subset of at most ambient_dim normals must be independent."""
        k = min(len(self), self.ambient_dim)
        for subset in itertools.combinations(range(len(self)), k):
            if rational_rank([self.normals[i] for i in subset]) < k:
                raise NotGeneric(subset)

    def is_generic(self) -> bool:
        try:
            self.check_generic()
        except NotGeneric:
            return False
        return True

    def signs(self, point: Sequence) -> tuple[int, ...]:
        return tuple(_sign(sum(a * b for a, b in zip(v, point))) for v in self.normals)

    def cocircuits(self) -> set[tuple[int, ...]]:
        """Sign vectors of the rays: one line per (ambient_dim - 1)-subset of normals."""
        dim = self.ambient_dim
        out = set()
        if dim == 1:
            out.add(self.signs((1,)))
            out.add(self.signs((-1,)))
            return out
        for subset in itertools.combinations(range(len(self)), dim - 1):
            null = rational_nullspace([self.normals[i] for i in subset], dim)
            if len(null) != 1:
                raise NotGeneric(subset)
            x = self.signs(null[0])
            if sum(1 for s in x if s == 0) != dim - 1:
                zeros = [i for i, s in enumerate(x) if s == 0]
                raise NotGeneric(zeros[:dim])
            out.add(x)
            out.add(tuple(-s for s in x))
        return out

    def covectors(self) -> set[tuple[int, ...]]:
        """All nonzero covectors.

        Built level by level: composing a covector with a cocircuit that is not
        contained in its zero set yields every covector with one zero fewer.
        Exact as long as the arrangement is generic.
        """
        cocirc = self.cocircuits()
        levels = [set(cocirc)]
        zeros = self.ambient_dim - 1
        while zeros > 0:
            nxt = set()
            for y in levels[-1]:
                for r in cocirc:
                    c = tuple(a if a != 0 else b for a, b in zip(y, r))
                    if sum(1 for s in c if s == 0) == zeros - 1:
                        nxt.add(c)
            levels.append(nxt)
            zeros -= 1
        return set().union(*levels)


def moment_curve_arrangement(ambient_dim: int, n: int) -> Arrangement:
    """Normals (1, k, k^2, ...) for k = 1..n; Vandermonde minors make them generic."""
    return Arrangement.from_vectors([[k**e for e in range(ambient_dim)] for k in range(1, n + 1)])


def random_generic_arrangement(ambient_dim: int, n: int, rng: random.Random, bound: int = 6) -> Arrangement:
    while True:
        arr = Arrangement.from_vectors(
            [[rng.randint(-bound, bound) for _ in range(ambient_dim)] for _ in range(n)]
        )
        if arr.is_generic():
            return arr


def covector_poset(covectors: Iterable[tuple[int, ...]]) -> RankedPoset:
    """Face poset of a zonotope boundary: rank = number of zeros, going up zeroes coordinates."""
    cov = set(covectors)
    ranks = {x: sum(1 for s in x if s == 0) for x in cov}
    covers = []
    for x in cov:
        for i, s in enumerate(x):
            if s != 0:
                y = x[:i] + (0,) + x[i + 1 :]
                if y in cov:
                    covers.append((x, y))
    return RankedPoset.from_labeled(ranks, covers)


def zonotope_boundary(arrangement: Arrangement) -> CubicalComplex:
    arrangement.check_generic()
    if len(arrangement) < arrangement.ambient_dim:
        raise ValueError("need at least ambient_dim normals")
    return validate_cubical(covector_poset(arrangement.covectors()))


def cube(n: int) -> CubicalComplex:
    """Face poset of the solid n-cube (labels in {-1,0,1}^n, 0 = free coordinate)."""
    return validate_cubical(covector_poset(itertools.product((-1, 0, 1), repeat=n)))


def cube_boundary(n: int) -> CubicalComplex:
    """Boundary of the n-cube, a cubical (n-1)-sphere."""
    if n < 1:
        raise ValueError("cube_boundary needs n >= 1")
    faces = [x for x in itertools.product((-1, 0, 1), repeat=n) if any(x)]
    return validate_cubical(covector_poset(faces))


def polygon(m: int) -> CubicalComplex:
    if m < 2:
        raise ValueError("polygon needs at least two vertices")
    ranks = {("v", i): 0 for i in range(m)}
    ranks.update({("e", i): 1 for i in range(m)})
    covers = [(("v", i), ("e", i)) for i in range(m)] + [(("v", (i + 1) % m), ("e", i)) for i in range(m)]
    return validate_cubical(RankedPoset.from_labeled(ranks, covers), require_lattice=m > 2)


def antipodal_quotient(Z: RankedPoset) -> CubicalComplex:
    """Identify each covector-labelled face X with -X.

    The result is a regular cubical cell complex (every ideal is a cube), but
    its bounded extension need not be a lattice: the cubical RP^2 coming from
    the 3-cube already has two edges lying in two common squares.
    """
    labels = {x: Z.label(x) for x in Z.ids}
    present = set(labels.values())
    rep = {}
    for x, lab in labels.items():
        if not isinstance(lab, tuple) or not all(isinstance(s, int) for s in lab):
            raise NotCentrallySymmetric("faces carry no covector labels")
        neg = tuple(-s for s in lab)
        if neg not in present or neg == lab:
            raise NotCentrallySymmetric(f"face {lab} has no antipode")
        rep[x] = max(lab, neg)
    ranks = {rep[x]: Z.rank[x] for x in Z.ids}
    covers = {(rep[a], rep[b]) for a, b in Z.covers}
    return validate_cubical(RankedPoset.from_labeled(ranks, covers), require_lattice=False)


# catalogue


def _split_top(expr: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


_SOLID_ALIASES = {"point": 0, "interval": 1, "square": 2}


@lru_cache(maxsize=None)
def catalogue(name: str) -> CubicalComplex:
    """Build a named complex.

    Names: ``cubeN`` (boundary of the N-cube), ``solidN`` / point / interval /
    square (solid cubes), ``Mgon``, ``zono(D,Z)`` (boundary of a D-dimensional
    cubical zonotope with Z zones), ``rp(NAME)`` (antipodal quotient), and
    ``A*B`` / ``A+B`` for products and disjoint unions.
    """
    name = name.strip()
    terms = _split_top(name, "+")
    if len(terms) > 1:
        out = catalogue(terms[0])
        for t in terms[1:]:
            out = validate_cubical(disjoint_union(out, catalogue(t)), require_lattice=False)
        return out
    factors = _split_top(name, "*")
    if len(factors) > 1:
        out = catalogue(factors[0])
        for f in factors[1:]:
            out = validate_cubical(product(out, catalogue(f)), require_lattice=False)
        return out
    if name in _SOLID_ALIASES:
        return cube(_SOLID_ALIASES[name])
    m = re.fullmatch(r"cube(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return cube_boundary(int(m.group(1)))
    m = re.fullmatch(r"solid(\d+)", name)
    if m:
        return cube(int(m.group(1)))
    m = re.fullmatch(r"(\d+)gon", name)
    if m and int(m.group(1)) >= 2:
        return polygon(int(m.group(1)))
    m = re.fullmatch(r"zono\(\s*(\d+)\s*,\s*(\d+)\s*\)", name)
    if m:
        dim, zones = int(m.group(1)), int(m.group(2))
        if dim < 1 or zones < dim:
            raise UnknownName(name)
        return zonotope_boundary(moment_curve_arrangement(dim, zones))
    m = re.fullmatch(r"rp\((.*)\)", name)
    if m:
        try:
            return antipodal_quotient(catalogue(m.group(1)))
        except (NotCentrallySymmetric, PosetError) as exc:
            raise UnknownName(f"{name}: {exc}") from exc
    raise UnknownName(name)


def catalogue_names() -> list[str]:
    """The published catalogue list."""
    names = [f"cube{n}" for n in range(1, 7)]
    names += [f"{2 * n}gon" for n in range(2, 9)]
    names += [f"zono({d + 1},{n + d + 1})" for d in range(1, 4) for n in range(0, 4)]
    names += ["point", "interval", "square", "solid3"]
    names += ["4gon*4gon", "4gon*interval", "cube3*interval", "6gon*4gon", "cube3+4gon"]
    names += ["rp(cube3)", "rp(zono(2,3))", "rp(zono(3,4))", "rp(cube4)"]
    return names


def catalogue_spheres(max_dim: int = 5) -> list[str]:
    """Catalogue names that are cubical spheres of dimension >= 1."""
    out = [f"cube{n}" for n in range(2, max_dim + 2)]
    out += [f"{2 * n}gon" for n in range(2, 9)]
    out += [f"zono({d + 1},{n + d + 1})" for d in range(1, min(3, max_dim) + 1) for n in range(0, 4)]
    return list(dict.fromkeys(out))
