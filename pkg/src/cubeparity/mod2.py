"""GF(2) linear algebra on cells and flags.

A :class:`Mod2Matrix` stores one bit-packed Python int per *domain* basis
element: the image of that element as a bitmask over the codomain basis.  So
the "row" of an edge in the cellular boundary is the set of its two
endpoints.  Chains are frozensets of basis ids; addition is symmetric
difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .poset import RankedPoset, iter_bits

Chain = frozenset


def chain(items: Iterable[Hashable] = ()) -> frozenset:
    """Sum of basis elements mod 2 (repeated items cancel)."""
    out: set = set()
    for x in items:
        out ^= {x}
    return frozenset(out)


class NoSolution(ValueError):
    """Target is not in the image; ``certificate`` is a codomain functional
    vanishing on the image but not on the target (given as a set of ids)."""

    def __init__(self, certificate: frozenset):
        super().__init__(f"no solution; certificate of size {len(certificate)}")
        self.certificate = certificate


@dataclass
class Mod2Matrix:
    dom: tuple
    cod: tuple
    images: list[int]
    _dom_index: dict = field(init=False, repr=False)
    _cod_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.dom = tuple(self.dom)
        self.cod = tuple(self.cod)
        self._dom_index = {x: i for i, x in enumerate(self.dom)}
        self._cod_index = {x: i for i, x in enumerate(self.cod)}
        if len(self.images) != len(self.dom):
            raise ValueError("one image per domain element required")

    @classmethod
    def from_map(cls, dom: Sequence, cod: Sequence, image_of) -> "Mod2Matrix":
        cidx = {x: i for i, x in enumerate(cod)}
        images = []
        for x in dom:
            m = 0
            for y in image_of(x):
                m ^= 1 << cidx[y]
            images.append(m)
        return cls(tuple(dom), tuple(cod), images)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.dom), len(self.cod)

    def encode(self, items: Iterable, side: str = "cod") -> int:
        idx = self._cod_index if side == "cod" else self._dom_index
        m = 0
        for x in items:
            m ^= 1 << idx[x]
        return m

    def decode(self, mask: int, side: str = "cod") -> frozenset:
        basis = self.cod if side == "cod" else self.dom
        return frozenset(basis[i] for i in iter_bits(mask))

    def apply(self, items: Iterable) -> frozenset:
        m = 0
        for x in items:
            m ^= self.images[self._dom_index[x]]
        return self.decode(m)

    def compose(self, first: "Mod2Matrix") -> "Mod2Matrix":
        """``self`` after ``first``."""
        if first.cod != self.dom:
            raise ValueError("incompatible bases")
        images = []
        for img in first.images:
            m = 0
            for i in iter_bits(img):
                m ^= self.images[i]
            images.append(m)
        return Mod2Matrix(first.dom, self.cod, images)

    def transpose(self) -> "Mod2Matrix":
        images = [0] * len(self.cod)
        for j, img in enumerate(self.images):
            for i in iter_bits(img):
                images[i] |= 1 << j
        return Mod2Matrix(self.cod, self.dom, images)

    def is_zero(self) -> bool:
        return not any(self.images)

    def _eliminate(self) -> tuple[dict[int, tuple[int, int]], list[int]]:
        """Pivot table {top bit: (vector, domain combo)} and kernel combos."""
        pivots: dict[int, tuple[int, int]] = {}
        kernel = []
        for j, img in enumerate(self.images):
            v, c = img, 1 << j
            while v:
                h = v.bit_length() - 1
                if h in pivots:
                    pv, pc = pivots[h]
                    v ^= pv
                    c ^= pc
                else:
                    pivots[h] = (v, c)
                    break
            if not v:
                kernel.append(c)
        return pivots, kernel

    def rank(self) -> int:
        return len(self._eliminate()[0])

    def nullity(self) -> int:
        return len(self.dom) - self.rank()

    def kernel(self) -> list[frozenset]:
        return [self.decode(c, "dom") for c in self._eliminate()[1]]

    def solve(self, target: Iterable) -> frozenset:
        """A domain chain x with M x = target, else NoSolution with a certificate."""
        pivots, _ = self._eliminate()
        t = self.encode(target)
        v, c = t, 0
        while v:
            h = v.bit_length() - 1
            if h not in pivots:
                break
            pv, pc = pivots[h]
            v ^= pv
            c ^= pc
        if not v:
            return self.decode(c, "dom")
        raise NoSolution(self.decode(self._annihilator_witness(pivots, t)))

    def _annihilator_witness(self, pivots: dict[int, tuple[int, int]], t: int) -> int:
        rows = {h: v for h, (v, _) in pivots.items()}
        for h in sorted(rows, reverse=True):
            for h2 in rows:
                if h2 != h and rows[h2] >> h & 1:
                    rows[h2] ^= rows[h]
        for f in range(len(self.cod)):
            if f in rows:
                continue
            phi = 1 << f
            for h, v in rows.items():
                if v >> f & 1:
                    phi |= 1 << h
            if bin(phi & t).count("1") % 2:
                return phi
        raise AssertionError("target in image but reduction failed")

    def dump_lines(self) -> list[str]:
        """Sorted 'domain_index codomain_index' lines for the nonzero entries."""
        lines = [(j, i) for j, img in enumerate(self.images) for i in iter_bits(img)]
        return [f"{j} {i}" for j, i in sorted(lines)]


# cellular chains of a regular cell complex given by its face poset


def cellular_boundary(K: RankedPoset, i: int) -> Mod2Matrix:
    """C_i -> C_{i-1}: each i-cell maps to the sum of its facets."""
    dom = K.elements_of_rank(i)
    cod = K.elements_of_rank(i - 1) if i > 0 else []
    return Mod2Matrix.from_map(dom, cod, lambda x: K.lower_covers(x) if i > 0 else ())


def cellular_coboundary(K: RankedPoset, i: int) -> Mod2Matrix:
    """C^i -> C^{i+1}: each i-cell maps to the sum of the cells it is a facet of."""
    return Mod2Matrix.from_map(K.elements_of_rank(i), K.elements_of_rank(i + 1), K.upper_covers)


# order complex (flag) chains


class FlagComplex:
    """Flags of a poset (optionally restricted to a subset given as a position mask)."""

    def __init__(self, P: RankedPoset, mask: int | None = None):
        self.P = P
        full = (1 << len(P.ids)) - 1
        mask = full if mask is None else mask
        above = {}
        for i in iter_bits(mask):
            above[P.ids[i]] = tuple(P.ids_of_mask(P.up_masks[i] & mask & ~(1 << i)))
        by_dim: dict[int, list[tuple]] = {}
        stack = [(e,) for e in above]
        while stack:
            c = stack.pop()
            by_dim.setdefault(len(c) - 1, []).append(c)
            for y in above[c[-1]]:
                stack.append(c + (y,))
        self.flags = {k: sorted(v) for k, v in sorted(by_dim.items())}

    @property
    def dim(self) -> int:
        return max(self.flags, default=-1)

    def of_dim(self, i: int) -> list[tuple]:
        return self.flags.get(i, [])

    def boundary(self, i: int) -> Mod2Matrix:
        dom = self.of_dim(i)
        cod = self.of_dim(i - 1) if i > 0 else []
        return Mod2Matrix.from_map(dom, cod, flag_boundary_terms if i > 0 else (lambda _: ()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self.flags.items())

    def betti(self) -> list[int]:
        return _betti([self.boundary(i) for i in range(self.dim + 2)], self.dim)


def flag_boundary_terms(f: tuple) -> list[tuple]:
    return [f[:k] + f[k + 1 :] for k in range(len(f))] if len(f) > 1 else []


def flag_boundary(ch: Iterable[tuple]) -> frozenset:
    """Simplicial boundary mod 2 of a chain of flags (vertices have zero boundary)."""
    out: set = set()
    for f in ch:
        for g in flag_boundary_terms(f):
            out ^= {g}
    return frozenset(out)


def _betti(boundaries: list[Mod2Matrix], top: int) -> list[int]:
    ranks = [b.rank() for b in boundaries]
    out = []
    for i in range(top + 1):
        out.append(len(boundaries[i].dom) - ranks[i] - (ranks[i + 1] if i + 1 < len(ranks) else 0))
    return out


def betti_numbers(K: RankedPoset, method: str = "cellular") -> list[int]:
    """Mod-2 Betti numbers b_0..b_dim, from cellular chains or from the order complex."""
    if method == "order":
        return FlagComplex(K).betti()
    if method != "cellular":
        raise ValueError(method)
    d = K.dim
    return _betti([cellular_boundary(K, i) for i in range(d + 2)], d)


def homology_rank(K: RankedPoset, i: int, method: str = "cellular") -> int:
    b = betti_numbers(K, method)
    return b[i] if 0 <= i < len(b) else 0
