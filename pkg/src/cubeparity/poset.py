"""Ranked posets: storage, navigation, cubicality validation and poset algebra.

Elements are opaque integer ids.  Internally every element also has a
position in a rank-sorted order, and order ideals / filters are kept as
bitmasks over those positions, which keeps the lattice and cube checks cheap
at desk scale.
"""

from __future__ import annotations

import json
from functools import cached_property
from math import comb
from typing import Hashable, Iterable, Iterator, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher


class PosetError(ValueError):
    pass


class NotGraded(PosetError):
    pass


class UnknownElement(PosetError, KeyError):
    def __init__(self, element):
        super().__init__(f"unknown element {element!r}")
        self.element = element


class IdealNotCube(PosetError):
    def __init__(self, element, reason: str = ""):
        super().__init__(f"order ideal of {element} is not a cube face poset {reason}".rstrip())
        self.element = element


class NotLattice(PosetError):
    def __init__(self, x, y):
        super().__init__(f"elements {x} and {y} have no unique join")
        self.pair = (x, y)


def canonical_key(obj) -> tuple:
    """Total-order key for nested labels (ints, strings, tuples, frozensets)."""
    if isinstance(obj, bool):
        return (0, int(obj))
    if isinstance(obj, int):
        return (0, obj)
    if isinstance(obj, str):
        return (1, obj)
    if isinstance(obj, (tuple, list)):
        return (2, tuple(canonical_key(o) for o in obj))
    if isinstance(obj, (set, frozenset)):
        return (3, tuple(sorted(canonical_key(o) for o in obj)))
    if obj is None:
        return (-1,)
    return (4, repr(obj))


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(o) for o in obj), key=canonical_key)
    return obj


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RankedPoset:
    """A finite graded poset given by its Hasse diagram.

    ``ranks`` maps element id to rank, ``covers`` holds (lower, upper) pairs.
    Every cover must raise the rank by exactly one and every minimal element
    must have rank 0; both are checked here, so anything constructed is graded.
    ``labels`` optionally attaches a hashable label to each element.
    """

    def __init__(
        self,
        ranks: Mapping[int, int],
        covers: Iterable[tuple[int, int]],
        labels: Mapping[int, Hashable] | None = None,
    ):
        self.rank: dict[int, int] = {int(k): int(v) for k, v in ranks.items()}
        self.ids: tuple[int, ...] = tuple(sorted(self.rank, key=lambda e: (self.rank[e], e)))
        self.pos: dict[int, int] = {e: i for i, e in enumerate(self.ids)}
        cov = sorted(set((int(a), int(b)) for a, b in covers))
        up: dict[int, list[int]] = {e: [] for e in self.ids}
        down: dict[int, list[int]] = {e: [] for e in self.ids}
        for a, b in cov:
            if a not in self.rank:
                raise UnknownElement(a)
            if b not in self.rank:
                raise UnknownElement(b)
            if self.rank[b] != self.rank[a] + 1:
                raise NotGraded(f"cover {a} < {b} jumps from rank {self.rank[a]} to {self.rank[b]}")
            up[a].append(b)
            down[b].append(a)
        for e in self.ids:
            if self.rank[e] < 0:
                raise NotGraded(f"element {e} has negative rank")
            if not down[e] and self.rank[e] != 0:
                raise NotGraded(f"minimal element {e} has rank {self.rank[e]}")
        self.covers: tuple[tuple[int, int], ...] = tuple(cov)
        self._up = {e: tuple(v) for e, v in up.items()}
        self._down = {e: tuple(v) for e, v in down.items()}
        self.labels: dict[int, Hashable] = dict(labels) if labels else {}
        self._by_label: dict[Hashable, int] | None = None

    @classmethod
    def from_labeled(cls, ranks: Mapping[Hashable, int], covers: Iterable[tuple[Hashable, Hashable]]):
        """Build from hashable keys; ids are assigned in canonical (rank, key) order."""
        keys = sorted(ranks, key=lambda k: (ranks[k], canonical_key(k)))
        ident = {k: i for i, k in enumerate(keys)}
        return cls(
            {ident[k]: ranks[k] for k in keys},
            [(ident[a], ident[b]) for a, b in covers],
            {ident[k]: k for k in keys},
        )

    # navigation

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __contains__(self, x) -> bool:
        return x in self.rank

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankedPoset):
            return NotImplemented
        return self.rank == other.rank and self.covers == other.covers

    def __hash__(self):
        return hash((tuple(sorted(self.rank.items())), self.covers))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(f={self.f_vector()})"

    def _check(self, x) -> None:
        if x not in self.rank:
            raise UnknownElement(x)

    @property
    def dim(self) -> int:
        return max(self.rank.values(), default=-1)

    def upper_covers(self, x) -> tuple[int, ...]:
        self._check(x)
        return self._up[x]

    def lower_covers(self, x) -> tuple[int, ...]:
        self._check(x)
        return self._down[x]

    def elements_of_rank(self, r: int) -> list[int]:
        return [e for e in self.ids if self.rank[e] == r]

    def f_vector(self) -> list[int]:
        f = [0] * (self.dim + 1)
        for r in self.rank.values():
            f[r] += 1
        return f

    def label(self, x) -> Hashable:
        return self.labels.get(x, x)

    def id_of(self, label: Hashable) -> int:
        if self._by_label is None:
            self._by_label = {v: k for k, v in self.labels.items()}
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownElement(label) from None

    @cached_property
    def down_masks(self) -> list[int]:
        """Bitmask of the closed order ideal of each position."""
        masks = [0] * len(self.ids)
        for i, e in enumerate(self.ids):
            m = 1 << i
            for c in self._down[e]:
                m |= masks[self.pos[c]]
            masks[i] = m
        return masks

    @cached_property
    def up_masks(self) -> list[int]:
        masks = [0] * len(self.ids)
        for i in range(len(self.ids) - 1, -1, -1):
            e = self.ids[i]
            m = 1 << i
            for c in self._up[e]:
                m |= masks[self.pos[c]]
            masks[i] = m
        return masks

    def ids_of_mask(self, mask: int) -> list[int]:
        return [self.ids[i] for i in iter_bits(mask)]

    def leq(self, x, y) -> bool:
        self._check(x)
        self._check(y)
        return bool(self.down_masks[self.pos[y]] >> self.pos[x] & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    @cached_property
    def strictly_above(self) -> dict[int, tuple[int, ...]]:
        return {
            e: tuple(self.ids_of_mask(self.up_masks[i] & ~(1 << i)))
            for i, e in enumerate(self.ids)
        }

    # serialization

    def to_dict(self, with_labels: bool = False) -> dict:
        out = {
            "elements": [{"id": e, "rank": self.rank[e]} for e in sorted(self.ids)],
            "covers": [list(c) for c in self.covers],
        }
        if with_labels and self.labels:
            out["labels"] = {str(k): _jsonable(self.labels[k]) for k in sorted(self.labels)}
        return out

    def to_json(self, with_labels: bool = False) -> str:
        return json.dumps(self.to_dict(with_labels), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping):
        try:
            ranks = {int(el["id"]): int(el["rank"]) for el in data["elements"]}
            covers = [(int(a), int(b)) for a, b in data["covers"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PosetError(f"malformed poset JSON: {exc}") from exc
        return cls(ranks, covers)

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))

    def hasse_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for e in self.ids:
            g.add_node(e, rank=self.rank[e])
        g.add_edges_from(self.covers)
        return g


class CubicalComplex(RankedPoset):
    """A ranked poset whose every order ideal is a cube face poset.

    Only :func:`validate_cubical` should build these.  ``is_lattice`` records
    whether the bounded extension was checked to be a lattice.
    """

    is_lattice: bool = False


# validation


def _cube_ideal_ok(P: RankedPoset, i: int) -> str | None:
    """Return None if the ideal at position ``i`` is isomorphic to a cube face poset."""
    x = P.ids[i]
    r = P.rank[x]
    ideal = P.down_masks[i]
    members = list(iter_bits(ideal))
    if len(members) != 3**r:
        return f"(has {len(members)} elements, expected {3 ** r})"
    counts = [0] * (r + 1)
    for p in members:
        counts[P.rank[P.ids[p]]] += 1
    for k in range(r + 1):
        if counts[k] != comb(r, k) * 2 ** (r - k):
            return f"(rank {k} count {counts[k]})"
    if r == 0:
        return None
    verts = [p for p in members if P.rank[P.ids[p]] == 0]
    vmask = sum(1 << p for p in verts)
    nbrs: dict[int, list[int]] = {p: [] for p in verts}
    for p in members:
        if P.rank[P.ids[p]] == 1:
            ends = list(iter_bits(P.down_masks[p] & vmask))
            if len(ends) != 2:
                return "(edge without two vertices)"
            a, b = ends
            nbrs[a].append(b)
            nbrs[b].append(a)
    # label vertices by {0,1}^r coordinates through a BFS from one corner
    start = verts[0]
    if len(nbrs[start]) != r:
        return "(vertex degree)"
    coord = {start: 0}
    dist = {start: 0}
    for k, v in enumerate(sorted(nbrs[start])):
        coord[v] = 1 << k
        dist[v] = 1
    frontier = sorted(nbrs[start])
    while frontier:
        nxt = set()
        for v in frontier:
            for w in nbrs[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.add(w)
        for w in nxt:
            c = 0
            for u in nbrs[w]:
                if dist.get(u) == dist[w] - 1:
                    c |= coord[u]
            coord[w] = c
        frontier = sorted(nxt)
    if len(coord) != len(verts) or len(set(coord.values())) != len(verts):
        return "(1-skeleton is not a cube graph)"
    seen = set()
    for p in members:
        vs = [coord[v] for v in iter_bits(P.down_masks[p] & vmask)]
        lo, hi = -1, 0
        for c in vs:
            lo &= c
            hi |= c
        free = lo ^ hi
        k = P.rank[P.ids[p]]
        if bin(free).count("1") != k or len(vs) != 2**k:
            return f"(face {P.ids[p]} is not a subcube)"
        key = (lo, free)
        if key in seen:
            return "(two faces with the same vertex set)"
        seen.add(key)
    # cover count: each k-face of an r-cube has 2k facets
    ncov = sum(len(P._down[P.ids[p]]) for p in members)
    expected = sum(comb(r, k) * 2 ** (r - k) * 2 * k for k in range(r + 1))
    if ncov != expected:
        return "(cover count)"
    return None


def check_lattice(P: RankedPoset) -> tuple[int, int] | None:
    """Return a pair without a unique join in the bounded extension, or None."""
    up = P.up_masks
    down = P.down_masks
    n = len(P.ids)
    for i in range(n):
        ui = up[i]
        # only elements sharing an upper bound with i can fail
        reach = 0
        for u in iter_bits(ui):
            reach |= down[u]
        reach &= ~((1 << (i + 1)) - 1)
        for j in iter_bits(reach):
            common = ui & up[j]
            low = common & -common
            u = low.bit_length() - 1
            if common & ~up[u]:
                return P.ids[i], P.ids[j]
    return None


def validate_cubical(P: RankedPoset, require_lattice: bool = True) -> CubicalComplex:
    """Check that every order ideal is a cube and that the bounded extension is a lattice.

    Raises IdealNotCube naming the first offending element (in rank order) or
    NotLattice with a pair of elements lacking a unique join.
    """
    for i, x in enumerate(P.ids):
        why = _cube_ideal_ok(P, i)
        if why is not None:
            raise IdealNotCube(x, why)
    witness = check_lattice(P)
    if witness is not None and require_lattice:
        raise NotLattice(*witness)
    K = CubicalComplex(P.rank, P.covers, P.labels)
    K.is_lattice = witness is None
    return K


# navigation operations


def order_ideal(K: RankedPoset, x) -> frozenset[int]:
    K._check(x)
    return frozenset(K.ids_of_mask(K.down_masks[K.pos[x]]))


def order_filter(K: RankedPoset, x) -> frozenset[int]:
    K._check(x)
    return frozenset(K.ids_of_mask(K.up_masks[K.pos[x]]))


def subposet(K: RankedPoset, keep: Iterable[int], rank_shift: int = 0) -> RankedPoset:
    """Induced subposet on a rank-interval-closed set (covers are kept as-is)."""
    keep = set(keep)
    return RankedPoset(
        {e: K.rank[e] - rank_shift for e in keep},
        [(a, b) for a, b in K.covers if a in keep and b in keep],
        {e: K.labels[e] for e in keep if e in K.labels},
    )


def link(K: RankedPoset, x) -> RankedPoset:
    """Elements strictly above x, with ranks shifted so covers of x have rank 0."""
    above = order_filter(K, x) - {x}
    return subposet(K, above, K.rank[x] + 1)


def euler_characteristic(K: RankedPoset) -> int:
    return sum((-1) ** K.rank[e] for e in K.ids)


def flags(K: RankedPoset, length: int) -> list[tuple[int, ...]]:
    """All chains with ``length`` elements, as id tuples increasing in the order."""
    if length <= 0:
        return []
    above = K.strictly_above
    out: list[tuple[int, ...]] = []

    def grow(chain: tuple[int, ...]) -> None:
        if len(chain) == length:
            out.append(chain)
            return
        for y in above[chain[-1]]:
            grow(chain + (y,))

    for e in K.ids:
        grow((e,))
    out.sort()
    return out


def all_flags(K: RankedPoset) -> dict[int, list[tuple[int, ...]]]:
    """Flags grouped by simplicial dimension (number of elements minus one)."""
    out: dict[int, list[tuple[int, ...]]] = {}
    above = K.strictly_above
    stack = [(e,) for e in K.ids]
    while stack:
        chain = stack.pop()
        out.setdefault(len(chain) - 1, []).append(chain)
        for y in above[chain[-1]]:
            stack.append(chain + (y,))
    for v in out.values():
        v.sort()
    return dict(sorted(out.items()))


# poset algebra


def product(K1: RankedPoset, K2: RankedPoset) -> RankedPoset:
    """Componentwise product; labels are (id in K1, id in K2)."""
    ranks = {(a, b): K1.rank[a] + K2.rank[b] for a in K1.ids for b in K2.ids}
    covers = []
    for a, a2 in K1.covers:
        for b in K2.ids:
            covers.append(((a, b), (a2, b)))
    for b, b2 in K2.covers:
        for a in K1.ids:
            covers.append(((a, b), (a, b2)))
    return RankedPoset.from_labeled(ranks, covers)


def disjoint_union(K1: RankedPoset, K2: RankedPoset) -> RankedPoset:
    """Labels are (0, id in K1) and (1, id in K2)."""
    ranks = {(0, a): K1.rank[a] for a in K1.ids}
    ranks.update({(1, b): K2.rank[b] for b in K2.ids})
    covers = [((0, a), (0, b)) for a, b in K1.covers] + [((1, a), (1, b)) for a, b in K2.covers]
    return RankedPoset.from_labeled(ranks, covers)


def dual(K: RankedPoset) -> RankedPoset:
    """Reverse the order; ranks become longest-chain lengths from the new minima.

    Raises NotGraded when the reversed poset is not graded (e.g. a non-pure complex).
    """
    covers = [(b, a) for a, b in K.covers]
    ranks: dict[int, int] = {}
    for e in reversed(K.ids):
        ups = K._up[e]
        ranks[e] = 0 if not ups else max(ranks[u] for u in ups) + 1
    return RankedPoset(ranks, covers, K.labels)


def rank_selected(K: RankedPoset, ranks: Iterable[int]) -> RankedPoset:
    """Elements whose rank lies in ``ranks``, ordered as in K.

    Ids are kept; ranks are renumbered 0, 1, ... along the sorted selection,
    so selecting every rank returns K itself.
    """
    sel = sorted(set(ranks))
    index = {r: i for i, r in enumerate(sel)}
    keep = [e for e in K.ids if K.rank[e] in index]
    keepset = set(keep)
    covers = []
    for e in keep:
        i = K.pos[e]
        for p in iter_bits(K.up_masks[i] & ~(1 << i)):
            y = K.ids[p]
            if y in keepset and index[K.rank[y]] == index[K.rank[e]] + 1:
                covers.append((e, y))
    return RankedPoset(
        {e: index[K.rank[e]] for e in keep},
        covers,
        {e: K.labels[e] for e in keep if e in K.labels},
    )


def find_isomorphism(P: RankedPoset, Q: RankedPoset) -> dict[int, int] | None:
    """A rank-preserving isomorphism of Hasse diagrams P -> Q, or None."""
    if P.f_vector() != Q.f_vector() or len(P.covers) != len(Q.covers):
        return None
    matcher = DiGraphMatcher(
        P.hasse_graph(), Q.hasse_graph(), node_match=lambda a, b: a["rank"] == b["rank"]
    )
    for mapping in matcher.isomorphisms_iter():
        return dict(mapping)
    return None


def is_order_preserving_bijection(P: RankedPoset, Q: RankedPoset, phi: Mapping[int, int]) -> bool:
    """True when ``phi`` is a bijection P -> Q carrying covers exactly onto covers."""
    if len(phi) != len(P) or set(phi) != set(P.ids) or set(phi.values()) != set(Q.ids):
        return False
    if any(P.rank[x] != Q.rank[phi[x]] for x in P.ids):
        return False
    return sorted((phi[a], phi[b]) for a, b in P.covers) == list(Q.covers)

