"""Cubical spheres from codimension-one normal crossing immersions.

Input is a triangulated d-sphere T, a closed (d-1)-manifold M and a vertex
map making y: M -> T simplicial.  The pipeline builds the thickened
barycentric poset J over T, labels each face of an open star by its sector
with respect to the local sheets of y(M), merges J elements in the same
sector, and returns the opposite of the quotient as a cubical complex.
Face counts of the result are then compared mod 2 with the Euler
characteristics of the multiple-point strata.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import networkx as nx

from .mod2 import FlagComplex, betti_numbers
from .poset import CubicalComplex, PosetError, RankedPoset, dual, euler_characteristic, validate_cubical

ON, SIDE_A, SIDE_B = "on", "a", "b"

Simplex = tuple  # sorted tuple of vertex labels (strings)


class CubationError(ValueError):
    pass


class NotSphere(CubationError):
    pass


class NotClosedManifold(CubationError):
    pass


class NotSimplicial(CubationError):
    pass


class NotNormalCrossing(CubationError):
    def __init__(self, t, reason: str):
        super().__init__(f"not normal crossing at {t}: {reason}")
        self.t = t


class SheetNotSeparating(CubationError):
    def __init__(self, t, sheet, components: int):
        super().__init__(f"sheet {sheet} cuts the star of {t} into {components} pieces, expected 2")
        self.t = t
        self.sheet = sheet


class SectorInconsistency(CubationError):
    def __init__(self, s, t):
        super().__init__(f"sector maps at {s} and {t} disagree on the star of {t}")
        self.pair = (s, t)


class QuotientNotCubical(CubationError):
    def __init__(self, witness, reason: str):
        super().__init__(f"quotient fails at {witness}: {reason}")
        self.witness = witness


class CongruenceViolation(AssertionError):
    def __init__(self, i: int, detail: str = ""):
        super().__init__(f"congruence fails in degree {i} {detail}".rstrip())
        self.i = i


class UtParityViolation(AssertionError):
    def __init__(self, t, counts):
        super().__init__(f"U({t}) rank counts {counts} have the wrong parity pattern")
        self.t = t


def _closure(maximal: Sequence[Sequence[str]]) -> set[Simplex]:
    out: set[Simplex] = set()
    for s in maximal:
        s = tuple(sorted(set(s)))
        for k in range(1, len(s) + 1):
            out.update(itertools.combinations(s, k))
    return out


def face_poset(simplices: set[Simplex]) -> RankedPoset:
    ranks = {s: len(s) - 1 for s in simplices}
    covers = []
    for s in simplices:
        if len(s) > 1:
            for k in range(len(s)):
                covers.append((s[:k] + s[k + 1 :], s))
    return RankedPoset.from_labeled(ranks, covers)


@dataclass
class ImmersionData:
    T: list[Simplex]
    M: list[Simplex]
    vertex_map: dict[str, str]
    T_faces: set[Simplex] = field(init=False, repr=False)
    M_faces: set[Simplex] = field(init=False, repr=False)

    def __post_init__(self):
        self.T = [tuple(sorted(str(v) for v in s)) for s in self.T]
        self.M = [tuple(sorted(str(v) for v in s)) for s in self.M]
        self.vertex_map = {str(k): str(v) for k, v in self.vertex_map.items()}
        self.T_faces = _closure(self.T)
        self.M_faces = _closure(self.M)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ImmersionData":
        try:
            return cls(data["T"]["simplices"], data.get("M", {}).get("simplices", []), data.get("vertex_map", {}))
        except (KeyError, TypeError, AttributeError) as exc:
            raise CubationError(f"malformed immersion data: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ImmersionData":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "T": {"simplices": sorted(list(s) for s in self.T)},
            "M": {"simplices": sorted(list(s) for s in self.M)},
            "vertex_map": dict(sorted(self.vertex_map.items())),
        }

    @property
    def d(self) -> int:
        return max(len(s) for s in self.T_faces) - 1

    def y(self, m: Simplex) -> Simplex:
        return tuple(sorted(self.vertex_map[v] for v in m))

    @cached_property
    def Tposet(self) -> RankedPoset:
        return face_poset(self.T_faces)

    @cached_property
    def sheets(self) -> dict[Simplex, list[Simplex]]:
        """t -> the simplices of M mapped onto t."""
        out: dict[Simplex, list[Simplex]] = {t: [] for t in self.T_faces}
        for m in sorted(self.M_faces):
            out[self.y(m)].append(m)
        return out

    def mult(self, t: Simplex) -> int:
        return len(self.sheets[t])


# validation


def _check_pseudomanifold(faces: set[Simplex], dim: int, exc, what: str) -> None:
    if dim < 1:
        return
    count: dict[Simplex, int] = {}
    for s in faces:
        if len(s) - 1 == dim:
            for k in range(len(s)):
                f = s[:k] + s[k + 1 :]
                count[f] = count.get(f, 0) + 1
    for f in faces:
        if len(f) - 1 == dim - 1 and count.get(f, 0) != 2:
            raise exc(f"{what}: face {f} lies in {count.get(f, 0)} top simplices")
    for s in faces:
        if len(s) - 1 < dim and not any(set(s) < set(u) for u in faces if len(u) == len(s) + 1):
            raise exc(f"{what}: {s} is a maximal face below the top dimension")


def validate_immersion(data: ImmersionData) -> dict:
    d = data.d
    _check_pseudomanifold(data.T_faces, d, NotSphere, "T")
    P = data.Tposet
    chi = euler_characteristic(P)
    if chi != 1 + (-1) ** d:
        raise NotSphere(f"T has Euler characteristic {chi}")
    betti = betti_numbers(P)
    if betti != [1] + [0] * (d - 1) + [1]:
        raise NotSphere(f"T has mod-2 Betti numbers {betti}")

    if data.M_faces:
        mdim = max(len(m) for m in data.M_faces) - 1
        if mdim != d - 1:
            raise NotClosedManifold(f"M has dimension {mdim}, expected {d - 1}")
        _check_pseudomanifold(data.M_faces, d - 1, NotClosedManifold, "M")
    for m in data.M_faces:
        for v in m:
            if v not in data.vertex_map:
                raise NotSimplicial(f"vertex {v} of M has no image")
        t = data.y(m)
        if len(set(t)) != len(m):
            raise NotSimplicial(f"{m} is collapsed to {t}")
        if t not in data.T_faces:
            raise NotSimplicial(f"image {t} of {m} is not a simplex of T")

    hist: dict[int, int] = {}
    for t in sorted(data.T_faces):
        k = data.mult(t)
        if k > d - (len(t) - 1):
            raise NotNormalCrossing(t, f"{k} sheets through a face of dimension {len(t) - 1}")
        hist[k] = hist.get(k, 0) + 1
    sector_maps(data)  # separation and local independence
    return {"check": "immersion", "pass": True, "d": d, "mult_histogram": {str(k): v for k, v in sorted(hist.items())}}


# sector maps


@dataclass(frozen=True)
class SectorMap:
    """n_t: faces of the open star of t -> one label per sheet through t."""

    t: Simplex
    sheets: tuple
    labels: Mapping[Simplex, tuple]

    def __call__(self, u: Simplex) -> tuple:
        return self.labels[u]


def _star(data: ImmersionData, s: Simplex) -> list[Simplex]:
    ss = set(s)
    return sorted(u for u in data.T_faces if ss <= set(u))


def sector_maps(data: ImmersionData) -> dict[Simplex, SectorMap]:
    d = data.d
    containing: dict[Simplex, list[Simplex]] = {m: [] for m in data.M_faces}
    for m2 in data.M_faces:
        for k in range(1, len(m2) + 1):
            for m in itertools.combinations(m2, k):
                containing[m].append(m2)

    out = {}
    for s in sorted(data.T_faces):
        star = _star(data, s)
        tops = [u for u in star if len(u) == d + 1]
        sheets = data.sheets[s]
        coords = []
        for m in sheets:
            on = {data.y(m2) for m2 in containing[m]}
            cut = {f for f in on if len(f) == d}
            side = _two_sides(s, m, tops, cut)
            coords.append((on, side))
        labels = {}
        for u in star:
            lab = []
            for on, side in coords:
                if u in on:
                    lab.append(ON)
                    continue
                sides = {side[w] for w in tops if set(u) <= set(w)}
                if len(sides) != 1:
                    raise NotNormalCrossing(s, f"face {u} off the sheet touches both sides")
                lab.append(sides.pop())
            labels[u] = tuple(lab)
        if len({labels[w] for w in tops}) != 2 ** len(sheets):
            raise NotNormalCrossing(s, "sheets are not locally independent")
        out[s] = SectorMap(s, tuple(sheets), labels)
    _check_consistency(data, out)
    return out


def _two_sides(s: Simplex, m: Simplex, tops: list[Simplex], cut: set[Simplex]) -> dict[Simplex, str]:
    g = nx.Graph()
    g.add_nodes_from(tops)
    for a, b in itertools.combinations(tops, 2):
        f = tuple(sorted(set(a) & set(b)))
        if len(f) == len(a) - 1 and f not in cut:
            g.add_edge(a, b)
    comps = list(nx.connected_components(g))
    if len(comps) != 2:
        raise SheetNotSeparating(s, m, len(comps))
    first = min(tops)
    return {w: SIDE_A if w in c0 else SIDE_B for c0 in [next(c for c in comps if first in c)] for w in tops}


def _check_consistency(data: ImmersionData, maps: dict[Simplex, SectorMap]) -> None:
    """For s < t, n_s on the star of t is constant off-sheet on sheets missing t
    and induces the same partition as n_t on the others."""
    for t, nt in maps.items():
        for k in range(1, len(t)):
            for s in itertools.combinations(t, k):
                ns = maps[s]
                star = list(nt.labels)
                for j, m in enumerate(ns.sheets):
                    through = [i for i, mt in enumerate(nt.sheets) if set(m) <= set(mt)]
                    vals = [ns(u)[j] for u in star]
                    if not through:
                        if len(set(vals)) != 1 or vals[0] == ON:
                            raise SectorInconsistency(s, t)
                        continue
                    other = [nt(u)[through[0]] for u in star]
                    if any((a == ON) != (b == ON) for a, b in zip(vals, other)):
                        raise SectorInconsistency(s, t)
                    pairs = {(a, b) for a, b in zip(vals, other) if a != ON}
                    if len({a for a, _ in pairs}) != len(pairs) or len({b for _, b in pairs}) != len(pairs):
                        raise SectorInconsistency(s, t)


# J and its quotient


def build_J(T: RankedPoset) -> RankedPoset:
    """Elements (t, C1, C): t a face, C a nonempty flag below t, C1 a nonempty subset of C.

    Rank is dim t + |C1| - |C|; covers lower t along a cover of T (keeping
    max C below it), drop one element of C1, or insert one element into C.
    """
    ranks: dict[tuple, int] = {}
    covers = []
    down = T.down_masks
    for t in T.ids:
        ideal_mask = down[T.pos[t]]
        ideal = T.ids_of_mask(ideal_mask)
        fc = FlagComplex(T, ideal_mask)
        for C in itertools.chain.from_iterable(fc.flags.values()):
            for k in range(1, len(C) + 1):
                for C1 in itertools.combinations(C, k):
                    key = (t, C1, C)
                    ranks[key] = T.rank[t] + len(C1) - len(C)
                    mc = C[-1]
                    for t2 in T.lower_covers(t):
                        if T.leq(mc, t2):
                            covers.append(((t2, C1, C), key))
                    if len(C1) > 1:
                        for i in range(len(C1)):
                            covers.append(((t, C1[:i] + C1[i + 1 :], C), key))
                    for x in ideal:
                        if x in C:
                            continue
                        if all(T.leq(x, c) or T.leq(c, x) for c in C):
                            C2 = tuple(sorted(C + (x,), key=lambda e: T.rank[e]))
                            covers.append(((t, C1, C2), key))
    return RankedPoset.from_labeled(ranks, covers)


def fiber_surrogate(T: RankedPoset, J: RankedPoset, t: int) -> dict:
    """Euler characteristic and mod-2 Betti numbers of the order complex of p^-1(ideal of t)."""
    mask = 0
    down_t = T.down_masks[T.pos[t]]
    for e in J.ids:
        if down_t >> T.pos[J.labels[e][0]] & 1:
            mask |= 1 << J.pos[e]
    fc = FlagComplex(J, mask)
    return {"chi": fc.euler_characteristic(), "betti": fc.betti()}


@dataclass
class Cubation:
    data: ImmersionData
    J: RankedPoset
    classes: dict[tuple, list[int]]
    K: RankedPoset
    Kop: CubicalComplex

    @property
    def f(self) -> list[int]:
        return self.Kop.f_vector()


def quotient_K(data: ImmersionData, J: RankedPoset | None = None, maps: dict | None = None) -> Cubation:
    T = data.Tposet
    J = J if J is not None else build_J(T)
    maps = maps if maps is not None else sector_maps(data)
    d = data.d

    def key_of(e: int) -> tuple:
        t, C1, C = J.labels[e]
        mc = T.labels[C[-1]]
        C1l = tuple(T.labels[x] for x in C1)
        Cl = tuple(T.labels[x] for x in C)
        return (C1l, Cl, maps[mc](T.labels[t]))

    cls_of = {e: key_of(e) for e in J.ids}
    classes: dict[tuple, list[int]] = {}
    for e, k in cls_of.items():
        classes.setdefault(k, []).append(e)

    g = nx.DiGraph()
    g.add_nodes_from(classes)
    for lo, hi in J.covers:
        a, b = cls_of[lo], cls_of[hi]
        if a != b:
            g.add_edge(a, b)
    if not nx.is_directed_acyclic_graph(g):
        cyc = nx.find_cycle(g)
        raise QuotientNotCubical(cyc[0][0], "merged classes form a cycle")
    red = nx.transitive_reduction(g)

    ranks = {}
    for k, members in classes.items():
        C1, C, _ = k
        top = max(T.rank[J.labels[e][0]] for e in members)
        ranks[k] = top + len(C1) - len(C)
    for a, b in red.edges:
        if ranks[b] - ranks[a] != 1:
            raise QuotientNotCubical(b, f"cover jumps from rank {ranks[a]} to {ranks[b]}")
    for k, r in ranks.items():
        if r == 0 and any(True for _ in red.predecessors(k)):
            raise QuotientNotCubical(k, "rank-0 class is not minimal")
        if r > 0 and not any(True for _ in red.predecessors(k)):
            raise QuotientNotCubical(k, "minimal class of positive rank")
    K = RankedPoset.from_labeled(ranks, list(red.edges))
    if K.dim != d:
        raise QuotientNotCubical(None, f"quotient has dimension {K.dim}")
    try:
        Kop = validate_cubical(dual(K))
    except PosetError as exc:
        raise QuotientNotCubical(getattr(exc, "element", None), str(exc)) from None
    return Cubation(data, J, classes, K, Kop)


# congruences


def strata_chi(data: ImmersionData, i: int) -> int:
    """Closed-support Euler characteristic of the set of points with exactly i preimages."""
    return sum((-1) ** (len(t) - 1) for t in data.T_faces if data.mult(t) == i)


def ut_audit(cub: Cubation) -> dict:
    """Per face t of T: rank counts in K of classes whose flag has maximum t."""
    data, K, d = cub.data, cub.K, cub.data.d
    counts: dict[Simplex, list[int]] = {t: [0] * (d + 1) for t in data.T_faces}
    for e in K.ids:
        _, C, _ = K.labels[e]
        counts[C[-1]][K.rank[e]] += 1
    bad = []
    for t, c in sorted(counts.items()):
        expected = d - data.mult(t)
        if [x % 2 for x in c] != [int(r == expected) for r in range(d + 1)]:
            bad.append((t, c))
    return {"faces": len(counts), "violations": bad}


def run_pipeline(data: ImmersionData) -> Cubation:
    validate_immersion(data)
    return quotient_K(data)


def verify_thm61(data: ImmersionData, cub: Cubation | None = None) -> dict:
    cub = cub or run_pipeline(data)
    d = data.d
    f = cub.f
    strata = [strata_chi(data, i) for i in range(d + 1)]
    for i in range(d + 1):
        if (f[i] - strata[i]) % 2:
            raise CongruenceViolation(i, f"(f_{i} = {f[i]}, strata chi = {strata[i]})")
    audit = ut_audit(cub)
    if audit["violations"]:
        t, c = audit["violations"][0]
        raise UtParityViolation(t, c)
    sphere_chi = 1 + (-1) ** d
    chi_k = sum((-1) ** i * x for i, x in enumerate(f))
    if chi_k != sphere_chi:
        raise CongruenceViolation(-1, f"(chi of the cubical sphere is {chi_k})")
    if sum(strata) != sphere_chi:
        raise CongruenceViolation(-1, f"(strata Euler characteristics sum to {sum(strata)})")
    betti = betti_numbers(cub.Kop)
    return {
        "check": "thm61",
        "pass": True,
        "d": d,
        "f": f,
        "f_mod2": [x % 2 for x in f],
        "strata_chi": strata,
        "chi": chi_k,
        "betti": betti,
        "ut_faces": audit["faces"],
        "J_size": len(cub.J),
    }


def verify_cor62(data: ImmersionData, cub: Cubation | None = None) -> dict:
    d = data.d
    if d % 2 == 0:
        raise CubationError("the d-fold point congruence needs odd d")
    report = verify_thm61(data, cub)
    points = sum(1 for t in data.T_faces if data.mult(t) == d)
    chi_m = sum((-1) ** (len(m) - 1) for m in data.M_faces)
    if (points - chi_m) % 2:
        raise CongruenceViolation(d, f"({points} {d}-fold points, chi(M) = {chi_m})")
    return {"check": "cor62", "pass": True, "d": d, "d_fold_points": points, "chi_M": chi_m, "f": report["f"]}


# small examples


def octahedron() -> list[list[str]]:
    return [[a, b, c] for a in ("+x", "-x") for b in ("+y", "-y") for c in ("+z", "-z")]


def cross_polytope(d: int) -> list[list[str]]:
    """Boundary of the (d+1)-dimensional cross-polytope, a triangulated d-sphere."""
    axes = [[f"+{i}", f"-{i}"] for i in range(d + 1)]
    return [list(c) for c in itertools.product(*axes)]


def example(name: str) -> ImmersionData:
    if name == "equator":
        M = [["m0", "m1"], ["m1", "m2"], ["m2", "m3"], ["m3", "m0"]]
        vm = {"m0": "+x", "m1": "+y", "m2": "-x", "m3": "-y"}
        return ImmersionData(octahedron(), M, vm)
    if name == "figure_eight":
        M = [[f"m{i}", f"m{(i + 1) % 6}"] for i in range(6)]
        vm = dict(zip([f"m{i}" for i in range(6)], ["+z", "+y", "+x", "+z", "-x", "-y"]))
        return ImmersionData(octahedron(), M, vm)
    if name == "empty":
        return ImmersionData(octahedron(), [], {})
    if name == "points_on_circle":
        return ImmersionData([["a", "b"], ["b", "c"], ["a", "c"]], [["p"], ["q"]], {"p": "a", "q": "b"})
    if name == "octahedron_in_s3":
        T = cross_polytope(3)
        M = [[a, b, c] for a in ("+0", "-0") for b in ("+1", "-1") for c in ("+2", "-2")]
        return ImmersionData(T, M, {v: v for s in M for v in s})
    raise KeyError(name)


EXAMPLES = ("equator", "figure_eight", "empty", "points_on_circle", "octahedron_in_s3")
