"""The space of nonempty subsets under the Hausdorff metric, its induced
set-valued dynamics, and the finite Vietoris basis.

The empty set is representable in :class:`CompactSet` so the extended metric
d(empty, A) = diam(X) is available where fuzzy level cuts need it, but the
empty set is never a state of the lifted system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BoundExceeded, InputError
from .spaces import (MetricSpace, Point, SystemMap, ZERO, iterate_tables,
                     max_points_cap, point_label)

#: hard cap for bitmask displacement scans (2^n states)
DISPLACEMENT_MAX_POINTS = 16


class CompactSet:
    """Subset of a finite space; possibly empty, closed automatically."""

    __slots__ = ("space", "members")

    def __init__(self, space: MetricSpace, members: Iterable[Point]):
        mem = frozenset(members)
        for p in mem:
            if p not in space._index:
                raise InputError(f"point not in space: {point_label(p)}")
        self.space = space
        self.members = mem

    @property
    def is_empty(self) -> bool:
        return not self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_points())

    def sorted_points(self) -> list[Point]:
        idx = self.space.index
        return sorted(self.members, key=idx)

    def __contains__(self, p) -> bool:
        return p in self.members

    def __eq__(self, other) -> bool:
        return (isinstance(other, CompactSet) and other.space is self.space
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash((id(self.space), self.members))

    def __repr__(self) -> str:
        inner = ",".join(point_label(p) for p in self.sorted_points())
        return "{" + inner + "}"


def empty_compact(space: MetricSpace) -> CompactSet:
    return CompactSet(space, ())


def hausdorff_distance(a: CompactSet, b: CompactSet) -> Fraction:
    """max of the two directed sup-inf distances, with the extension
    d(empty, empty) = 0 and d(empty, A) = diam(X) for nonempty A.
    """
    if a.space is not b.space:
        raise InputError("Hausdorff distance needs a common base space")
    if a.is_empty and b.is_empty:
        return ZERO
    if a.is_empty or b.is_empty:
        return a.space.diam
    d = a.space.d

    def directed(src, dst):
        return max(min(d(x, y) for y in dst) for x in src)

    return max(directed(a.members, b.members), directed(b.members, a.members))


def induced_apply(sys: SystemMap, a: CompactSet) -> CompactSet:
    """Pointwise image; defined on nonempty sets only."""
    if a.space is not sys.space:
        raise InputError("set does not live on the system's space")
    if a.is_empty:
        raise InputError("the induced map is defined on nonempty sets only")
    return CompactSet(sys.space, sys.image_points(a.members))


@dataclass(frozen=True)
class VietorisBasisElement:
    """A finite collection of nonempty opens; selects the compacta inside
    the union that meet every listed open."""

    space: MetricSpace
    opens: tuple[frozenset, ...]

    def __post_init__(self):
        if not self.opens:
            raise InputError("a Vietoris element needs at least one open")
        object.__setattr__(self, "opens",
                           tuple(frozenset(o) for o in self.opens))
        for o in self.opens:
            if not o:
                raise InputError("every listed open must be nonempty")
            for p in o:
                if p not in self.space._index:
                    raise InputError("open contains a foreign point")


def in_vietoris(a: CompactSet, v: VietorisBasisElement) -> bool:
    if a.is_empty:
        raise InputError("Vietoris membership is about nonempty compacta")
    if a.space is not v.space:
        raise InputError("mismatched base spaces")
    union = frozenset().union(*v.opens)
    if not a.members <= union:
        return False
    return all(a.members & o for o in v.opens)


def enumerate_compacts(space: MetricSpace, bound: int | None = None):
    """All 2^n - 1 nonempty subsets, each exactly once, in bitmask order."""
    n = len(space.points)
    cap = bound if bound is not None else max_points_cap()
    if n > cap:
        raise BoundExceeded("hyperspace enumeration", n, cap)
    pts = space.points
    for mask in range(1, 1 << n):
        yield CompactSet(space, (pts[i] for i in range(n) if mask >> i & 1))


def _scaled_matrix(space: MetricSpace) -> tuple[int, list[list[int]]]:
    """Distances as integers over one common denominator."""
    if not space.has_table:
        raise InputError("scaled matrix needs a dense distance table")
    n = len(space.points)
    denom = 1
    for i in range(n):
        for j in range(i + 1, n):
            q = space.d_by_index(i, j).denominator
            denom = denom * q // math.gcd(denom, q)
    mat = [[int(space.d_by_index(i, j) * denom) for j in range(n)]
           for i in range(n)]
    return denom, mat


def _min_to_mask_table(n: int, mat: list[list[int]]) -> list[list[int] | None]:
    """mind[mask][a] = min over b in mask of d(a, b), for every nonempty mask."""
    full = 1 << n
    mind: list[list[int] | None] = [None] * full
    for mask in range(1, full):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        col = mat[i]
        if rest:
            prev = mind[rest]
            mind[mask] = [c if c < p else p for c, p in zip(col, prev)]
        else:
            mind[mask] = list(col)
    return mind


def _mask_hausdorff(a_mask: int, b_mask: int, mind) -> int:
    best = 0
    m = a_mask
    row = mind[b_mask]
    while m:
        low = m & -m
        i = low.bit_length() - 1
        v = row[i]
        if v > best:
            best = v
        m ^= low
    m = b_mask
    row = mind[a_mask]
    while m:
        low = m & -m
        i = low.bit_length() - 1
        v = row[i]
        if v > best:
            best = v
        m ^= low
    return best


def lift_system(sys: SystemMap, bound: int | None = None) -> SystemMap:
    """The induced system on all nonempty subsets, as a bona fide SystemMap.

    The state set is materialized (bitmask order); the Hausdorff metric is
    evaluated lazily and cached, since the state count squares.
    """
    base = sys.space
    n = len(base.points)
    cap = bound if bound is not None else max_points_cap()
    if n > cap:
        raise BoundExceeded("hyperspace lift", n, cap)

    full = 1 << n
    pts = base.points
    subsets = tuple(frozenset(pts[i] for i in range(n) if mask >> i & 1)
                    for mask in range(1, full))

    point_bit = [1 << sys.table[i] for i in range(n)]
    img = [0] * full
    for mask in range(1, full):
        low = mask & -mask
        img[mask] = img[mask ^ low] | point_bit[low.bit_length() - 1]
    table = [img[mask] - 1 for mask in range(1, full)]

    denom, mat = _scaled_matrix(base)
    mind = _min_to_mask_table(n, mat)
    mask_of = {s: m + 1 for m, s in enumerate(subsets)}
    # subsets[m] corresponds to bitmask m+1

    def dist(a: frozenset, b: frozenset) -> Fraction:
        return Fraction(_mask_hausdorff(mask_of[a], mask_of[b], mind), denom)

    space = MetricSpace(subsets, fn=dist, diam=base.diam,
                        label=f"K({base.label})")
    prov = {"kind": "hyperspace_lift",
            "base": sys.provenance if sys.provenance else {"kind": "finite"}}
    return SystemMap(space, table, label=f"K({sys.label})", provenance=prov)


def hyperspace_displacement_curve(sys: SystemMap, horizon: int) -> list[Fraction]:
    """max over nonempty subsets A of d_H(T^n(A), A), for n = 0 .. horizon-1.

    Exact bitmask scan over all 2^|X| - 1 subsets; this is the displacement
    of the subset lift, and (by cut realizability) of every fuzzy-height
    slice as well.
    """
    n = len(sys.space.points)
    if n > DISPLACEMENT_MAX_POINTS:
        raise BoundExceeded("displacement scan", n, DISPLACEMENT_MAX_POINTS)
    denom, mat = _scaled_matrix(sys.space)
    mind = _min_to_mask_table(n, mat)
    full = 1 << n
    tables = iterate_tables(sys, horizon)
    out = []
    for tbl in tables:
        point_bit = [1 << tbl[i] for i in range(n)]
        img = [0] * full
        worst = 0
        for mask in range(1, full):
            low = mask & -mask
            im = img[mask ^ low] | point_bit[low.bit_length() - 1]
            img[mask] = im
            v = _mask_hausdorff(im, mask, mind)
            if v > worst:
                worst = v
        out.append(Fraction(worst, denom))
    return out
