"""Finite metric spaces with exact rational distances, and table dynamics on them.

Every distance is a :class:`fractions.Fraction`; no floats appear anywhere.
Spaces either carry a dense symmetric distance table or (for large derived
spaces such as hyperspace and fuzzy lifts) a distance function evaluated on
demand and cached.  All values are immutable after construction and every
operation is pure.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .errors import BoundExceeded, InputError

Point = Any

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

#: default cap on base-space enumerations (points), overridable via env
DEFAULT_MAX_POINTS = 16

#: cap on materialized product systems (total states)
PRODUCT_STATE_CAP = 262144


def max_points_cap() -> int:
    """Enumeration cap for base points, from FUZZDYN_MAX_POINTS if set."""
    raw = os.environ.get("FUZZDYN_MAX_POINTS", "")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_MAX_POINTS


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


def point_label(p) -> str:
    """Readable, deterministic rendering of a point id."""
    if isinstance(p, frozenset):
        return "{" + ",".join(sorted(point_label(q) for q in p)) + "}"
    if isinstance(p, tuple):
        return "(" + ",".join(point_label(q) for q in p) + ")"
    return str(p)


class MetricSpace:
    """Ordered point set with an exact rational metric.

    Either ``matrix`` (dense symmetric table, list of rows) or ``fn`` plus an
    explicit ``diam`` must be supplied.  Lazy spaces cache every distance they
    compute, keyed by index pair.
    """

    __slots__ = ("points", "label", "_index", "_matrix", "_fn", "_cache",
                 "_diam", "_minpos", "_values")

    def __init__(self, points: Sequence[Point], *, matrix=None,
                 fn: Callable[[Point, Point], Fraction] | None = None,
                 diam: Fraction | None = None, label: str = "space"):
        pts = tuple(points)
        if not pts:
            raise InputError("a metric space needs at least one point")
        if len(set(pts)) != len(pts):
            raise InputError("duplicate point ids")
        self.points = pts
        self.label = label
        self._index = {p: i for i, p in enumerate(pts)}
        self._values = None
        if matrix is not None:
            rows = tuple(tuple(as_fraction(v) for v in row) for row in matrix)
            n = len(pts)
            if len(rows) != n or any(len(r) != n for r in rows):
                raise InputError("distance table shape does not match points")
            self._matrix = rows
            self._fn = None
            self._cache = None
            flat = [rows[i][j] for i in range(n) for j in range(i + 1, n)]
            self._diam = max(flat) if flat else ZERO
            positive = [v for v in flat if v > 0]
            self._minpos = min(positive) if positive else None
        elif fn is not None:
            if diam is None:
                raise InputError("lazy metric needs an explicit diameter")
            self._matrix = None
            self._fn = fn
            self._cache = {}
            self._diam = as_fraction(diam)
            self._minpos = None
        else:
            raise InputError("need a distance table or a distance function")

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"MetricSpace({self.label!r}, {len(self.points)} points)"

    @property
    def has_table(self) -> bool:
        return self._matrix is not None

    @property
    def diam(self) -> Fraction:
        return self._diam

    @property
    def nontrivial(self) -> bool:
        """At least two points (positive diameter on honest metrics)."""
        return len(self.points) >= 2

    def index(self, p: Point) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise InputError(f"point not in space: {point_label(p)}") from None

    def d(self, p: Point, q: Point) -> Fraction:
        return self.d_by_index(self.index(p), self.index(q))

    def d_by_index(self, i: int, j: int) -> Fraction:
        if self._matrix is not None:
            return self._matrix[i][j]
        if i == j:
            return ZERO
        key = (i, j) if i < j else (j, i)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._fn(self.points[key[0]], self.points[key[1]])
            self._cache[key] = hit
        return hit

    def min_positive_distance(self) -> Fraction | None:
        if self._matrix is None:
            raise InputError("min distance unavailable on a lazy metric space")
        return self._minpos

    def distance_values(self) -> tuple[Fraction, ...]:
        """Sorted distinct distance values, including 0 (table spaces only)."""
        if self._matrix is None:
            raise InputError("distance values unavailable on a lazy metric space")
        if self._values is None:
            vals = {ZERO}
            n = len(self.points)
            for i in range(n):
                for j in range(i + 1, n):
                    vals.add(self._matrix[i][j])
            self._values = tuple(sorted(vals))
        return self._values

    def ball(self, center: Point, radius: Fraction) -> frozenset:
        """Open ball {q : d(center, q) < radius}."""
        r = as_fraction(radius)
        i = self.index(center)
        return frozenset(q for j, q in enumerate(self.points)
                         if self.d_by_index(i, j) < r)


def validate_metric(space: MetricSpace, point_bound: int = 512) -> list[str]:
    """Check all metric axioms exhaustively; return the list of violations.

    Validation never aborts on a bad metric; each violation names the
    offending pair or triple.  Works on lazy spaces too (distances are
    evaluated on demand), guarded by ``point_bound``.
    """
    n = len(space.points)
    if n > point_bound:
        raise BoundExceeded("metric validation", n, point_bound)
    out: list[str] = []
    lab = [point_label(p) for p in space.points]
    d = space.d_by_index
    for i in range(n):
        if d(i, i) != 0:
            out.append(f"d({lab[i]},{lab[i]}) = {d(i, i)} != 0")
    for i in range(n):
        for j in range(i + 1, n):
            if d(i, j) != d(j, i):
                out.append(f"asymmetry at ({lab[i]},{lab[j]})")
            if d(i, j) <= 0:
                out.append(f"d({lab[i]},{lab[j]}) = {d(i, j)} not positive")
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                if d(i, k) > d(i, j) + d(j, k):
                    out.append(
                        f"triangle violation: d({lab[i]},{lab[k]}) > "
                        f"d({lab[i]},{lab[j]}) + d({lab[j]},{lab[k]})")
    return out


class SystemMap:
    """Total endomap of a MetricSpace, stored as an index table."""

    __slots__ = ("space", "table", "label", "provenance", "_ep", "_pre")

    def __init__(self, space: MetricSpace, table: Sequence[int],
                 label: str = "system", provenance: dict | None = None):
        tbl = tuple(table)
        n = len(space.points)
        if len(tbl) != n:
            raise InputError("map table length does not match the space")
        if any((not isinstance(v, int)) or v < 0 or v >= n for v in tbl):
            raise InputError("map table entry out of range")
        self.space = space
        self.table = tbl
        self.label = label
        self.provenance = provenance
        self._ep = None
        self._pre = None

    def __repr__(self) -> str:
        return f"SystemMap({self.label!r}, {len(self.space)} points)"

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == len(self.space.points)

    def apply_index(self, i: int) -> int:
        return self.table[i]

    def apply(self, p: Point) -> Point:
        return self.space.points[self.table[self.space.index(p)]]

    def image_indices(self, idxs: Iterable[int]) -> frozenset:
        return frozenset(self.table[i] for i in idxs)

    def image_points(self, pts: Iterable[Point]) -> frozenset:
        idx = self.space.index
        return frozenset(self.space.points[self.table[idx(p)]] for p in pts)

    def preimages(self) -> tuple[tuple[int, ...], ...]:
        """Preimage index lists, one per point."""
        if self._pre is None:
            buckets: list[list[int]] = [[] for _ in self.space.points]
            for src, dst in enumerate(self.table):
                buckets[dst].append(src)
            self._pre = tuple(tuple(b) for b in buckets)
        return self._pre

    def orbit_points(self, p: Point, steps: int) -> list[Point]:
        """[p, T(p), ..., T^steps(p)]."""
        i = self.space.index(p)
        out = [self.space.points[i]]
        for _ in range(steps):
            i = self.table[i]
            out.append(self.space.points[i])
        return out

    def eventual_period(self) -> tuple[int, int]:
        """Smallest (preperiod, period) with T^(p+q) = T^p as tables."""
        if self._ep is None:
            seen = {}
            n = len(self.table)
            cur = tuple(range(n))
            step = 0
            while cur not in seen:
                seen[cur] = step
                cur = tuple(self.table[i] for i in cur)
                step += 1
            first = seen[cur]
            self._ep = (first, step - first)
        return self._ep

    def is_isometry(self) -> bool:
        n = len(self.space.points)
        d = self.space.d_by_index
        t = self.table
        return all(d(t[i], t[j]) == d(i, j)
                   for i in range(n) for j in range(i + 1, n))


def eventual_period(sys: SystemMap) -> tuple[int, int]:
    return sys.eventual_period()


def iterate(sys: SystemMap, k: int) -> SystemMap:
    """The k-th power of the map, as a fresh table; k = 0 is the identity."""
    if k < 0:
        raise InputError("iterate needs k >= 0")
    n = len(sys.space.points)
    cur = tuple(range(n))
    base = sys.table
    for _ in range(k):
        cur = tuple(base[i] for i in cur)
    return SystemMap(sys.space, cur, label=f"{sys.label}^{k}")


def iterate_tables(sys: SystemMap, upto: int) -> list[tuple[int, ...]]:
    """Tables of T^0 .. T^(upto-1); shared helper for checkers."""
    n = len(sys.space.points)
    out = [tuple(range(n))]
    while len(out) < upto:
        prev = out[-1]
        out.append(tuple(sys.table[i] for i in prev))
    return out


# -- generators -----------------------------------------------------------

def circle_space(n: int) -> MetricSpace:
    """Z_n with the circle metric d(i,j) = min(|i-j|, n-|i-j|)/n."""
    if n < 1:
        raise InputError("circle space needs n >= 1")
    rows = [[Fraction(min(abs(i - j), n - abs(i - j)), n) for j in range(n)]
            for i in range(n)]
    return MetricSpace(range(n), matrix=rows, label=f"Z{n}")


def interval_grid_space(m: int) -> MetricSpace:
    """The grid {i/m : 0 <= i <= m} inside [0,1] with |x - y|."""
    if m < 1:
        raise InputError("grid needs m >= 1")
    pts = [Fraction(i, m) for i in range(m + 1)]
    rows = [[abs(x - y) for y in pts] for x in pts]
    return MetricSpace(pts, matrix=rows, label=f"grid[0,1]/{m}")


def make_rotation(n: int, step: int = 1) -> SystemMap:
    """i -> i + step (mod n) on the circle grid Z_n."""
    if n < 1:
        raise InputError("rotation needs n >= 1")
    space = circle_space(n)
    table = [(i + step) % n for i in range(n)]
    return SystemMap(space, table, label=f"rotation({n},{step})",
                     provenance={"kind": "rotation", "n": n, "step": step})


def make_multiply(n: int, a: int) -> SystemMap:
    """i -> a*i (mod n) on the circle grid Z_n; surjective iff gcd(a,n)=1."""
    if n < 1 or a < 1:
        raise InputError("multiply needs n >= 1 and a >= 1")
    space = circle_space(n)
    table = [(a * i) % n for i in range(n)]
    return SystemMap(space, table, label=f"multiply({n},{a})",
                     provenance={"kind": "multiply", "n": n, "a": a})


#: named piecewise-linear shapes on [0,1]
PIECEWISE_SHAPES: dict[str, tuple[tuple[Fraction, Fraction], ...]] = {
    "half": ((ZERO, ZERO), (ONE, HALF)),
    "tent": ((ZERO, ZERO), (HALF, ONE), (ONE, ZERO)),
    "identity": ((ZERO, ZERO), (ONE, ONE)),
}


def eval_piecewise(breakpoints, x: Fraction) -> Fraction:
    """Exact evaluation of a piecewise-linear map given by breakpoints."""
    bps = [(as_fraction(a), as_fraction(b)) for a, b in breakpoints]
    for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
        if x0 <= x <= x1:
            if x1 == x0:
                return y0
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise InputError(f"{x} outside the breakpoint range")


def make_grid_interval_map(f, m: int, snap: str = "down") -> SystemMap:
    """Snap a piecewise-linear self-map of [0,1] onto the grid {i/m}.

    ``f`` is a shape name from PIECEWISE_SHAPES or a sequence of rational
    (x, y) breakpoints with x running 0 .. 1.  ``snap`` is "down" (floor) or
    "nearest" (ties round up).  A map leaving [0,1] is rejected.
    """
    if isinstance(f, str):
        try:
            bps = PIECEWISE_SHAPES[f]
        except KeyError:
            raise InputError(f"unknown map shape {f!r}") from None
        name = f
    else:
        bps = tuple((as_fraction(a), as_fraction(b)) for a, b in f)
        name = "pl"
    if snap not in ("down", "nearest"):
        raise InputError("snap must be 'down' or 'nearest'")
    xs = [a for a, _ in bps]
    if xs != sorted(set(xs)) or xs[0] != 0 or xs[-1] != 1:
        raise InputError("breakpoints must have increasing x from 0 to 1")
    if any(y < 0 or y > 1 for _, y in bps):
        raise InputError("map leaves [0,1]")
    space = interval_grid_space(m)
    table = []
    for i in range(m + 1):
        y = eval_piecewise(bps, Fraction(i, m))
        t = y * m
        idx = math.floor(t) if snap == "down" else math.floor(t + HALF)
        idx = min(idx, m)
        table.append(idx)
    return SystemMap(space, table, label=f"gridmap({name},{m},{snap})",
                     provenance={"kind": "grid_map", "shape": name if isinstance(f, str) else [
                         [str(a), str(b)] for a, b in bps],
                         "m": m, "snap": snap})


def one_point_system() -> SystemMap:
    return make_rotation(1, 0)


def product_system(factors: Sequence[tuple[SystemMap, int]],
                   state_cap: int = PRODUCT_STATE_CAP) -> SystemMap:
    """Product of the factor systems, each factor advanced exponent steps
    per tick; the metric is the max metric over the coordinates.
    """
    if not factors:
        raise InputError("empty factor list rejected")
    for _, e in factors:
        if not isinstance(e, int) or e < 1:
            raise InputError("exponents must be positive integers")
    total = 1
    for sys_i, _ in factors:
        total *= len(sys_i.space.points)
    if total > state_cap:
        raise BoundExceeded("product system", total, state_cap)

    spaces = [s.space for s, _ in factors]
    step_tables = [iterate(s, e).table for s, e in factors]
    points = tuple(itertools.product(*[sp.points for sp in spaces]))

    sizes = [len(sp.points) for sp in spaces]
    strides = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]

    table = []
    for flat in range(total):
        rem = flat
        out = 0
        for pos, stride in enumerate(strides):
            coord = rem // stride
            rem %= stride
            out += step_tables[pos][coord] * stride
        table.append(out)

    def dist(p, q):
        return max(sp.d(a, b) for sp, a, b in zip(spaces, p, q))

    diam = max(sp.diam for sp in spaces)
    label = " x ".join(f"{s.label}^{e}" if e != 1 else s.label
                       for s, e in factors)
    space = MetricSpace(points, fn=dist, diam=diam, label=f"prod({label})")
    return SystemMap(space, table, label=label,
                     provenance={"kind": "product"})
