"""Quantized fuzzy sets: level grids, alpha cuts, the levelwise metric,
the sup-over-preimages extension of a map, and its grade-distorted variant.

Grades live on a finite grid {0, 1/m, ..., 1}.  With grid grades on a finite
space the whole family of fuzzy states is finite and closed under the
extended dynamics, so every supremum in the definitions is a maximum and
every check below is an exact finite computation.

Conventions that make the finite picture consistent:

* the sup over an empty preimage is 0, so the empty fuzzy state is a fixed
  point and cut identities survive non-surjective maps;
* the sup over alpha in (0,1] of cut distances is a max over grid levels,
  because cuts are constant on the half-open intervals between levels.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .errors import BoundExceeded, InputError
from .hyperspace import (CompactSet, _mask_hausdorff, _min_to_mask_table,
                         _scaled_matrix, hausdorff_distance)
from .spaces import (MetricSpace, Point, SystemMap, ZERO, ONE, as_fraction,
                     point_label)

#: default cap on enumerated fuzzy states, (m+1)^|X|
DEFAULT_STATE_CAP = 3 ** 9


class LevelGrid:
    """The positive grade levels {1/m, ..., 1}; grades may also be 0."""

    __slots__ = ("m", "levels", "_levelset")

    def __init__(self, m: int):
        if m < 1:
            raise InputError("grid resolution must be >= 1")
        self.m = m
        self.levels = tuple(Fraction(i, m) for i in range(1, m + 1))
        self._levelset = frozenset(self.levels) | {ZERO}

    def admits(self, value: Fraction) -> bool:
        return value in self._levelset

    def with_zero(self) -> tuple[Fraction, ...]:
        return (ZERO,) + self.levels

    def __eq__(self, other) -> bool:
        return isinstance(other, LevelGrid) and other.m == self.m

    def __hash__(self) -> int:
        return hash(("LevelGrid", self.m))

    def __repr__(self) -> str:
        return f"LevelGrid(1/{self.m})"


class FuzzySet:
    """Grade function on a finite space with values in {0} + grid levels."""

    __slots__ = ("space", "grid", "grades")

    def __init__(self, space: MetricSpace, grid: LevelGrid,
                 grades: Sequence[Fraction]):
        g = tuple(as_fraction(v) for v in grades)
        if len(g) != len(space.points):
            raise InputError("grade vector length does not match the space")
        for v in g:
            if not grid.admits(v):
                raise InputError(f"grade {v} is not on the grid")
        self.space = space
        self.grid = grid
        self.grades = g

    @classmethod
    def from_map(cls, space: MetricSpace, grid: LevelGrid, mapping: dict) -> "FuzzySet":
        grades = [as_fraction(mapping.get(p, ZERO)) for p in space.points]
        return cls(space, grid, grades)

    def grade(self, p: Point) -> Fraction:
        return self.grades[self.space.index(p)]

    @property
    def height(self) -> Fraction:
        return max(self.grades)

    @property
    def is_empty(self) -> bool:
        return self.height == 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, FuzzySet) and other.space is self.space
                and other.grid == self.grid and other.grades == self.grades)

    def __hash__(self) -> int:
        return hash((id(self.space), self.grid.m, self.grades))

    def __repr__(self) -> str:
        pairs = ",".join(f"{point_label(p)}:{g}" for p, g in
                         zip(self.space.points, self.grades) if g > 0)
        return "Fuzzy{" + pairs + "}"


def empty_fuzzy(space: MetricSpace, grid: LevelGrid) -> FuzzySet:
    return FuzzySet(space, grid, [ZERO] * len(space.points))


def alpha_cut(a: FuzzySet, alpha: Fraction) -> CompactSet:
    """The superlevel set {x : grade(x) >= alpha}, for alpha in (0, 1]."""
    alpha = as_fraction(alpha)
    if not (0 < alpha <= 1):
        raise InputError("alpha must lie in (0, 1]")
    members = [p for p, g in zip(a.space.points, a.grades) if g >= alpha]
    return CompactSet(a.space, members)


def support(a: FuzzySet) -> CompactSet:
    """Closure of {x : grade(x) > 0}; closure is trivial here."""
    return CompactSet(a.space, [p for p, g in zip(a.space.points, a.grades)
                                if g > 0])


def levelwise_distance(a: FuzzySet, b: FuzzySet) -> Fraction:
    """sup over alpha in (0,1] of the Hausdorff distance of the alpha cuts,
    where a cut missing on one side counts diam(X).  The sup is realized on
    the grid levels.
    """
    if a.space is not b.space:
        raise InputError("levelwise distance needs a common base space")
    if a.grid != b.grid:
        raise InputError("levelwise distance needs a common level grid")
    best = ZERO
    for level in a.grid.levels:
        da = alpha_cut(a, level)
        db = alpha_cut(b, level)
        v = hausdorff_distance(da, db)
        if v > best:
            best = v
    return best


def zadeh_apply(sys: SystemMap, a: FuzzySet) -> FuzzySet:
    """New grade at x is the max grade over the preimage of x (0 if none)."""
    if a.space is not sys.space:
        raise InputError("fuzzy set does not live on the system's space")
    pre = sys.preimages()
    grades = a.grades
    out = [max((grades[j] for j in pre[i]), default=ZERO)
           for i in range(len(grades))]
    return FuzzySet(a.space, a.grid, out)


class GFunction:
    """Nondecreasing grade distortion on {0} + grid levels with g(0) = 0,
    g(1) = 1, values on the grid."""

    __slots__ = ("grid", "table")

    def __init__(self, grid: LevelGrid, table: dict):
        keys = grid.with_zero()
        tbl = {}
        for k in keys:
            if k not in table:
                raise InputError(f"g is missing the level {k}")
            v = as_fraction(table[k])
            if not grid.admits(v):
                raise InputError(f"g({k}) = {v} leaves the grid")
            tbl[k] = v
        if tbl[ZERO] != 0:
            raise InputError("g(0) must be 0")
        if tbl[ONE] != 1:
            raise InputError("g(1) must be 1")
        prev = ZERO
        for k in keys:
            if tbl[k] < prev:
                raise InputError("g must be nondecreasing")
            prev = tbl[k]
        self.grid = grid
        self.table = tbl

    @classmethod
    def identity(cls, grid: LevelGrid) -> "GFunction":
        return cls(grid, {k: k for k in grid.with_zero()})

    def __call__(self, level: Fraction) -> Fraction:
        try:
            return self.table[level]
        except KeyError:
            raise InputError(f"{level} is not a grid level") from None

    def __eq__(self, other) -> bool:
        return (isinstance(other, GFunction) and other.grid == self.grid
                and other.table == self.table)

    def __hash__(self) -> int:
        return hash((self.grid.m, tuple(sorted(self.table.items()))))


def xi_of(g: GFunction) -> dict[Fraction, Fraction]:
    """The level transfer x -> least y with g(y) >= x, on {0} + levels.

    Exists because g(1) = 1; positive for positive x because g(0) = 0.
    Nondecreasing since g is.
    """
    keys = g.grid.with_zero()
    out = {}
    for x in keys:
        for y in keys:
            if g(y) >= x:
                out[x] = y
                break
    return out


def xi_iterate(g: GFunction, n: int, alpha: Fraction) -> Fraction:
    """n-fold application of the level transfer to alpha."""
    xi = xi_of(g)
    cur = alpha
    for _ in range(n):
        cur = xi[cur]
    return cur


def g_fuzzify_apply(sys: SystemMap, g: GFunction, a: FuzzySet) -> FuzzySet:
    """New grade at x is the max of g(grade) over the preimage of x."""
    if a.space is not sys.space:
        raise InputError("fuzzy set does not live on the system's space")
    if g.grid != a.grid:
        raise InputError("grade distortion and fuzzy set use different grids")
    pre = sys.preimages()
    grades = a.grades
    tbl = g.table
    out = [max((tbl[grades[j]] for j in pre[i]), default=ZERO)
           for i in range(len(grades))]
    return FuzzySet(a.space, a.grid, out)


def embed_indicator(lam: Fraction, c: CompactSet, grid: LevelGrid) -> FuzzySet:
    """The state with grade lam on the set and 0 elsewhere; height lam."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise InputError("indicator height must be positive")
    if not grid.admits(lam):
        raise InputError(f"height {lam} is not on the grid")
    if c.is_empty:
        raise InputError("indicator of the empty set rejected")
    grades = [lam if p in c.members else ZERO for p in c.space.points]
    return FuzzySet(c.space, grid, grades)


class PiecewiseRepresentation:
    """A fuzzy state as a decreasing chain of cuts with thresholds.

    thresholds t_1 < ... < t_k end at the height; cuts[i] is the cut on the
    interval (t_{i-1}, t_i] (with t_0 = 0).  Above t_k the cut is empty.
    """

    __slots__ = ("space", "thresholds", "cuts")

    def __init__(self, space: MetricSpace, thresholds: Sequence[Fraction],
                 cuts: Sequence[CompactSet]):
        ts = tuple(as_fraction(t) for t in thresholds)
        cs = tuple(cuts)
        if len(ts) != len(cs):
            raise InputError("thresholds and cuts must align")
        if any(not (0 < t <= 1) for t in ts):
            raise InputError("thresholds must lie in (0, 1]")
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise InputError("thresholds must strictly increase")
        for c in cs:
            if c.space is not space:
                raise InputError("cut on a foreign space")
        for hi, lo in zip(cs, cs[1:]):
            if not lo.members <= hi.members:
                raise InputError("cut chain must decrease")
        if cs and cs[-1].is_empty:
            raise InputError("the top cut must be nonempty")
        self.space = space
        self.thresholds = ts
        self.cuts = cs

    @property
    def height(self) -> Fraction:
        return self.thresholds[-1] if self.thresholds else ZERO

    def lookup(self, alpha: Fraction) -> CompactSet:
        alpha = as_fraction(alpha)
        if not (0 < alpha <= 1):
            raise InputError("alpha must lie in (0, 1]")
        for t, c in zip(self.thresholds, self.cuts):
            if alpha <= t:
                return c
        return CompactSet(self.space, ())

    @classmethod
    def from_fuzzy(cls, a: FuzzySet) -> "PiecewiseRepresentation":
        levels = sorted({g for g in a.grades if g > 0})
        cuts = [alpha_cut(a, t) for t in levels]
        return cls(a.space, levels, cuts)

    def to_fuzzy(self, grid: LevelGrid) -> FuzzySet:
        for t in self.thresholds:
            if not grid.admits(t):
                raise InputError(f"threshold {t} is not on the grid")
        grades = []
        for p in self.space.points:
            g = ZERO
            for t, c in zip(self.thresholds, self.cuts):
                if p in c.members:
                    g = t
            grades.append(g)
        return FuzzySet(self.space, grid, grades)


def merge_chains(a: PiecewiseRepresentation, b: PiecewiseRepresentation):
    """Common threshold refinement with aligned cut pairs.

    Returns (thresholds, pairs) where pairs[i] gives both cuts on the
    interval ending at thresholds[i]; a side already above its height
    contributes the empty set.
    """
    if a.space is not b.space:
        raise InputError("merge needs a common base space")
    merged = tuple(sorted(set(a.thresholds) | set(b.thresholds)))
    pairs = tuple((a.lookup(t), b.lookup(t)) for t in merged)
    return merged, pairs


def normalize_constraint(constraint) -> tuple:
    """Normal form: ("all",), ("nonempty",), ("eq", lam), ("ge", lam)."""
    if constraint is None or constraint == "all":
        return ("all",)
    if constraint in ("nonempty", "f0"):
        return ("nonempty",)
    if isinstance(constraint, tuple) and len(constraint) == 2:
        kind, lam = constraint
        lam = as_fraction(lam)
        if kind in ("eq", "ge"):
            if lam <= 0:
                raise InputError("height constraints need a positive level")
            return (kind, lam)
    raise InputError(f"unknown constraint {constraint!r}")


def _satisfies(height: Fraction, norm: tuple) -> bool:
    if norm[0] == "all":
        return True
    if norm[0] == "nonempty":
        return height > 0
    if norm[0] == "eq":
        return height == norm[1]
    return height >= norm[1]


def constraint_label(norm: tuple) -> str:
    if norm[0] == "all":
        return "all"
    if norm[0] == "nonempty":
        return "F0"
    op = "=" if norm[0] == "eq" else ">="
    return f"h{op}{norm[1]}"


def count_states(n_points: int, grid: LevelGrid, norm: tuple) -> int:
    """Exact state count for a constraint, by inclusion-exclusion on height."""
    q = grid.m + 1
    if norm[0] == "all":
        return q ** n_points
    if norm[0] == "nonempty":
        return q ** n_points - 1
    lam_idx = int(norm[1] * grid.m)  # levels below lam, plus zero
    if norm[0] == "eq":
        return (lam_idx + 1) ** n_points - lam_idx ** n_points
    return q ** n_points - lam_idx ** n_points


def _enumeration_choices(grid: LevelGrid, norm: tuple) -> tuple[Fraction, ...]:
    """Grade values worth enumerating under the constraint.  A height-eq
    slice never uses grades above its level, which keeps its loop cost at
    the slice scale rather than the full grid scale."""
    if norm[0] == "eq":
        return (ZERO,) + tuple(v for v in grid.levels if v <= norm[1])
    return grid.with_zero()


def enumeration_cost(n_points: int, grid: LevelGrid, constraint=None) -> int:
    """States visited by the enumeration loop for this constraint."""
    norm = normalize_constraint(constraint)
    return len(_enumeration_choices(grid, norm)) ** n_points


def enumerate_fuzzy(space: MetricSpace, grid: LevelGrid, constraint=None,
                    cap: int = DEFAULT_STATE_CAP):
    """Every grade function satisfying the constraint, exactly once.

    The bound applies to the states the loop visits (all (m+1)^|X| of them,
    except that a height-eq slice restricts to its own grade range).
    """
    norm = normalize_constraint(constraint)
    if norm[0] in ("eq", "ge") and not grid.admits(norm[1]):
        raise InputError(f"constraint level {norm[1]} is not on the grid")
    choices = _enumeration_choices(grid, norm)
    total = len(choices) ** len(space.points)
    if total > cap:
        raise BoundExceeded("fuzzy enumeration", total, cap)
    for combo in itertools.product(choices, repeat=len(space.points)):
        if _satisfies(max(combo), norm):
            yield FuzzySet(space, grid, combo)


def fuzzy_lift_system(sys: SystemMap, grid: LevelGrid, constraint=None,
                      g: GFunction | None = None,
                      cap: int = DEFAULT_STATE_CAP) -> SystemMap:
    """The extended dynamics on the enumerated fuzzy states, as a SystemMap.

    States are grade tuples; the metric is the levelwise distance, evaluated
    lazily through cached cut bitmasks.  If the enumerated family is not
    closed under the map (possible for distorted grades and height
    constraints), that is reported as an error rather than repaired.
    """
    norm = normalize_constraint(constraint)
    base = sys.space
    n = len(base.points)
    if norm[0] in ("eq", "ge") and not grid.admits(norm[1]):
        raise InputError(f"constraint level {norm[1]} is not on the grid")
    choices = _enumeration_choices(grid, norm)
    total = len(choices) ** n
    if total > cap:
        raise BoundExceeded("fuzzy lift", total, cap)

    states = [combo for combo in itertools.product(choices, repeat=n)
              if _satisfies(max(combo), norm)]
    index = {s: i for i, s in enumerate(states)}

    pre = sys.preimages()
    gtbl = g.table if g is not None else None
    if g is not None and g.grid != grid:
        raise InputError("grade distortion uses a different grid")

    def step(state: tuple) -> tuple:
        if gtbl is None:
            return tuple(max((state[j] for j in pre[i]), default=ZERO)
                         for i in range(n))
        return tuple(max((gtbl[state[j]] for j in pre[i]), default=ZERO)
                     for i in range(n))

    table = []
    for s in states:
        img = step(s)
        slot = index.get(img)
        if slot is None:
            raise InputError(
                f"lift not invariant: state {s} maps to height {max(img)} "
                f"outside constraint {constraint_label(norm)}")
        table.append(slot)

    denom, mat = _scaled_matrix(base)
    mind = _min_to_mask_table(n, mat)
    diam_scaled = int(base.diam * denom)
    levels = grid.levels
    cut_cache: dict[tuple, tuple[int, ...]] = {}

    def cut_masks(state: tuple) -> tuple[int, ...]:
        hit = cut_cache.get(state)
        if hit is None:
            masks = []
            for level in levels:
                m_bits = 0
                for i, grade in enumerate(state):
                    if grade >= level:
                        m_bits |= 1 << i
                masks.append(m_bits)
            hit = tuple(masks)
            cut_cache[state] = hit
        return hit

    def dist(s1: tuple, s2: tuple) -> Fraction:
        m1 = cut_masks(s1)
        m2 = cut_masks(s2)
        worst = 0
        for a_mask, b_mask in zip(m1, m2):
            if a_mask == 0 and b_mask == 0:
                continue
            if a_mask == 0 or b_mask == 0:
                v = diam_scaled
            else:
                v = _mask_hausdorff(a_mask, b_mask, mind)
            if v > worst:
                worst = v
        return Fraction(worst, denom)

    label = f"F[{constraint_label(norm)}]({sys.label};m={grid.m})"
    space = MetricSpace(tuple(states), fn=dist, diam=base.diam, label=label)
    prov = {"kind": "fuzzy_lift", "m": grid.m,
            "constraint": constraint_label(norm),
            "g": None if g is None else {str(k): str(v)
                                         for k, v in sorted(g.table.items())},
            "base": sys.provenance if sys.provenance else {"kind": "finite"}}
    return SystemMap(space, table, label=label, provenance=prov)


def fuzzy_state(a: FuzzySet) -> tuple:
    """The grade tuple used as a lifted-system point id."""
    return a.grades


def state_fuzzy(space: MetricSpace, grid: LevelGrid, state: tuple) -> FuzzySet:
    return FuzzySet(space, grid, state)
