"""Return-time sets and dynamical property checkers.

Every checker returns a :class:`Verdict` that records whether its
quantifiers were exhausted.  On finite table systems the eventual period of
the map table makes all "for all n" quantifiers finite, so verdicts there
are exact.  On symbolic backends membership of each individual n in a
return-time set is exact, but tail claims and the open-set quantifier
(truncated to cylinders of bounded length) are horizon evidence and are
flagged as such.

Open-set quantifiers always range over a declared basis:

* finite backends: all singleton balls (radius below the minimum positive
  distance, so the ball is the point itself);
* symbolic backends: all legal cylinders up to a configured length;
* lifted enumerations: singleton balls of lifted states;
* hyperspace over a shift: Vietoris elements with a bounded number of
  cylinder components, decided through base return times.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .families import (FamilyClassifier, IndexSet, classify_cofinite,
                       difference_set, fs_set)
from .hyperspace import CompactSet
from .spaces import (MetricSpace, Point, SystemMap, ZERO, as_fraction,
                     iterate_tables, point_label, product_system)
from .symbolic import ShiftSystem

DEFAULT_SYMBOLIC_HORIZON = 64
DEFAULT_CYLINDER_LENGTH = 3
VIETORIS_COMPONENT_CAP = 2

#: generator triples behind the bounded difference-of-sums evidence
IP_WITNESS_GENERATORS = ((1, 2, 4), (2, 3, 7), (1, 3, 5), (3, 4, 9), (2, 5, 11))


# -- opens ----------------------------------------------------------------

@dataclass(frozen=True)
class PointsOpen:
    """A finite open set, listed pointwise (every subset is open here)."""
    label: str
    members: frozenset


@dataclass(frozen=True)
class CylinderOpen:
    """The set of shift points with the given legal prefix."""
    word: str


@dataclass(frozen=True)
class ProductOpen:
    """A box: one open per factor of a product system."""
    parts: tuple


@dataclass(frozen=True)
class VietorisOpen:
    """Hyperspace basis element built from base cylinders."""
    words: tuple


def open_label(u) -> str:
    if isinstance(u, PointsOpen):
        return u.label
    if isinstance(u, CylinderOpen):
        return f"[{u.word}]"
    if isinstance(u, ProductOpen):
        return "(" + ",".join(open_label(p) for p in u.parts) + ")"
    if isinstance(u, VietorisOpen):
        return "<" + ",".join(f"[{w}]" for w in u.words) + ">"
    raise InputError(f"not an open: {u!r}")


def points_open(space: MetricSpace, members: Iterable[Point],
                label: str | None = None) -> PointsOpen:
    mem = frozenset(members)
    if not mem:
        raise InputError("empty open rejected")
    for p in mem:
        space.index(p)
    if label is None:
        label = "{" + ",".join(sorted(point_label(p) for p in mem)) + "}"
    return PointsOpen(label, mem)


def singleton_basis(space: MetricSpace) -> tuple[PointsOpen, ...]:
    return tuple(points_open(space, [p], label=f"B({point_label(p)})")
                 for p in space.points)


def validate_basis(space: MetricSpace, basis: Sequence[PointsOpen]) -> None:
    if not basis:
        raise InputError("empty basis")
    covered = set()
    for u in basis:
        if not u.members:
            raise InputError("basis contains an empty open")
        covered |= u.members
    if covered != set(space.points):
        raise InputError("basis does not cover the space")


# -- verdicts --------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a checker run.

    ``exact`` is True only when every quantifier was exhausted (finite
    backends scanned past the eventual period, full declared basis).  A
    failing verdict always carries a replayable counterexample.
    """

    status: str                     # "holds" | "fails" | "inconclusive"
    exact: bool
    horizon: int | None = None
    witnesses: tuple = ()
    counterexample: tuple | None = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def fails(self) -> bool:
        return self.status == "fails"


# -- dynamics oracles -------------------------------------------------------

class TableDyn:
    """Return-time oracle for a finite table system; exact via the eventual
    period of the map table."""

    def __init__(self, sys: SystemMap):
        self.sys = sys
        self._orbits: dict[frozenset, list[frozenset]] = {}

    def default_basis(self) -> tuple[PointsOpen, ...]:
        return singleton_basis(self.sys.space)

    def preperiod_period(self) -> tuple[int, int]:
        return self.sys.eventual_period()

    def exact_horizon(self) -> int:
        pre, per = self.sys.eventual_period()
        return pre + per

    def _indices(self, u: PointsOpen) -> frozenset:
        idx = self.sys.space.index
        return frozenset(idx(p) for p in u.members)

    def _images(self, start: frozenset) -> list[frozenset]:
        hit = self._orbits.get(start)
        if hit is None:
            pre, per = self.sys.eventual_period()
            tbl = self.sys.table
            cur = start
            hit = [cur]
            for _ in range(pre + per - 1):
                cur = frozenset(tbl[i] for i in cur)
                hit.append(cur)
            self._orbits[start] = hit
        return hit

    def return_membership(self, u: PointsOpen, v: PointsOpen, n: int) -> bool:
        if not isinstance(u, PointsOpen) or not isinstance(v, PointsOpen):
            raise InputError("a table system quantifies over pointwise opens")
        pre, per = self.sys.eventual_period()
        if n >= pre + per:
            n = pre + (n - pre) % per
        imgs = self._images(self._indices(u))
        return bool(imgs[n] & self._indices(v))


class ShiftDyn:
    """Return-time oracle for cylinders of a shift of finite type."""

    def __init__(self, shift: ShiftSystem,
                 cylinder_length: int = DEFAULT_CYLINDER_LENGTH):
        self.shift = shift
        self.cylinder_length = min(cylinder_length, shift.resolution)

    def default_basis(self) -> tuple[CylinderOpen, ...]:
        return tuple(CylinderOpen(w)
                     for w in self.shift.cylinders(self.cylinder_length))

    def preperiod_period(self) -> None:
        return None

    def exact_horizon(self) -> None:
        return None

    def return_membership(self, u: CylinderOpen, v: CylinderOpen, n: int) -> bool:
        return self.shift.return_membership(u.word, v.word, n)


class ProductDyn:
    """Product of oracles with per-factor exponents; membership is decided
    coordinatewise: n is a return time iff a_i * n is one for each factor."""

    def __init__(self, factors: Sequence[tuple[object, int]]):
        if not factors:
            raise InputError("empty factor list rejected")
        for _, e in factors:
            if e < 1:
                raise InputError("exponents must be positive")
        self.factors = tuple(factors)

    def default_basis(self) -> tuple[ProductOpen, ...]:
        bases = [dyn.default_basis() for dyn, _ in self.factors]
        return tuple(ProductOpen(parts)
                     for parts in itertools.product(*bases))

    def preperiod_period(self) -> tuple[int, int] | None:
        pre_star, per_star = 0, 1
        for dyn, a in self.factors:
            pp = dyn.preperiod_period()
            if pp is None:
                return None
            pre, per = pp
            pre_i = -(-pre // a)
            per_i = per // math.gcd(per, a)
            pre_star = max(pre_star, pre_i)
            per_star = per_star * per_i // math.gcd(per_star, per_i)
        return pre_star, per_star

    def exact_horizon(self) -> int | None:
        pp = self.preperiod_period()
        return None if pp is None else pp[0] + pp[1]

    def return_membership(self, u: ProductOpen, v: ProductOpen, n: int) -> bool:
        return all(dyn.return_membership(up, vp, a * n)
                   for (dyn, a), up, vp in
                   zip(self.factors, u.parts, v.parts))


class HyperShiftDyn:
    """Hyperspace return times over a shift, on Vietoris elements whose
    components are base cylinders.

    For any system, T_K^n<U_1..U_p> meets <V_1..V_q> iff every U_i sends a
    point into some V_j at time n and every V_j receives one from some U_i;
    a finite set realizing the matching witnesses membership.  This reduces
    hyperspace membership to base membership exactly.
    """

    def __init__(self, shift: ShiftSystem,
                 cylinder_length: int = DEFAULT_CYLINDER_LENGTH,
                 max_components: int = VIETORIS_COMPONENT_CAP):
        self.shift = shift
        self.cylinder_length = min(cylinder_length, shift.resolution)
        self.max_components = max_components

    def default_basis(self) -> tuple[VietorisOpen, ...]:
        cyls = self.shift.cylinders(self.cylinder_length)
        out = []
        for r in range(1, self.max_components + 1):
            for combo in itertools.combinations(cyls, r):
                out.append(VietorisOpen(tuple(combo)))
        return tuple(out)

    def preperiod_period(self) -> None:
        return None

    def exact_horizon(self) -> None:
        return None

    def return_membership(self, u: VietorisOpen, v: VietorisOpen, n: int) -> bool:
        member = self.shift.return_membership
        hits = [[member(uw, vw, n) for vw in v.words] for uw in u.words]
        if not all(any(row) for row in hits):
            return False
        return all(any(hits[i][j] for i in range(len(u.words)))
                   for j in range(len(v.words)))


def as_dyn(target):
    if isinstance(target, SystemMap):
        return TableDyn(target)
    if isinstance(target, ShiftSystem):
        return ShiftDyn(target)
    if hasattr(target, "return_membership"):
        return target
    raise InputError(f"not a dynamical system: {target!r}")


def _coerce_open(dyn, u):
    """Allow raw point collections / words where opens are expected."""
    if isinstance(u, (PointsOpen, CylinderOpen, ProductOpen, VietorisOpen)):
        return u
    if isinstance(dyn, TableDyn):
        if isinstance(u, CompactSet):
            return points_open(dyn.sys.space, u.members)
        return points_open(dyn.sys.space, u)
    if isinstance(dyn, (ShiftDyn, HyperShiftDyn)) and isinstance(u, str):
        return CylinderOpen(u)
    raise InputError(f"cannot interpret {u!r} as an open set")


# -- return-time sets --------------------------------------------------------

def return_time_set(target, u, v, horizon: int | None = None) -> IndexSet:
    """N(U, V) = {n : T^n(U) meets V}, materialized up to the horizon.

    Finite backends default the horizon to preperiod + 2*period, which
    exhibits the full eventually periodic structure; membership of each
    listed n is exact on every backend.
    """
    dyn = as_dyn(target)
    u = _coerce_open(dyn, u)
    v = _coerce_open(dyn, v)
    if horizon is None:
        pp = dyn.preperiod_period()
        horizon = (pp[0] + 2 * pp[1]) if pp is not None else DEFAULT_SYMBOLIC_HORIZON
    members = {n for n in range(horizon) if dyn.return_membership(u, v, n)}
    return IndexSet.of(horizon, members)


def point_return_set(sys: SystemMap, x: Point, v, horizon: int | None = None) -> IndexSet:
    """N(x, V) = {n : T^n(x) in V} for a finite table system."""
    if not isinstance(sys, SystemMap):
        raise InputError("point return sets need a finite table system")
    if isinstance(v, PointsOpen):
        target = v.members
    elif isinstance(v, CompactSet):
        target = v.members
    else:
        target = frozenset(v)
    if not target:
        raise InputError("empty open rejected")
    pre, per = sys.eventual_period()
    horizon = horizon if horizon is not None else pre + 2 * per
    i = sys.space.index(x)
    members = set()
    for n in range(horizon):
        if sys.space.points[i] in target:
            members.add(n)
        i = sys.table[i]
    return IndexSet.of(horizon, members)


# -- orbits and recurrence ----------------------------------------------------

def _require_table(sys, what: str) -> SystemMap:
    if not isinstance(sys, SystemMap):
        raise InputError(f"{what} needs a finite table system; "
                         "use cylinder approximants on symbolic backends")
    return sys


def omega_limit(sys: SystemMap, x: Point) -> CompactSet:
    """Points visited infinitely often by the orbit of x (its cycle part)."""
    _require_table(sys, "omega limits")
    seen: dict[int, int] = {}
    i = sys.space.index(x)
    seq = []
    while i not in seen:
        seen[i] = len(seq)
        seq.append(i)
        i = sys.table[i]
    cycle = seq[seen[i]:]
    return CompactSet(sys.space, (sys.space.points[j] for j in cycle))


def recurrent_points(sys: SystemMap) -> CompactSet:
    """All points lying on cycles; never empty on a finite system."""
    _require_table(sys, "recurrence")
    pre, _ = sys.eventual_period()
    current = frozenset(range(len(sys.space.points)))
    for _ in range(pre):
        current = sys.image_indices(current)
    return CompactSet(sys.space, (sys.space.points[i] for i in current))


def _tuple_recurrent(tables: Sequence[tuple[int, ...]], start: tuple) -> bool:
    """Does the coordinatewise orbit of the tuple return to the tuple."""
    seen = {start}
    cur = start
    while True:
        cur = tuple(tbl[i] for tbl, i in zip(tables, cur))
        if cur == start:
            return True
        if cur in seen:
            return False
        seen.add(cur)


def is_n_rigid(sys: SystemMap, n: int, tuple_cap: int = 4096) -> Verdict:
    """Every n-tuple recurrent under the n-fold product.

    Enumerates tuples honestly up to ``tuple_cap`` states; beyond that the
    verdict is derived from coordinatewise periodicity (a tuple is a
    product-recurrent point iff each coordinate is periodic), which is exact
    on finite tables.
    """
    _require_table(sys, "rigidity")
    if n < 1:
        raise InputError("n must be >= 1")
    size = len(sys.space.points) ** n
    periodic = recurrent_points(sys).members
    if size <= tuple_cap:
        tables = [sys.table] * n
        for combo in itertools.product(range(len(sys.space.points)), repeat=n):
            if not _tuple_recurrent(tables, combo):
                pts = tuple(point_label(sys.space.points[i]) for i in combo)
                return Verdict("fails", True, counterexample=("tuple",) + pts,
                               note=f"non-recurrent {n}-tuple")
        return Verdict("holds", True, note=f"all {size} tuples recur")
    if periodic == frozenset(sys.space.points):
        return Verdict("holds", True,
                       note="derived: every point periodic, so every tuple "
                            "is product-recurrent")
    bad = sorted(set(sys.space.points) - periodic, key=sys.space.index)[0]
    return Verdict("fails", True,
                   counterexample=("tuple",) + (point_label(bad),) * n,
                   note="derived from a non-periodic coordinate")


def is_weakly_rigid_upto(sys: SystemMap, n_max: int,
                         tuple_cap: int = 4096) -> Verdict:
    """n-rigidity for every n up to n_max, with an exactness note.

    When the map is a bijection, 1-rigidity of all points extends to every
    n; the note records this derived fact instead of assuming it.
    """
    for n in range(1, n_max + 1):
        v = is_n_rigid(sys, n, tuple_cap)
        if not v.holds:
            return Verdict("fails", True, counterexample=v.counterexample,
                           note=f"not {n}-rigid")
    extra = ("bijection: extends to all n" if sys.surjective and
             len(set(sys.table)) == len(sys.table) else
             f"checked n <= {n_max}")
    return Verdict("holds", True, note=extra)


# -- transitivity and mixing ---------------------------------------------------

def _effective_horizon(dyn, horizon: int | None) -> tuple[int, bool]:
    """(scan bound, exact?) for existence quantifiers over n."""
    h = dyn.exact_horizon()
    if h is not None:
        if horizon is None or horizon >= h:
            return h, True
        return horizon, False
    return (horizon or DEFAULT_SYMBOLIC_HORIZON), False


def _witness(dyn, u, v, bound: int) -> int | None:
    for n in range(bound):
        if dyn.return_membership(u, v, n):
            return n
    return None


def _fast_table_transitive(sys: SystemMap) -> Verdict:
    """Singleton-basis transitivity: every point reaches every point."""
    pre, per = sys.eventual_period()
    steps = pre + per
    n_pts = len(sys.space.points)
    tbl = sys.table
    for start in range(n_pts):
        reached = set()
        i = start
        for _ in range(steps):
            reached.add(i)
            i = tbl[i]
        if len(reached) < n_pts:
            missing = min(set(range(n_pts)) - reached)
            cu = f"B({point_label(sys.space.points[start])})"
            cv = f"B({point_label(sys.space.points[missing])})"
            return Verdict("fails", True, horizon=steps,
                           counterexample=(cu, cv),
                           note="orbit never meets the target ball")
    return Verdict("holds", True, horizon=steps)


def is_transitive(target, basis=None, horizon: int | None = None) -> Verdict:
    """Every pair of basis opens communicates: N(U, V) is nonempty."""
    dyn = as_dyn(target)
    if isinstance(dyn, TableDyn) and basis is None and horizon is None:
        return _fast_table_transitive(dyn.sys)
    basis = tuple(basis) if basis is not None else dyn.default_basis()
    if isinstance(dyn, TableDyn):
        validate_basis(dyn.sys.space, basis)
    bound, exact = _effective_horizon(dyn, horizon)
    witnesses = []
    for u in basis:
        for v in basis:
            n = _witness(dyn, u, v, bound)
            if n is None:
                return Verdict("fails", exact, horizon=bound,
                               counterexample=(open_label(u), open_label(v)),
                               note="no return time below the horizon"
                                    if not exact else "")
            if len(witnesses) < 8:
                witnesses.append((open_label(u), open_label(v), n))
    return Verdict("holds", exact, horizon=bound, witnesses=tuple(witnesses))


def is_weakly_mixing(target, basis=None, horizon: int | None = None,
                     method: str = "product") -> Verdict:
    """Transitivity of the 2-fold product, or the return-time overlap
    criterion N(U,U) meets N(U,V); the two must agree."""
    if method not in ("product", "lemma"):
        raise InputError("method must be 'product' or 'lemma'")
    dyn = as_dyn(target)
    if method == "product":
        if isinstance(dyn, TableDyn) and basis is None:
            prod = product_system([(dyn.sys, 1), (dyn.sys, 1)])
            v = is_transitive(prod, horizon=horizon)
            return Verdict(v.status, v.exact, v.horizon, v.witnesses,
                           v.counterexample, note="via 2-fold product")
        pdyn = ProductDyn([(dyn, 1), (dyn, 1)])
        pbasis = None
        if basis is not None:
            basis = tuple(basis)
            pbasis = tuple(ProductOpen(p)
                           for p in itertools.product(basis, basis))
        v = is_transitive(pdyn, basis=pbasis, horizon=horizon)
        return Verdict(v.status, v.exact, v.horizon, v.witnesses,
                       v.counterexample, note="via 2-fold product")
    basis = tuple(basis) if basis is not None else dyn.default_basis()
    bound, exact = _effective_horizon(dyn, horizon)
    witnesses = []
    for u in basis:
        for v in basis:
            got = None
            for n in range(bound):
                if (dyn.return_membership(u, u, n)
                        and dyn.return_membership(u, v, n)):
                    got = n
                    break
            if got is None:
                return Verdict("fails", exact, horizon=bound,
                               counterexample=(open_label(u), open_label(v)),
                               note="N(U,U) and N(U,V) never overlap "
                                    "below the horizon")
            if len(witnesses) < 8:
                witnesses.append((open_label(u), open_label(v), got))
    return Verdict("holds", exact, horizon=bound, witnesses=tuple(witnesses),
                   note="via return-time overlap")


def is_mixing(target, basis=None, horizon: int | None = None) -> Verdict:
    """Every N(U, V) is cofinite.  Exact on finite tables through the
    eventual period; horizon-classified on symbolic backends."""
    dyn = as_dyn(target)
    basis = tuple(basis) if basis is not None else dyn.default_basis()
    if isinstance(dyn, TableDyn):
        validate_basis(dyn.sys.space, basis)
        pre, per = dyn.sys.eventual_period()
        window = pre + per
        worst_tail = 0
        for u in basis:
            for v in basis:
                mem = [dyn.return_membership(u, v, n) for n in range(window)]
                if not all(mem[pre:]):
                    miss = next(n for n in range(pre, window) if not mem[n])
                    return Verdict("fails", True, horizon=window,
                                   counterexample=(open_label(u),
                                                   open_label(v), miss),
                                   note="a full residue class of times is "
                                        "missing")
                tail = 0
                for n in range(window - 1, -1, -1):
                    if not mem[n]:
                        tail = n + 1
                        break
                worst_tail = max(worst_tail, tail)
        return Verdict("holds", True, horizon=window,
                       witnesses=(("tail_start", worst_tail),))
    bound, _ = _effective_horizon(dyn, horizon)
    worst_tail = 0
    for u in basis:
        for v in basis:
            s = IndexSet.of(bound, {n for n in range(bound)
                                    if dyn.return_membership(u, v, n)})
            res = classify_cofinite(s)
            if not res.ok:
                return Verdict("fails", False, horizon=bound,
                               counterexample=(open_label(u), open_label(v)),
                               note="not cofinite at the horizon")
            worst_tail = max(worst_tail, res.tail_start)
    return Verdict("holds", False, horizon=bound,
                   witnesses=(("tail_start", worst_tail),),
                   note="horizon evidence")


def is_F_transitive(target, family: FamilyClassifier, basis=None,
                    horizon: int | None = None, mixing: bool = False) -> Verdict:
    """Every N(U, V) belongs to the family.

    With ``mixing`` the check runs on the 2-fold product.  On finite tables
    the eventually periodic structure decides the built-in tail families
    exactly: a set with a nonempty periodic part has bounded gaps (syndetic
    and infinite coincide), and one with a full periodic part is cofinite
    (thick and cofinite coincide).  Sum-based membership stays bounded.
    """
    if mixing:
        dyn = as_dyn(target)
        if isinstance(dyn, TableDyn):
            target = product_system([(dyn.sys, 1), (dyn.sys, 1)])
        else:
            target = ProductDyn([(dyn, 1), (dyn, 1)])
    dyn = as_dyn(target)
    basis = tuple(basis) if basis is not None else dyn.default_basis()
    pp = dyn.preperiod_period()
    finite = pp is not None
    if finite:
        pre, per = pp
        window = pre + 2 * per
    else:
        window, _ = _effective_horizon(dyn, horizon)
    exact_kinds = ("infinite", "syndetic", "cofinite", "thick")
    exact = finite and family.kind in exact_kinds
    detail_any = None
    for u in basis:
        for v in basis:
            mem = [dyn.return_membership(u, v, n) for n in range(window)]
            s = IndexSet.of(window, {n for n, m in enumerate(mem) if m})
            if exact:
                periodic_part = mem[pre:pre + per]
                if family.kind in ("infinite", "syndetic"):
                    ok = any(periodic_part)
                else:
                    ok = all(periodic_part)
                _, detail = family.classify(s)
            else:
                ok, detail = family.classify(s)
            detail_any = detail
            if not ok:
                return Verdict("fails", exact, horizon=window,
                               counterexample=(open_label(u), open_label(v)),
                               note=f"N(U,V) not {family.kind} "
                                    f"({'exact' if exact else 'at horizon'})")
    wit = (("family", family.kind),)
    if detail_any and detail_any.get("witness") is not None:
        wit += (("witness", detail_any["witness"]),)
    return Verdict("holds", exact, horizon=window, witnesses=wit,
                   note="" if exact else "horizon evidence")


def is_a_transitive(target, exponents: Sequence[int], basis=None,
                    horizon: int | None = None) -> Verdict:
    """Transitivity of the product advanced by the given exponent vector."""
    exps = tuple(exponents)
    if not exps or any(e < 1 for e in exps):
        raise InputError("exponent vector must be nonempty and positive")
    dyn = as_dyn(target)
    if isinstance(dyn, TableDyn) and basis is None:
        prod = product_system([(dyn.sys, e) for e in exps])
        v = is_transitive(prod, horizon=horizon)
    else:
        pdyn = ProductDyn([(dyn, e) for e in exps])
        v = is_transitive(pdyn, horizon=horizon)
    return Verdict(v.status, v.exact, v.horizon, v.witnesses,
                   v.counterexample, note=f"exponents {exps}")


def weakly_disjoint(a, b, basis_a=None, basis_b=None,
                    horizon: int | None = None) -> Verdict:
    """Transitivity of the heterogeneous product of the two systems."""
    da, db = as_dyn(a), as_dyn(b)
    if (isinstance(da, TableDyn) and isinstance(db, TableDyn)
            and basis_a is None and basis_b is None):
        prod = product_system([(da.sys, 1), (db.sys, 1)])
        v = is_transitive(prod, horizon=horizon)
    else:
        ba = tuple(basis_a) if basis_a is not None else da.default_basis()
        bb = tuple(basis_b) if basis_b is not None else db.default_basis()
        pbasis = tuple(ProductOpen(p) for p in itertools.product(ba, bb))
        v = is_transitive(ProductDyn([(da, 1), (db, 1)]), basis=pbasis,
                          horizon=horizon)
    return Verdict(v.status, v.exact, v.horizon, v.witnesses,
                   v.counterexample, note="product transitivity")


def is_mildly_mixing_bounded(target, catalog: Sequence | None = None,
                             horizon: int | None = None) -> Verdict:
    """Weak disjointness from every member of a catalog of transitive
    systems.  The universal quantifier over all transitive systems is not
    finitely exhaustible, so a passing verdict is catalog-relative; a
    failing product is a genuine counterexample.  Bounded difference-of-sums
    evidence is attached as a witness.
    """
    if catalog is None:
        from .catalog import transitive_catalog
        catalog = transitive_catalog()
    if not catalog:
        raise InputError("empty catalog rejected")
    for member in catalog:
        v = weakly_disjoint(target, member, horizon=horizon)
        if not v.holds:
            label = member.label if hasattr(member, "label") else str(member)
            return Verdict("fails", v.exact, v.horizon,
                           counterexample=("catalog member", label),
                           note="product with a transitive system is not "
                                "transitive")
    evidence = _ip_difference_evidence(target, horizon)
    return Verdict("holds", False, horizon=horizon,
                   witnesses=(("catalog", len(catalog)),
                              ("difference_sums_met", evidence)),
                   note="catalog-relative; universal quantifier over all "
                        "transitive systems not exhausted")


def _ip_difference_evidence(target, horizon: int | None) -> bool:
    """Do all basis return sets meet each bounded difference-of-sums set."""
    dyn = as_dyn(target)
    if isinstance(dyn, TableDyn):
        pre, per = dyn.sys.eventual_period()
        window = max(64, pre + 2 * per)
    else:
        window = horizon or DEFAULT_SYMBOLIC_HORIZON
    witness_sets = [difference_set(fs_set(g, window))
                    for g in IP_WITNESS_GENERATORS]
    basis = dyn.default_basis()
    for u in basis:
        for v in basis:
            times = {n for n in range(window)
                     if dyn.return_membership(u, v, n)}
            for w in witness_sets:
                if not (times & w.members):
                    return False
    return True


# -- metric behaviour ----------------------------------------------------------

def equicontinuity_modulus(sys: SystemMap, eps) -> tuple[Fraction | None, dict | None]:
    """Largest distance-value delta so that pairs within delta stay within
    eps under every iterate.

    On a finite space the candidates are the positive distance values; the
    modulus is the smallest starting distance of an eps-violating pair (all
    strictly closer pairs are safe), or the diameter when nothing violates.
    A certificate (x, y, n) accompanies any violation found.
    """
    if not isinstance(sys, SystemMap):
        raise InputError("equicontinuity needs a finite table system")
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    space = sys.space
    n_pts = len(space.points)
    if n_pts == 1:
        return eps, None
    pre, per = sys.eventual_period()
    tables = iterate_tables(sys, pre + per)
    worst_start = None
    cert = None
    for i in range(n_pts):
        for j in range(i + 1, n_pts):
            d0 = space.d_by_index(i, j)
            for step, tbl in enumerate(tables):
                dv = space.d_by_index(tbl[i], tbl[j])
                if dv >= eps:
                    if worst_start is None or d0 < worst_start:
                        worst_start = d0
                        cert = {"x": point_label(space.points[i]),
                                "y": point_label(space.points[j]),
                                "n": step, "distance": dv}
                    break
    if worst_start is None:
        return space.diam, None
    return worst_start, cert


def displacement_curve(sys: SystemMap, horizon: int | None = None) -> list[Fraction]:
    """max over points of d(T^n(x), x), for n = 0 .. horizon-1."""
    _require_table(sys, "displacement")
    pre, per = sys.eventual_period()
    bound = horizon if horizon is not None else pre + per + 1
    tables = iterate_tables(sys, bound)
    space = sys.space
    n_pts = len(space.points)
    return [max(space.d_by_index(tbl[i], i) for i in range(n_pts))
            for tbl in tables]


def is_uniformly_rigid(sys: SystemMap, eps, horizon: int | None = None) -> int | None:
    """Least n >= 1 with every point within eps of itself after n steps;
    None when no such n exists (exact past the eventual period)."""
    _require_table(sys, "uniform rigidity")
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    pre, per = sys.eventual_period()
    bound = horizon if horizon is not None else pre + per + 1
    curve = displacement_curve(sys, bound)
    for n in range(1, bound):
        if curve[n] < eps:
            return n
    return None


def is_proximal_pair(sys: SystemMap, x: Point, y: Point,
                     horizon: int | None = None) -> Verdict:
    """Do the two orbits merge (liminf distance zero is merging on a
    finite space, since distinct points keep positive distance)."""
    _require_table(sys, "proximality")
    pre, per = sys.eventual_period()
    bound = horizon if horizon is not None else pre + per
    i, j = sys.space.index(x), sys.space.index(y)
    best = None
    for n in range(bound + 1):
        if i == j:
            return Verdict("holds", True, horizon=bound, witnesses=((n,),))
        if n >= pre:
            dv = sys.space.d_by_index(i, j)
            best = dv if best is None or dv < best else best
        i, j = sys.table[i], sys.table[j]
    return Verdict("fails", True, horizon=bound,
                   counterexample=(point_label(x), point_label(y), str(best)),
                   note="orbits never merge; liminf distance shown")


def is_proximal(sys: SystemMap, horizon: int | None = None,
                method: str = "auto") -> Verdict:
    """All pairs proximal.  Pairwise scan for small systems; for large ones
    the equivalent image-collapse criterion (all orbits merge iff iterated
    images shrink to one state), which needs no distances."""
    _require_table(sys, "proximality")
    n_pts = len(sys.space.points)
    if method == "auto":
        method = "pairwise" if n_pts <= 48 else "collapse"
    if method == "pairwise":
        pts = sys.space.points
        for i in range(n_pts):
            for j in range(i + 1, n_pts):
                v = is_proximal_pair(sys, pts[i], pts[j], horizon)
                if not v.holds:
                    return Verdict("fails", True,
                                   counterexample=v.counterexample,
                                   note="non-proximal pair")
        return Verdict("holds", True, note="all pairs merge")
    if method != "collapse":
        raise InputError("method must be 'auto', 'pairwise', or 'collapse'")
    pre, _ = sys.eventual_period()
    current = frozenset(range(n_pts))
    for _ in range(pre):
        current = sys.image_indices(current)
    if len(current) == 1:
        return Verdict("holds", True, note="images collapse to one state")
    a, b = sorted(current)[:2]
    v = is_proximal_pair(sys, sys.space.points[a], sys.space.points[b], horizon)
    return Verdict("fails", True, counterexample=v.counterexample,
                   note="periodic part keeps distinct states")


def diam_decay(sys: SystemMap, horizon: int | None = None) -> list[Fraction]:
    """diam(T^n(X)) for n = 0 .. horizon-1; nonincreasing since images nest."""
    _require_table(sys, "diameter decay")
    pre, per = sys.eventual_period()
    bound = horizon if horizon is not None else pre + per + 1
    space = sys.space
    current = frozenset(range(len(space.points)))
    out = []
    for _ in range(bound):
        idx = sorted(current)
        d = ZERO
        for a_pos, i in enumerate(idx):
            for j in idx[a_pos + 1:]:
                v = space.d_by_index(i, j)
                if v > d:
                    d = v
        out.append(d)
        current = sys.image_indices(current)
    return out


def is_sensitive(sys: SystemMap, eps, basis=None,
                 horizon: int | None = None) -> Verdict:
    """For every point and every basis neighborhood of it, some neighbor
    escapes to distance > eps at some time below the horizon."""
    _require_table(sys, "sensitivity")
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    space = sys.space
    basis = tuple(basis) if basis is not None else singleton_basis(space)
    validate_basis(space, basis)
    pre, per = sys.eventual_period()
    bound = horizon if horizon is not None else pre + per
    tables = iterate_tables(sys, bound)
    for i, x in enumerate(space.points):
        for u in basis:
            if x not in u.members:
                continue
            escaped = False
            for y in u.members:
                j = space.index(y)
                if any(space.d_by_index(tbl[i], tbl[j]) > eps
                       for tbl in tables):
                    escaped = True
                    break
            if not escaped:
                return Verdict("fails", True, horizon=bound,
                               counterexample=(point_label(x), u.label),
                               note="no neighbor ever escapes past eps")
    return Verdict("holds", True, horizon=bound)


def is_periodically_dense(sys: SystemMap, basis=None) -> Verdict:
    """Every basis open contains a periodic point."""
    _require_table(sys, "periodic density")
    space = sys.space
    basis = tuple(basis) if basis is not None else singleton_basis(space)
    validate_basis(space, basis)
    periodic = recurrent_points(sys).members
    for u in basis:
        if not (u.members & periodic):
            return Verdict("fails", True, counterexample=(u.label,),
                           note="open without periodic points")
    return Verdict("holds", True)
