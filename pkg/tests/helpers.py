"""Independent brute-force oracles shared by the test modules.

These recompute everything from the definitions with plain Fraction loops,
deliberately avoiding the package's optimized integer-mask paths; optimized
and definitional routes are cross-checked against each other in the tests.
"""

from __future__ import annotations

from fractions import Fraction

from fuzzdyn.spaces import MetricSpace, SystemMap, circle_space


def brute_directed(space, src, dst):
    return max(min(space.d(x, y) for y in dst) for x in src)


def brute_hausdorff(space, members_a, members_b):
    a, b = frozenset(members_a), frozenset(members_b)
    if not a and not b:
        return Fraction(0)
    if not a or not b:
        return space.diam
    return max(brute_directed(space, a, b), brute_directed(space, b, a))


def brute_levelwise(fuzzy_a, fuzzy_b):
    space = fuzzy_a.space
    best = Fraction(0)
    for level in fuzzy_a.grid.levels:
        cut_a = frozenset(p for p, g in zip(space.points, fuzzy_a.grades)
                          if g >= level)
        cut_b = frozenset(p for p, g in zip(space.points, fuzzy_b.grades)
                          if g >= level)
        best = max(best, brute_hausdorff(space, cut_a, cut_b))
    return best


def brute_return_times(sys, u_points, v_points, horizon):
    """Stepwise image iteration, no period folding."""
    current = frozenset(u_points)
    v = frozenset(v_points)
    out = set()
    for n in range(horizon):
        if current & v:
            out.add(n)
        current = sys.image_points(current)
    return out


def shift_brute_member(shift, u, v, n):
    """Enumerate every legal word long enough to carry both constraints."""
    length = max(len(u), n + len(v))
    for w in shift.legal_words(length):
        if w.startswith(u) and w[n:n + len(v)] == v:
            return True
    return False


def random_table_system(rng, n_points, label="random"):
    table = [rng.randrange(n_points) for _ in range(n_points)]
    return SystemMap(circle_space(n_points), table, label=label)


def taxi_space(coords, label="taxi"):
    """Exact metric from rational plane coordinates with the L1 distance;
    the triangle inequality is inherited, so this generates valid tables."""
    pts = list(range(len(coords)))
    rows = [[abs(ax - bx) + abs(ay - by) for bx, by in coords]
            for ax, ay in coords]
    return MetricSpace(pts, matrix=rows, label=label)
