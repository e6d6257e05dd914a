import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzdyn.errors import BoundExceeded, InputError
from fuzzdyn.fuzzy import (FuzzySet, GFunction, LevelGrid,
                           PiecewiseRepresentation, alpha_cut, count_states,
                           embed_indicator, empty_fuzzy, enumerate_fuzzy,
                           fuzzy_lift_system, g_fuzzify_apply,
                           levelwise_distance, merge_chains, support, xi_of,
                           xi_iterate, zadeh_apply)
from fuzzdyn.hyperspace import (CompactSet, enumerate_compacts,
                                hausdorff_distance, lift_system)
from fuzzdyn.spaces import (SystemMap, circle_space, make_multiply,
                            make_rotation)
from helpers import brute_levelwise, random_table_system

F = Fraction


def indicator(space, grid, lam, members):
    return embed_indicator(lam, CompactSet(space, members), grid)


class TestAlphaCut:
    def test_indicator_cuts(self):
        space = circle_space(5)
        grid = LevelGrid(2)
        a = indicator(space, grid, F(1, 2), [0, 2])
        assert alpha_cut(a, F(1, 2)).members == {0, 2}
        assert alpha_cut(a, F(1)).members == set()

    def test_three_grade_example(self):
        space = circle_space(3)
        a = FuzzySet(space, LevelGrid(2), [F(0), F(1, 2), F(1)])
        assert alpha_cut(a, F(1, 2)).members == {1, 2}
        assert alpha_cut(a, F(3, 4)).members == {2}

    def test_alpha_domain(self):
        space = circle_space(3)
        a = empty_fuzzy(space, LevelGrid(2))
        with pytest.raises(InputError):
            alpha_cut(a, F(0))
        with pytest.raises(InputError):
            alpha_cut(a, F(3, 2))

    def test_cut_chain_decreasing_exhaustive(self):
        space = circle_space(3)
        grid = LevelGrid(3)
        for a in enumerate_fuzzy(space, grid):
            cuts = [alpha_cut(a, lv).members for lv in grid.levels]
            for hi, lo in zip(cuts, cuts[1:]):
                assert lo <= hi


class TestSupport:
    def test_indicator_support(self):
        space = circle_space(4)
        a = indicator(space, LevelGrid(4), F(3, 4), [1, 3])
        assert support(a).members == {1, 3}

    def test_empty_fuzzy_support(self):
        space = circle_space(4)
        assert support(empty_fuzzy(space, LevelGrid(2))).is_empty

    def test_union_of_cuts(self):
        space = circle_space(4)
        grid = LevelGrid(3)
        rng = random.Random(1)
        choices = grid.with_zero()
        for _ in range(40):
            a = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            union = set()
            for lv in grid.levels:
                union |= alpha_cut(a, lv).members
            assert support(a).members == union


class TestLevelwiseDistance:
    def test_zero_on_equal(self):
        space = circle_space(4)
        grid = LevelGrid(2)
        for a in enumerate_fuzzy(space, grid):
            assert levelwise_distance(a, a) == 0

    def test_same_height_indicators_reduce_to_hausdorff(self):
        space = circle_space(8)
        grid = LevelGrid(2)
        c = CompactSet(space, [0, 1])
        d = CompactSet(space, [4])
        for lam in grid.levels:
            got = levelwise_distance(embed_indicator(lam, c, grid),
                                     embed_indicator(lam, d, grid))
            assert got == hausdorff_distance(c, d)

    def test_height_gap_forces_diameter(self):
        space = circle_space(8)
        grid = LevelGrid(2)
        c = CompactSet(space, [0, 1])
        one = embed_indicator(F(1), c, grid)
        half = embed_indicator(F(1, 2), c, grid)
        assert levelwise_distance(one, half) == space.diam

    def test_matches_level_enumeration_oracle(self):
        space = circle_space(5)
        grid = LevelGrid(3)
        rng = random.Random(2)
        choices = grid.with_zero()
        for _ in range(60):
            a = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            b = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            assert levelwise_distance(a, b) == brute_levelwise(a, b)

    def test_grid_mismatch_rejected(self):
        space = circle_space(3)
        a = empty_fuzzy(space, LevelGrid(2))
        b = empty_fuzzy(space, LevelGrid(3))
        with pytest.raises(InputError):
            levelwise_distance(a, b)

    def test_metric_axioms_on_height_one_slice(self):
        space = circle_space(3)
        grid = LevelGrid(2)
        states = list(enumerate_fuzzy(space, grid, ("eq", F(1))))
        assert len(states) == 19
        for a, b in itertools.combinations(states, 2):
            d = levelwise_distance(a, b)
            assert d > 0
            assert d == levelwise_distance(b, a)
        for a, b, c in itertools.combinations(states, 3):
            assert levelwise_distance(a, c) <= \
                levelwise_distance(a, b) + levelwise_distance(b, c)


class TestZadeh:
    def test_identity_system_fixes_everything(self):
        ident = make_multiply(5, 1)
        grid = LevelGrid(2)
        for a in enumerate_fuzzy(ident.space, grid):
            assert zadeh_apply(ident, a) == a

    def test_cut_commutation_single_step(self):
        grid = LevelGrid(3)
        rng = random.Random(3)
        for _ in range(30):
            sys = random_table_system(rng, 5)
            choices = grid.with_zero()
            a = FuzzySet(sys.space, grid,
                         [rng.choice(choices) for _ in sys.space.points])
            image = zadeh_apply(sys, a)
            for lv in grid.levels:
                lhs = alpha_cut(image, lv).members
                rhs = frozenset(sys.apply(p)
                                for p in alpha_cut(a, lv).members)
                assert lhs == rhs

    def test_indicator_maps_to_image_indicator(self):
        m = make_multiply(8, 2)
        grid = LevelGrid(2)
        c = CompactSet(m.space, [1, 3, 5, 7])
        got = zadeh_apply(m, embed_indicator(F(1, 2), c, grid))
        want = embed_indicator(F(1, 2), CompactSet(m.space, [2, 6]), grid)
        assert got == want

    def test_empty_state_fixed(self):
        m = make_multiply(8, 2)
        grid = LevelGrid(2)
        assert zadeh_apply(m, empty_fuzzy(m.space, grid)).is_empty

    def test_height_preserved(self):
        rng = random.Random(4)
        grid = LevelGrid(2)
        for _ in range(40):
            sys = random_table_system(rng, 6)
            choices = grid.with_zero()
            a = FuzzySet(sys.space, grid,
                         [rng.choice(choices) for _ in sys.space.points])
            assert zadeh_apply(sys, a).height == a.height


class TestGFunctions:
    def test_identity_transfer(self):
        grid = LevelGrid(4)
        g = GFunction.identity(grid)
        xi = xi_of(g)
        for x in grid.with_zero():
            assert xi[x] == x

    def test_zero_maps_to_zero(self):
        grid = LevelGrid(3)
        g = GFunction(grid, {F(0): 0, F(1, 3): F(2, 3), F(2, 3): F(2, 3),
                             F(1): 1})
        assert xi_of(g)[F(0)] == 0

    def test_quarter_grid_example(self):
        grid = LevelGrid(4)
        g = GFunction(grid, {F(0): 0, F(1, 4): F(1, 2), F(1, 2): F(1, 2),
                             F(3, 4): F(3, 4), F(1): 1})
        assert xi_of(g)[F(1, 2)] == F(1, 4)

    def test_invalid_g_rejected(self):
        grid = LevelGrid(2)
        with pytest.raises(InputError):
            GFunction(grid, {F(0): F(1, 2), F(1, 2): F(1, 2), F(1): 1})
        with pytest.raises(InputError):
            GFunction(grid, {F(0): 0, F(1, 2): 1, F(1): F(1, 2)})

    def test_g_identity_reduces_to_zadeh(self):
        rng = random.Random(5)
        grid = LevelGrid(3)
        g = GFunction.identity(grid)
        for _ in range(30):
            sys = random_table_system(rng, 5)
            choices = grid.with_zero()
            a = FuzzySet(sys.space, grid,
                         [rng.choice(choices) for _ in sys.space.points])
            assert g_fuzzify_apply(sys, g, a) == zadeh_apply(sys, a)

    def test_top_heavy_g_gives_support_indicator(self):
        grid = LevelGrid(2)
        g = GFunction(grid, {F(0): 0, F(1, 2): 1, F(1): 1})
        m = make_multiply(9, 2)
        a = FuzzySet(m.space, grid,
                     [F(1, 2) if p in (1, 2) else F(0) for p in m.space.points])
        got = g_fuzzify_apply(m, g, a)
        want = embed_indicator(
            F(1), CompactSet(m.space, {m.apply(1), m.apply(2)}), grid)
        assert got == want

    def test_grid_mismatch_rejected(self):
        m = make_multiply(5, 1)
        g = GFunction.identity(LevelGrid(2))
        a = empty_fuzzy(m.space, LevelGrid(3))
        with pytest.raises(InputError):
            g_fuzzify_apply(m, g, a)


def random_gfunction(rng, grid):
    levels = grid.with_zero()
    values = sorted(rng.choice(levels) for _ in range(len(levels) - 2))
    table = {F(0): F(0), F(1): F(1)}
    for lv, val in zip(levels[1:-1], values):
        table[lv] = val
    # enforce nondecreasing against the endpoints
    prev = F(0)
    for lv in levels[1:-1]:
        table[lv] = max(table[lv], prev)
        prev = table[lv]
    return GFunction(grid, table)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 30 - 1))
def test_xi_nondecreasing_and_positive(m, seed):
    grid = LevelGrid(m)
    g = random_gfunction(random.Random(seed), grid)
    xi = xi_of(g)
    keys = grid.with_zero()
    for a, b in zip(keys, keys[1:]):
        assert xi[a] <= xi[b]
    for x in grid.levels:
        assert xi[x] > 0


def test_cut_commutation_iterated_random():
    rng = random.Random(6)
    for _ in range(30):
        m = rng.randrange(2, 5)
        grid = LevelGrid(m)
        sys = random_table_system(rng, rng.randrange(2, 7))
        g = random_gfunction(rng, grid)
        choices = grid.with_zero()
        a = FuzzySet(sys.space, grid,
                     [rng.choice(choices) for _ in sys.space.points])
        current = a
        for n in range(1, 4):
            current = g_fuzzify_apply(sys, g, current)
            for alpha in grid.levels:
                level = xi_iterate(g, n, alpha)
                want = alpha_cut(a, level).members
                for _ in range(n):
                    want = frozenset(sys.apply(p) for p in want)
                assert alpha_cut(current, alpha).members == want


class TestEmbedIndicator:
    def test_cut_roundtrip(self):
        space = circle_space(6)
        grid = LevelGrid(4)
        c = CompactSet(space, [0, 5])
        a = embed_indicator(F(3, 4), c, grid)
        assert alpha_cut(a, F(3, 4)) == c
        assert a.height == F(3, 4)

    def test_degenerate_inputs_rejected(self):
        space = circle_space(3)
        grid = LevelGrid(2)
        with pytest.raises(InputError):
            embed_indicator(F(0), CompactSet(space, [0]), grid)
        with pytest.raises(InputError):
            embed_indicator(F(1), CompactSet(space, []), grid)

    def test_whole_space_fixed_by_surjection(self):
        m = make_multiply(9, 2)
        grid = LevelGrid(2)
        top = embed_indicator(F(1), CompactSet(m.space, m.space.points), grid)
        assert zadeh_apply(m, top) == top

    def test_isometric_and_equivariant(self):
        sys = make_rotation(5, 1)
        grid = LevelGrid(2)
        lam = F(1, 2)
        sets = list(enumerate_compacts(sys.space))
        for a, b in itertools.combinations(sets, 2):
            assert levelwise_distance(embed_indicator(lam, a, grid),
                                      embed_indicator(lam, b, grid)) == \
                hausdorff_distance(a, b)
        for a in sets:
            lhs = zadeh_apply(sys, embed_indicator(lam, a, grid))
            rhs = embed_indicator(
                lam, CompactSet(sys.space, sys.image_points(a.members)), grid)
            assert lhs == rhs


class TestPiecewiseRepresentation:
    def test_roundtrip(self):
        space = circle_space(4)
        grid = LevelGrid(4)
        rng = random.Random(7)
        choices = grid.with_zero()
        for _ in range(50):
            a = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            rep = PiecewiseRepresentation.from_fuzzy(a)
            if a.is_empty:
                assert rep.thresholds == ()
                continue
            assert rep.thresholds[-1] == a.height
            assert rep.to_fuzzy(grid) == a

    def test_merge_identical(self):
        space = circle_space(3)
        grid = LevelGrid(2)
        a = FuzzySet(space, grid, [F(1, 2), F(1), F(0)])
        rep = PiecewiseRepresentation.from_fuzzy(a)
        thresholds, pairs = merge_chains(rep, rep)
        assert thresholds == rep.thresholds
        assert all(x == y for x, y in pairs)

    def test_merge_thresholds_sorted_union(self):
        space = circle_space(4)
        grid = LevelGrid(6)
        a = FuzzySet(space, grid, [F(1, 2), F(1), F(0), F(0)])
        b = FuzzySet(space, grid, [F(1, 3), F(1, 3), F(1), F(0)])
        ra = PiecewiseRepresentation.from_fuzzy(a)
        rb = PiecewiseRepresentation.from_fuzzy(b)
        thresholds, _ = merge_chains(ra, rb)
        assert thresholds == (F(1, 3), F(1, 2), F(1))

    def test_merged_lookup_matches_alpha_cut(self):
        space = circle_space(4)
        grid = LevelGrid(6)
        rng = random.Random(8)
        choices = grid.with_zero()
        for _ in range(40):
            a = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            b = FuzzySet(space, grid,
                         [rng.choice(choices) for _ in space.points])
            if a.is_empty or b.is_empty:
                continue
            ra = PiecewiseRepresentation.from_fuzzy(a)
            rb = PiecewiseRepresentation.from_fuzzy(b)
            thresholds, pairs = merge_chains(ra, rb)
            assert len(thresholds) <= len(ra.thresholds) + len(rb.thresholds)
            for t, (ca, cb) in zip(thresholds, pairs):
                assert ca.members == alpha_cut(a, t).members
                assert cb.members == alpha_cut(b, t).members


class TestEnumeration:
    def test_indicator_count_two_points(self):
        space = circle_space(2)
        states = list(enumerate_fuzzy(space, LevelGrid(1), ("eq", F(1))))
        assert len(states) == 3

    def test_all_count(self):
        space = circle_space(2)
        assert len(list(enumerate_fuzzy(space, LevelGrid(2)))) == 9

    def test_height_one_inclusion_exclusion(self):
        space = circle_space(3)
        grid = LevelGrid(2)
        states = list(enumerate_fuzzy(space, grid, ("eq", F(1))))
        assert len(states) == 27 - 8 == 19
        assert len(states) == count_states(3, grid, ("eq", F(1)))

    def test_uniqueness_and_constraints(self):
        space = circle_space(3)
        grid = LevelGrid(2)
        ge = list(enumerate_fuzzy(space, grid, ("ge", F(1, 2))))
        assert len(ge) == len({s.grades for s in ge}) == 26
        assert all(s.height >= F(1, 2) for s in ge)

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            list(enumerate_fuzzy(circle_space(9), LevelGrid(3), cap=1000))


class TestFuzzyLift:
    def test_identity_lifts_to_identity(self):
        lift = fuzzy_lift_system(make_multiply(5, 1), LevelGrid(1),
                                 ("eq", F(1)))
        assert lift.table == tuple(range(len(lift.space.points)))

    def test_conjugate_to_subset_lift_at_unit_grid(self):
        sys = make_rotation(3, 1)
        key = lift_system(sys)
        flift = fuzzy_lift_system(sys, LevelGrid(1), ("eq", F(1)))
        to_subset = {}
        for state in flift.space.points:
            members = frozenset(p for p, g in zip(sys.space.points, state)
                                if g == 1)
            to_subset[state] = members
        k_index = {p: i for i, p in enumerate(key.space.points)}
        for i, state in enumerate(flift.space.points):
            fi = flift.space.points[flift.table[i]]
            ki = key.table[k_index[to_subset[state]]]
            assert to_subset[fi] == key.space.points[ki]
        states = flift.space.points
        for a, b in itertools.combinations(states, 2):
            assert flift.space.d(a, b) == key.space.d(to_subset[a],
                                                      to_subset[b])

    def test_doubling_mod_nine_height_one_lift_surjective(self):
        lift = fuzzy_lift_system(make_multiply(9, 2), LevelGrid(2),
                                 ("eq", F(1)))
        assert len(lift.space.points) == 3 ** 9 - 2 ** 9
        assert lift.surjective

    def test_lazy_levelwise_metric_matches_oracle(self):
        sys = make_rotation(4, 1)
        grid = LevelGrid(2)
        lift = fuzzy_lift_system(sys, grid, "all")
        rng = random.Random(9)
        pts = lift.space.points
        for _ in range(150):
            s1, s2 = rng.choice(pts), rng.choice(pts)
            a = FuzzySet(sys.space, grid, s1)
            b = FuzzySet(sys.space, grid, s2)
            assert lift.space.d(s1, s2) == brute_levelwise(a, b)

    def test_grade_distortion_noninvariance_reported(self):
        grid = LevelGrid(2)
        g = GFunction(grid, {F(0): 0, F(1, 2): 0, F(1): 1})
        with pytest.raises(InputError):
            fuzzy_lift_system(make_rotation(3, 1), grid, ("eq", F(1, 2)), g=g)

    def test_grade_cut_duality(self):
        space = circle_space(4)
        for m in (1, 2, 3):
            grid = LevelGrid(m)
            for a in enumerate_fuzzy(space, grid):
                for p in space.points:
                    attained = [lv for lv in grid.levels
                                if p in alpha_cut(a, lv).members]
                    expect = max(attained) if attained else F(0)
                    assert a.grade(p) == expect


def test_height_obstruction_small():
    sys = make_rotation(3, 1)
    grid = LevelGrid(2)
    states = list(enumerate_fuzzy(sys.space, grid))
    for a, b in itertools.combinations(states, 2):
        if a.height == b.height:
            continue
        cur_a, cur_b = a, b
        for _ in range(4):
            assert levelwise_distance(cur_a, cur_b) == sys.space.diam
            cur_a = zadeh_apply(sys, cur_a)
            cur_b = zadeh_apply(sys, cur_b)
