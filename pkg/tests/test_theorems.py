from fractions import Fraction

import pytest

from fuzzdyn.errors import InputError
from fuzzdyn.fuzzy import GFunction, LevelGrid
from fuzzdyn.spaces import (make_grid_interval_map, make_multiply,
                            make_rotation, one_point_system)
from fuzzdyn.symbolic import full_shift
from fuzzdyn.theorems import (EquivalenceReport, ReportItem, verify_theorem)

F = Fraction


def witness(item, key="witness_n"):
    return dict(item.witnesses).get(key)


class TestTransitivityTheorem:
    def test_cycle_consistent_negative(self):
        rep = verify_theorem("transitivity", make_rotation(2, 1), m=2)
        assert rep.consistent and not rep.red_alert
        assert all(it.status == "fails" for it in rep.matrix_items())
        assert all(it.exact for it in rep.matrix_items())

    def test_one_point_consistent_positive(self):
        rep = verify_theorem("transitivity", one_point_system(), m=2)
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())

    def test_full_shift_positive_at_horizon(self):
        rep = verify_theorem("transitivity", full_shift(2, 3), m=1)
        assert rep.consistent and not rep.red_alert
        assert all(it.status == "holds" for it in rep.matrix_items())
        assert all(not it.exact for it in rep.matrix_items())


class TestMixingTheorem:
    def test_two_cycle(self):
        rep = verify_theorem("mixing", make_rotation(2, 1), m=1)
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.matrix_items())

    def test_full_shift(self):
        rep = verify_theorem("mixing", full_shift(2, 3), m=1)
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())


class TestFMixingTheorem:
    def test_cycle_fails_consistently(self):
        rep = verify_theorem("f-mixing", make_rotation(5, 1), m=1)
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.matrix_items())

    def test_full_shift_holds(self):
        rep = verify_theorem("f-mixing", full_shift(2, 3), m=1)
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())


class TestMildMixingTheorem:
    def test_cycle_fails(self):
        rep = verify_theorem("mild-mixing", make_rotation(2, 1), m=1)
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.matrix_items())

    def test_one_point_holds_catalog_relative(self):
        rep = verify_theorem("mild-mixing", one_point_system(), m=1)
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())
        assert all(not it.exact for it in rep.matrix_items())


class TestATransitivityTheorem:
    def test_rotation_negative(self):
        rep = verify_theorem("a-transitivity", make_rotation(3, 1), m=2,
                             exponents=(1, 2))
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.matrix_items())

    def test_full_shift_positive(self):
        rep = verify_theorem("a-transitivity", full_shift(2, 2), m=1,
                             exponents=(1, 2))
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())


class TestEquicontinuityTheorem:
    def test_isometry_delta_equals_eps(self):
        rep = verify_theorem("equicontinuity", make_rotation(4, 1), m=2,
                             eps=F(1, 4))
        assert rep.consistent
        for it in rep.items:
            assert it.status == "holds"
            assert dict(it.witnesses)["delta"] == "1/4"

    def test_expanding_map_consistent(self):
        rep = verify_theorem("equicontinuity", make_multiply(9, 2), m=1,
                             eps=F(2, 9))
        assert rep.consistent
        deltas = {dict(it.witnesses)["delta"] for it in rep.items}
        assert len(deltas) == 1

    def test_rejects_symbolic(self):
        with pytest.raises(InputError):
            verify_theorem("equicontinuity", full_shift(2, 3))


class TestUniformRigidityTheorem:
    def test_rotation_four_witnesses_align(self):
        rep = verify_theorem("uniform-rigidity", make_rotation(4, 1), m=2,
                             eps=F(1, 8))
        assert rep.consistent
        assert {witness(it) for it in rep.items} == {4}

    def test_halving_none_everywhere(self):
        rep = verify_theorem("uniform-rigidity",
                             make_grid_interval_map("half", 4), m=2,
                             eps=F(1, 8))
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.items)
        assert {witness(it) for it in rep.items} == {None}


def test_fuzzy_displacement_matches_cut_reduction():
    """Enumerated fuzzy slices displace exactly like the subset lift, for
    every constraint; this pins the reduction used when slices outgrow the
    materialization cap."""
    from fuzzdyn.analysis import displacement_curve
    from fuzzdyn.fuzzy import fuzzy_lift_system
    from fuzzdyn.hyperspace import hyperspace_displacement_curve
    for sys in (make_rotation(4, 1), make_grid_interval_map("half", 4)):
        pre, per = sys.eventual_period()
        bound = pre + per + 1
        key = hyperspace_displacement_curve(sys, bound)
        grid = LevelGrid(2)
        for constraint in ("nonempty", ("eq", F(1)), ("eq", F(1, 2)),
                           ("ge", F(1, 2))):
            lifted = fuzzy_lift_system(sys, grid, constraint)
            assert displacement_curve(lifted, bound) == key, \
                (sys.label, constraint)


class TestProximalityTheorem:
    def test_halving_consistent_with_mixed_height_remark(self):
        rep = verify_theorem("proximality",
                             make_grid_interval_map("half", 4), m=2)
        assert rep.consistent
        assert all(it.status == "holds" for it in rep.matrix_items())
        remark = [it for it in rep.items if not it.in_matrix]
        assert len(remark) == 1
        assert remark[0].status == "fails"

    def test_rotation_consistent_negative(self):
        rep = verify_theorem("proximality", make_rotation(4, 1), m=2)
        assert rep.consistent
        assert all(it.status == "fails" for it in rep.matrix_items())


class TestHeightInvariance:
    def test_rotation(self):
        rep = verify_theorem("height-invariance", make_rotation(3, 1), m=2)
        by_id = {it.item_id: it for it in rep.items}
        assert by_id["height-obstruction"].status == "holds"
        assert by_id["f0-not-transitive"].status == "fails"
        assert by_id["f0-not-proximal"].status == "fails"

    def test_halving_obstruction_survives_collapse(self):
        rep = verify_theorem("height-invariance",
                             make_grid_interval_map("half", 4), m=2)
        by_id = {it.item_id: it for it in rep.items}
        assert by_id["height-obstruction"].status == "holds"
        # every level collapses, yet mixed heights still block proximality
        assert by_id["f0-not-proximal"].status == "fails"


class TestCutLemmaTheorem:
    def test_full_enumeration_small(self):
        rep = verify_theorem("cut-lemma", make_rotation(4, 1), m=2,
                             horizon=4)
        item = rep.items[0]
        assert item.status == "holds" and item.exact

    def test_sampled_with_distortion(self):
        grid = LevelGrid(4)
        g = GFunction(grid, {F(0): 0, F(1, 4): F(1, 2), F(1, 2): F(1, 2),
                             F(3, 4): F(3, 4), F(1): 1})
        rep = verify_theorem("cut-lemma", make_multiply(9, 2), m=4,
                             horizon=3, g=g)
        item = rep.items[0]
        assert item.status == "holds"
        assert not item.exact and "sampled" in item.note


class TestReportMachinery:
    def test_unknown_theorem_rejected(self):
        with pytest.raises(InputError):
            verify_theorem("devaney", make_rotation(3, 1))

    def test_bad_lambda_rejected(self):
        with pytest.raises(InputError):
            verify_theorem("transitivity", make_rotation(3, 1), m=2,
                           lambdas=[F(1, 3)])

    def test_red_alert_on_exact_disagreement(self):
        rep = EquivalenceReport("transitivity", "synthetic", {})
        rep.items = [
            ReportItem("a", "p", "base", "holds", True),
            ReportItem("b", "p", "hyper", "fails", True),
        ]
        rep.finalize()
        assert rep.red_alert and not rep.consistent
        assert rep.replay is not None
        assert {d["item"] for d in rep.replay["disagreeing"]} == {"a", "b"}

    def test_no_alert_for_bounded_disagreement(self):
        rep = EquivalenceReport("transitivity", "synthetic", {})
        rep.items = [
            ReportItem("a", "p", "base", "holds", True),
            ReportItem("b", "p", "hyper", "fails", False),
        ]
        rep.finalize()
        assert not rep.red_alert and not rep.consistent

    def test_inconclusive_items_ignored_by_matrix(self):
        rep = EquivalenceReport("transitivity", "synthetic", {})
        rep.items = [
            ReportItem("a", "p", "base", "holds", True),
            ReportItem("b", "p", "hyper", "inconclusive", False),
        ]
        rep.finalize()
        assert rep.consistent and not rep.red_alert
