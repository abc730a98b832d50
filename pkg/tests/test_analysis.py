"""Graph diagnostics, theorem condition checks and the comparison harness."""

import numpy as np
import pytest

from cqaoa import (FeasibleSet, GraphPartition, LinearConstraint, RunConfig,
                   build_distance_mixer, build_ring_xy_mixer, build_star_mixer,
                   check_theorem_conditions, compare_mixers, feasible_set, linear_constraint,
                   mixer_applicability, mixer_report)
from conftest import GP4_PATH, MPS3_CONFLICT_BC, MPS25, SETPACK4, SETPACK6


def omega_of(members, n):
    return FeasibleSet(n, np.array(sorted(members), dtype=np.int64))


class TestMixerReport:
    def test_distance2_on_gp4(self):
        omega = feasible_set(GP4_PATH)
        report = mixer_report(build_distance_mixer(omega, 2), omega)
        assert report.regularity == 0
        assert report.component_count == 1
        assert report.node_count == 6

    def test_ring_on_gp4_sector(self):
        omega = feasible_set(GP4_PATH)
        report = mixer_report(build_ring_xy_mixer(4), omega)
        assert (report.max_degree, report.min_degree, report.regularity) == (4, 2, 2)

    @pytest.mark.parametrize("q", [3, 5, 9])
    def test_star_regularity_is_node_count_minus_two(self, q):
        omega = omega_of(set(range(q)), 4)
        report = mixer_report(build_star_mixer(omega, 0), omega)
        assert report.max_degree == q - 1
        assert report.min_degree == 1
        assert report.regularity == q - 2
        assert report.component_count == 1

    def test_regularity_consistent_with_histogram(self):
        omega = feasible_set(SETPACK4)
        report = mixer_report(build_distance_mixer(omega, 1), omega)
        degrees = [d for d, c in report.degree_histogram.items() for _ in range(c)]
        assert report.regularity == max(degrees) - min(degrees)
        assert sum(report.degree_histogram.values()) == report.node_count
        assert sum(d * c for d, c in report.degree_histogram.items()) == 2 * report.edge_count

    def test_singleton_report(self):
        omega = omega_of({5}, 3)
        report = mixer_report(build_star_mixer(omega, 5), omega)
        assert report.node_count == 1
        assert report.component_count == 1
        assert report.regularity == 0

    def test_component_sizes(self):
        # distance-1 on a two-cluster feasible set: {0,1} and {6,7} at distance 1 internally
        omega = omega_of({0, 1, 6, 7}, 3)
        report = mixer_report(build_distance_mixer(omega, 1), omega)
        assert report.component_count == 2
        assert report.component_sizes == (2, 2)


class TestTheoremConditions:
    def test_graph_partition_satisfies_equality_conditions(self):
        check = check_theorem_conditions(linear_constraint(GP4_PATH))
        assert check.thm1_applicable
        assert not check.thm3_applicable
        assert check.witness == ""

    def test_set_packing_gap_too_small_yet_connected(self):
        check = check_theorem_conditions(linear_constraint(SETPACK4))
        assert not check.thm3_applicable
        assert "gap" in check.witness
        # sufficient, not necessary: the distance-1 graph is still connected here
        omega = feasible_set(SETPACK4)
        assert mixer_report(build_distance_mixer(omega, 1), omega).component_count == 1

    def test_negative_coefficient_witness(self):
        constraint = LinearConstraint("inequality", np.array([[-1.0], [2.0]]),
                                      np.array([0.0]), np.array([10.0]))
        check = check_theorem_conditions(constraint)
        assert not check.thm3_applicable
        assert "negative" in check.witness

    def test_varying_weight_equality_witness(self):
        # x_0 + 2 x_1 = 2 is satisfied by 01 (weight 1) and 10 (weight... ) only by x_1=1
        constraint = LinearConstraint("equality", np.array([[1.0], [2.0]]),
                                      np.array([2.0]), np.array([2.0]))
        check = check_theorem_conditions(constraint)
        # solutions: x=2 (x_1 set) only; weight constant -> applicable
        assert check.thm1_applicable
        c2 = LinearConstraint("equality", np.array([[2.0], [1.0], [1.0]]),
                              np.array([2.0]), np.array([2.0]))
        # solutions: 001 (weight 1) and 110 (weight 2)
        check2 = check_theorem_conditions(c2)
        assert not check2.thm1_applicable
        assert "Hamming" in check2.witness


class TestApplicability:
    def test_distance2_on_graph_partition(self):
        assert mixer_applicability(GP4_PATH, "distance2") == (True, "")

    def test_distance2_rejected_for_inequality(self):
        ok, reason = mixer_applicability(SETPACK4, "distance2")
        assert not ok and "equality" in reason

    def test_distance2_rejected_without_linear_form(self):
        ok, reason = mixer_applicability(MPS3_CONFLICT_BC, "distance2")
        assert not ok and "not linear" in reason

    def test_ring_requires_single_weight_sector(self):
        ok, reason = mixer_applicability(SETPACK4, "ring_xy")
        assert not ok and "weight-preserving" in reason
        assert mixer_applicability(MPS25, "ring_xy") == (True, "")

    @pytest.mark.parametrize("kind", ["distance1", "star", "transverse_field"])
    def test_unconditional_kinds(self, kind):
        assert mixer_applicability(SETPACK4, kind) == (True, "")


class TestCompareMixers:
    def test_rows_cross_product_and_errors(self):
        cfg = RunConfig(p=3, restarts=2, seed=0)
        rows = compare_mixers(SETPACK4, ["distance1", "ring_xy"], [2, 3], cfg)
        assert [(r.mixer, r.p) for r in rows] == [
            ("distance1", 2), ("distance1", 3), ("ring_xy", 2), ("ring_xy", 3)]
        for row in rows[:2]:
            assert row.error == ""
            assert row.optimal_probability is not None
            assert row.regularity == 2
        for row in rows[2:]:
            assert "weight-preserving" in row.error
            assert row.optimal_probability is None

    def test_rows_deterministic(self):
        cfg = RunConfig(p=2, restarts=3, seed=6)
        a = compare_mixers(SETPACK4, ["distance1", "star"], [2], cfg)
        b = compare_mixers(SETPACK4, ["distance1", "star"], [2], cfg)
        for ra, rb in zip(a, b):
            assert (ra.mixer, ra.p, ra.optimal_probability, ra.expectation) == \
                   (rb.mixer, rb.p, rb.optimal_probability, rb.expectation)

    def test_projected_pseudo_kind(self):
        cfg = RunConfig(p=2, restarts=2, seed=1)
        rows = compare_mixers(GP4_PATH, ["projected-c"], [2], cfg)
        assert rows[0].error == ""
        assert rows[0].infeasible_probability > 0

    def test_six_vertex_distance2_beats_ring(self):
        # a 6-vertex instance with a unique optimal pair where the regular
        # mixer is clearly ahead of the weight-sector ring at equal depth
        gp = GraphPartition(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5)))
        cfg = RunConfig(p=5, restarts=10, seed=0)
        rows = compare_mixers(gp, ["distance2", "ring_xy"], [5], cfg)
        by_kind = {r.mixer: r for r in rows}
        assert by_kind["distance2"].regularity == 0
        assert by_kind["ring_xy"].regularity >= 2
        assert by_kind["distance2"].optimal_probability > by_kind["ring_xy"].optimal_probability
