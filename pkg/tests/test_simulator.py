"""Tests for seeded voyage simulation and Monte Carlo runs."""

import math

import numpy as np
import pytest

from auv_anchor_tools.core.errors import Diverged, InputError, PathOutsideRegion
from auv_anchor_tools.models import (
    InsDivergenceModel,
    LegSampling,
    PathSpec,
    SimulationSetup,
    SoundSpeedProfile,
)
from auv_anchor_tools.modules import deployment, localization, planner, simulator
from auv_anchor_tools.modules.profile_acoustics import los_variance, slab_for


@pytest.fixture
def setup():
    return SimulationSetup()


@pytest.fixture
def grid_plan():
    return deployment.layout_clusters(20.0, 27, 3, 1916.0)


class TestSeeds:
    def test_splitmix_reference_output(self):
        assert simulator.splitmix64(0) == 0xE220A8397B1DCDAF

    def test_trial_seed_mixes_master_and_trial(self):
        assert simulator.trial_seed(42, 7) == simulator.splitmix64(42 ^ 7)
        seeds = {simulator.trial_seed(42, t) for t in range(1000)}
        assert len(seeds) == 1000
        assert all(0 <= s <= simulator.MASK64 for s in seeds)


class TestResolvePath:
    def test_structured_paths(self, grid_plan):
        row = simulator.resolve_path(grid_plan, PathSpec(kind="r1"), seed=0)
        column = simulator.resolve_path(grid_plan, PathSpec(kind="r2"), seed=0)
        diagonal = simulator.resolve_path(grid_plan, PathSpec(kind="r3"), seed=0)
        assert row.start == pytest.approx((0.0, 10_000.0)) and row.dest == pytest.approx((20_000.0, 10_000.0))
        assert column.start == pytest.approx((10_000.0, 0.0)) and column.dest == pytest.approx((10_000.0, 20_000.0))
        assert diagonal.start == (0.0, 0.0) and diagonal.dest == (20_000.0, 20_000.0)

    def test_random_path_crosses_left_to_right(self, grid_plan):
        first = simulator.resolve_path(grid_plan, PathSpec(kind="random"), seed=9)
        again = simulator.resolve_path(grid_plan, PathSpec(kind="random"), seed=9)
        other = simulator.resolve_path(grid_plan, PathSpec(kind="random"), seed=10)
        assert first == again
        assert first != other
        assert first.start[0] == 0.0 and first.dest[0] == 20_000.0
        assert 0.0 <= first.start[1] <= 20_000.0

    def test_explicit_endpoints_are_kept(self, grid_plan):
        path = PathSpec(kind="r1", start=(1.0, 2.0), dest=(3.0, 4.0))
        assert simulator.resolve_path(grid_plan, path, seed=0) is path

    def test_path_axes(self):
        assert simulator.path_axes("r1") == ("x",)
        assert simulator.path_axes("r2") == ("y",)
        assert simulator.path_axes("r3") == ("x", "y")
        assert simulator.path_axes("random") == ("x", "y")


class TestSimulatePath:
    def test_inside_one_cluster(self, setup, ins_model, leg):
        plan = deployment.layout_clusters(10.0, 3, 3, 1916.0)
        path = PathSpec(kind="r1", start=(4500.0, 5000.0), dest=(5500.0, 5000.0))
        report = simulator.simulate_path(plan, setup, path, ins_model, leg, seed=1)

        assert len(report.per_sample) == 11
        assert all(p.in_coverage for p in report.per_sample)
        design = setup.design
        points = np.column_stack([np.linspace(4500.0, 5500.0, 11), np.full(11, 5000.0)])
        cluster = design.cluster(3).moved_to((5000.0, 5000.0))
        slab = setup.profile.slab(design.target_depth, design.anchor_depth, design.layer_thickness)
        crlb, ok = localization.crlb_many(points, 500.0, cluster, slab, setup.params, design.comm_range, design.rule)
        assert ok.all()
        np.testing.assert_allclose([p.error_var for p in report.per_sample], crlb, rtol=1e-12)
        assert report.mean_error_var == pytest.approx(float(np.mean(crlb)), rel=1e-12)

    def test_slab_follows_path_depth(self, ins_model, leg):
        setup = SimulationSetup(profile=SoundSpeedProfile.builtin("default-munk-like"))
        plan = deployment.layout_clusters(10.0, 3, 3, 1916.0)
        path = PathSpec(kind="r1", start=(4500.0, 5000.0), dest=(5500.0, 5000.0), depth=1500.0)
        report = simulator.simulate_path(plan, setup, path, ins_model, leg, seed=1)

        design = setup.design
        cluster = design.cluster(3).moved_to((5000.0, 5000.0))
        slab = slab_for(setup.profile, 1500.0, design.anchor_depth, design.layer_thickness)
        assert len(report.per_sample) == 11
        for sample, x in zip(report.per_sample, np.linspace(4500.0, 5500.0, 11)):
            assert sample.in_coverage
            expected = localization.point_crlb(
                (x, 5000.0, 1500.0), cluster, slab, setup.params, design.comm_range, design.rule
            )
            assert sample.error_var == pytest.approx(expected, rel=1e-9)

    def test_pinned_center_uses_path_depth(self, ins_model, leg):
        profile = SoundSpeedProfile.builtin("default-munk-like")
        setup = SimulationSetup(profile=profile, coverage_model="disc", pin_center_error=True)
        plan = deployment.layout_clusters(10.0, 3, 3, 1916.0)
        design = setup.design
        ring = design.cluster(3).ring_radius

        def pinned(depth):
            path = PathSpec(kind="r1", start=(4500.0, 5000.0), dest=(5500.0, 5000.0), depth=depth)
            report = simulator.simulate_path(plan, setup, path, ins_model, leg, seed=1)
            assert all(p.in_coverage for p in report.per_sample)
            values = {p.error_var for p in report.per_sample}
            assert len(values) == 1
            return values.pop()

        elevation = math.atan2(design.anchor_depth - 1500.0, ring)
        slab = slab_for(profile, 1500.0, design.anchor_depth, design.layer_thickness)
        expected = localization.center_crlb(3, elevation, los_variance(slab, elevation, setup.params))
        assert pinned(1500.0) == pytest.approx(expected, rel=1e-12)
        assert pinned(1500.0) != pytest.approx(pinned(design.target_depth), rel=1e-3)

    @pytest.mark.parametrize("kind, axes", [("r1", 1), ("random", 2)])
    def test_constant_drift_outside_coverage(self, kind, axes, leg):
        plan = deployment.layout_clusters(30.0, 3, 3, 100.0)
        setup = SimulationSetup(coverage_model="disc")
        model = InsDivergenceModel(sigma0_sq=0.02, beta1=0.0, beta2=0.053)
        path = PathSpec(kind=kind, start=(0.0, 0.0), dest=(30_000.0, 0.0))
        report = simulator.simulate_path(plan, setup, path, model, leg, seed=3)
        assert not any(p.in_coverage for p in report.per_sample)
        assert {p.error_var for p in report.per_sample} == {axes * 0.02}
        assert report.mean_error_var == pytest.approx(axes * 0.02)

    def test_samples_every_step_from_zero(self, setup, ins_model, leg, grid_plan):
        report = simulator.simulate_path(grid_plan, setup, PathSpec(kind="r1"), ins_model, leg, seed=0)
        s = [p.s for p in report.per_sample]
        assert s[0] == 0.0
        assert len(s) == 201
        assert np.allclose(np.diff(s), leg.step)

    def test_fix_resets_drift(self, setup, ins_model, leg, grid_plan):
        report = simulator.simulate_path(grid_plan, setup, PathSpec(kind="r1"), ins_model, leg, seed=0)
        samples = report.per_sample
        entries = [i for i in range(1, len(samples)) if samples[i].in_coverage and not samples[i - 1].in_coverage]
        assert entries
        for i in entries:
            assert samples[i].error_var < ins_model.sigma0_sq
            assert samples[i].error_var < samples[i - 1].error_var

    def test_drift_nondecreasing_between_fixes(self, setup, ins_model, leg, grid_plan):
        report = simulator.simulate_path(grid_plan, setup, PathSpec(kind="r3"), ins_model, leg, seed=0)
        samples = report.per_sample
        for prev, cur in zip(samples, samples[1:]):
            if not prev.in_coverage and not cur.in_coverage:
                assert cur.error_var >= prev.error_var

    def test_diagonal_at_least_row_when_it_navigates_more(self, setup, ins_model, leg, grid_plan):
        r1 = simulator.simulate_path(grid_plan, setup, PathSpec(kind="r1"), ins_model, leg, seed=0)
        r3 = simulator.simulate_path(grid_plan, setup, PathSpec(kind="r3"), ins_model, leg, seed=0)
        assert r3.nav_fraction > r1.nav_fraction
        assert r3.mean_error_var >= r1.mean_error_var

    def test_outside_region(self, setup, ins_model, leg, grid_plan):
        path = PathSpec(kind="r1", start=(-500.0, 100.0), dest=(5000.0, 100.0))
        with pytest.raises(PathOutsideRegion):
            simulator.simulate_path(grid_plan, setup, path, ins_model, leg, seed=0)

    def test_depth_below_anchors(self, setup, ins_model, leg, grid_plan):
        with pytest.raises(InputError):
            simulator.simulate_path(grid_plan, setup, PathSpec(kind="r1", depth=3000.0), ins_model, leg, seed=0)

    def test_overflow_diverges(self, setup, leg):
        plan = deployment.layout_clusters(30.0, 3, 3, 100.0)
        model = InsDivergenceModel(beta1=1.0, beta2=10.0, distance_unit_m=1.0)
        with pytest.raises(Diverged):
            simulator.simulate_path(plan, setup, PathSpec(kind="r2"), model, leg, seed=0)


class TestScalingLawCrossCheck:
    def test_pinned_row_matches_scaling_law(self, ins_model):
        """Row crossings with disc coverage track the length-weighted estimate."""
        leg = LegSampling(speed=2.0, slot=5.0)
        setup = SimulationSetup(coverage_model="disc", pin_center_error=True)
        design = setup.design
        slab = setup.profile.slab(design.target_depth, design.anchor_depth, design.layer_thickness)
        sigma_d_sq = los_variance(slab, design.design_elevation, setup.params)

        rng = np.random.default_rng(17)
        for _ in range(20):
            per_cluster = int(rng.integers(3, 6))
            n_total = 9 * per_cluster
            d_com = float(rng.uniform(1500.0, 3000.0))
            gap = float(rng.uniform(500.0, 4000.0))
            side_km = (2 * d_com * 3 + 4 * gap) / 1000.0
            plan = deployment.layout_clusters(side_km, n_total, per_cluster, d_com)

            report = simulator.simulate_path(plan, setup, PathSpec(kind="r1"), ins_model, leg, seed=0)
            expected = planner.scaling_law(
                n_total, per_cluster, side_km, d_com, design.design_elevation, sigma_d_sq, ins_model, leg
            )
            assert report.mean_error_var == pytest.approx(expected, rel=0.05)


class TestMonteCarlo:
    def test_single_trial_equals_one_voyage(self, setup, ins_model, leg, grid_plan):
        reports, summary = simulator.monte_carlo(grid_plan, setup, "random", 1, ins_model, leg, master_seed=2025)
        direct = simulator.simulate_path(
            grid_plan, setup, PathSpec(kind="random"), ins_model, leg, simulator.trial_seed(2025, 0)
        )
        assert reports == [direct]
        assert summary.mean == direct.mean_error_var
        assert summary.std == 0.0

    def test_same_seed_is_bit_identical(self, setup, ins_model, leg, grid_plan):
        first = simulator.monte_carlo(grid_plan, setup, "random", 8, ins_model, leg, master_seed=7)
        second = simulator.monte_carlo(grid_plan, setup, "random", 8, ins_model, leg, master_seed=7)
        assert first == second

    def test_worker_count_does_not_change_results(self, setup, ins_model, leg, grid_plan):
        serial = simulator.monte_carlo(grid_plan, setup, "random", 12, ins_model, leg, 99, max_workers=1)
        threaded = simulator.monte_carlo(grid_plan, setup, "random", 12, ins_model, leg, 99, max_workers=4)
        assert serial == threaded
        assert [r.trial_seed for r in serial[0]] == [simulator.trial_seed(99, t) for t in range(12)]

    def test_summary_statistics(self, setup, ins_model, leg, grid_plan):
        reports, summary = simulator.monte_carlo(grid_plan, setup, "random", 10, ins_model, leg, master_seed=5)
        values = [r.mean_error_var for r in reports]
        assert summary.trials == 10
        assert summary.mean == pytest.approx(np.mean(values), rel=1e-12)
        assert summary.std == pytest.approx(np.std(values), rel=1e-9)
        assert summary.min == min(values)
        assert summary.max == max(values)
        assert summary.rmse_mean == pytest.approx(np.mean(np.sqrt(values)), rel=1e-12)

    def test_rejects_zero_trials(self, setup, ins_model, leg, grid_plan):
        with pytest.raises(InputError):
            simulator.monte_carlo(grid_plan, setup, "random", 0, ins_model, leg, master_seed=1)

    @pytest.mark.slow
    def test_shorter_gaps_give_smaller_error(self, ins_model, leg):
        setup = SimulationSetup()
        means = {}
        gaps = {}
        for per_cluster in (3, 4, 5):
            d_com = localization.coverage_radius(setup.design.cluster(per_cluster))
            plan = deployment.layout_clusters(20.0, 60, per_cluster, d_com)
            gaps[per_cluster] = plan.d_h
            _, summary = simulator.monte_carlo(plan, setup, "random", 100, ins_model, leg, master_seed=2024)
            means[per_cluster] = summary.mean
        by_gap = sorted(gaps, key=gaps.get)
        by_error = sorted(means, key=means.get)
        assert by_gap == by_error
