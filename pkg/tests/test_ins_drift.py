"""Tests for INS drift variance, leg expectations and divergence fitting."""

import math

import numpy as np
import pytest

from auv_anchor_tools.core.errors import Diverged, InsufficientData
from auv_anchor_tools.models import InsDivergenceModel, LegSampling
from auv_anchor_tools.modules import ins_drift


class TestPositionVariance:
    def test_at_zero_distance(self, ins_model):
        assert ins_drift.position_variance(ins_model, 0.0) == pytest.approx(0.049)

    def test_after_ten_units(self, ins_model):
        assert ins_drift.position_variance(ins_model, 10_000.0) == pytest.approx(0.0763, abs=1e-4)

    def test_unit_scales_exponent(self):
        km = InsDivergenceModel(sigma0_sq=0.0, beta1=1.0, beta2=0.5, distance_unit_m=1000.0)
        meters = InsDivergenceModel(sigma0_sq=0.0, beta1=1.0, beta2=0.0005, distance_unit_m=1.0)
        assert ins_drift.position_variance(km, 3000.0) == pytest.approx(ins_drift.position_variance(meters, 3000.0))

    def test_no_divergence_is_constant(self):
        model = InsDivergenceModel(sigma0_sq=0.02, beta1=0.0, beta2=5.0)
        values = ins_drift.position_variance_many(model, np.array([0.0, 1e3, 1e9]))
        assert values.tolist() == [0.02, 0.02, 0.02]

    def test_nondecreasing(self, ins_model):
        values = ins_drift.position_variance_many(ins_model, np.linspace(0.0, 50_000.0, 501))
        assert np.all(np.diff(values) >= 0)

    def test_overflow_saturates(self):
        model = InsDivergenceModel(beta1=1.0, beta2=10.0, distance_unit_m=1.0)
        assert math.isinf(ins_drift.position_variance(model, 1e6))

    @pytest.mark.parametrize("delta_p", [-1.0, float("nan")])
    def test_rejects_bad_distance(self, ins_model, delta_p):
        with pytest.raises(ValueError):
            ins_drift.position_variance(ins_model, delta_p)


class TestLegExpectation:
    def test_matches_direct_sum(self, ins_model):
        leg = LegSampling(speed=2.0, slot=50.0, distance=2000.0)
        direct = sum(ins_drift.position_variance(ins_model, n * 100.0) for n in range(1, 21)) / 20
        assert ins_drift.leg_error_expectation(ins_model, leg) == pytest.approx(direct, rel=1e-12)

    def test_short_leg_has_one_sample(self, ins_model):
        leg = LegSampling(speed=2.0, slot=50.0, distance=30.0)
        assert leg.sample_count == 1
        expected = ins_drift.position_variance(ins_model, 100.0)
        assert ins_drift.leg_error_expectation(ins_model, leg) == pytest.approx(expected)

    def test_two_axes_double_one(self, ins_model):
        leg = LegSampling(distance=5000.0)
        single = ins_drift.leg_error_expectation(ins_model, leg, axes=("x",))
        both = ins_drift.leg_error_expectation(ins_model, leg, axes=("x", "y"))
        assert both == pytest.approx(2 * single)

    def test_projection_shortens_axis_travel(self, ins_model):
        leg = LegSampling(distance=5000.0)
        full = ins_drift.leg_error_expectation(ins_model, leg, axes=("x",))
        projected = ins_drift.leg_error_expectation(ins_model, leg, axes=("x",), projection={"x": 0.5})
        assert projected < full

    def test_nondecreasing_in_leg_length(self, ins_model, leg):
        values = [
            ins_drift.leg_error_expectation(ins_model, leg.with_distance(d))
            for d in np.linspace(100.0, 30_000.0, 120)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_unknown_axis(self, ins_model, leg):
        with pytest.raises(ValueError, match="unknown axes"):
            ins_drift.leg_error_expectation(ins_model, leg, axes=("z",))

    def test_diverged(self, leg):
        model = InsDivergenceModel(beta1=1.0, beta2=5.0, distance_unit_m=1.0)
        with pytest.raises(Diverged):
            ins_drift.leg_error_expectation(model, leg.with_distance(10_000.0))


def _series(model, distances):
    return list(zip(distances, ins_drift.position_variance_many(model, np.asarray(distances))))


class TestFitDivergence:
    def test_recovers_noiseless_coefficients(self, ins_model):
        distances = np.linspace(0.0, 20_000.0, 50)
        fit = ins_drift.fit_divergence(_series(ins_model, distances))
        assert fit.model.sigma0_sq == pytest.approx(0.01, rel=1e-6)
        assert fit.model.beta1 == pytest.approx(0.039, rel=1e-6)
        assert fit.model.beta2 == pytest.approx(0.053, rel=1e-6)
        assert fit.points == 50
        assert fit.residual < 1e-8

    def test_noisy_rate_within_ten_percent(self, ins_model):
        distances = np.linspace(0.0, 20_000.0, 50)
        clean = ins_drift.position_variance_many(ins_model, distances)
        rates = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            noisy = clean * (1.0 + rng.normal(0.0, 0.01, clean.size))
            rates.append(ins_drift.fit_divergence(list(zip(distances, noisy))).model.beta2)
        assert float(np.median(rates)) == pytest.approx(0.053, rel=0.1)

    def test_constant_series_prefers_constant_model(self):
        fit = ins_drift.fit_divergence([(d, 0.2) for d in (0.0, 500.0, 1000.0, 1500.0)])
        assert fit.model.beta1 == 0.0
        assert fit.model.beta2 == 0.0
        assert fit.model.sigma0_sq == pytest.approx(0.2)

    def test_distance_unit_is_kept(self):
        model = InsDivergenceModel(sigma0_sq=0.0, beta1=0.5, beta2=0.002, distance_unit_m=1.0)
        fit = ins_drift.fit_divergence(_series(model, np.linspace(0.0, 1000.0, 30)), distance_unit_m=1.0)
        assert fit.model.distance_unit_m == 1.0
        assert fit.model.beta2 == pytest.approx(0.002, rel=1e-5)

    @pytest.mark.parametrize(
        "series",
        [
            [(0.0, 0.1), (1.0, 0.2)],
            [(0.0, 0.1), (0.0, 0.2), (1.0, 0.3)],
            [(-1.0, 0.1), (0.0, 0.2), (1.0, 0.3)],
            [(0.0, 0.1), (1.0, float("inf")), (2.0, 0.3)],
        ],
        ids=["too-short", "duplicate-distance", "negative-distance", "non-finite"],
    )
    def test_insufficient_data(self, series):
        with pytest.raises(InsufficientData):
            ins_drift.fit_divergence(series)


class TestLoadErrorSeries:
    def test_reads_columns(self, tmp_path):
        path = tmp_path / "errors.csv"
        path.write_text("delta_p,variance_m2\n0,0.05\n1000,0.06\n", encoding="utf-8")
        assert ins_drift.load_error_series(path) == [(0.0, 0.05), (1000.0, 0.06)]

    def test_missing_column(self, tmp_path):
        path = tmp_path / "errors.csv"
        path.write_text("distance,variance\n0,0.05\n", encoding="utf-8")
        with pytest.raises(InsufficientData, match="delta_p"):
            ins_drift.load_error_series(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InsufficientData):
            ins_drift.load_error_series(tmp_path / "absent.csv")
