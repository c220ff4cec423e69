"""Tests for refraction-aware range variance."""

import math

import numpy as np
import pytest

from auv_anchor_tools.core.errors import InvalidAngle, TotalReflection
from auv_anchor_tools.models import RangeErrorParams, SoundSpeedProfile
from auv_anchor_tools.modules.profile_acoustics import (
    los_variance,
    los_variance_many,
    los_variance_terms,
    resolve_profile,
    slab_for,
)


def layered(*speeds):
    return SoundSpeedProfile(layers=tuple((100.0 * i, s) for i, s in enumerate(speeds)))


class TestLosVariance:
    def test_iso_speed_vertical_incidence(self, params):
        assert los_variance(layered(1500, 1500), math.pi / 2, params) == pytest.approx(1.0e-6, rel=1e-12)

    def test_single_layer_is_empty_sum(self, params):
        assert los_variance(layered(1500), 0.8, params) == 0.0

    def test_reflection_entering_faster_layer(self, params):
        with pytest.raises(TotalReflection) as exc:
            los_variance(layered(1480, 1520), math.radians(10), params)
        assert exc.value.layer == 2

    def test_three_layer_reference_value(self, params):
        alpha = math.radians(46)
        cos_sq = math.cos(alpha) ** 2
        s1 = 1480.0
        expected = sum(
            0.001**2 * s**2 / (s1**2 - s**2 * cos_sq) for s in (1480.0, 1500.0)
        )
        value = los_variance(layered(1480, 1500, 1520), alpha, params)
        assert value == pytest.approx(expected, rel=1e-12)
        assert value == pytest.approx(3.97e-6, rel=2e-3)

    def test_terms_sum_to_variance(self, params):
        profile = layered(1480, 1500, 1520)
        terms = los_variance_terms(profile, 0.9, params)
        assert terms.shape == (2,)
        assert math.fsum(terms) == pytest.approx(los_variance(profile, 0.9, params), rel=1e-15)

    @pytest.mark.parametrize("angle", [0.0, -0.1, math.pi / 2 + 1e-6, float("nan")])
    def test_invalid_angle(self, params, angle):
        with pytest.raises(InvalidAngle):
            los_variance(layered(1500, 1500), angle, params)

    def test_iso_speed_closed_form_random(self, params):
        rng = np.random.default_rng(7)
        for _ in range(200):
            layers = int(rng.integers(2, 11))
            alpha = float(rng.uniform(0.1, math.pi / 2))
            profile = layered(*([1500.0] * layers))
            expected = (layers - 1) * params.gamma**2 / math.sin(alpha) ** 2
            assert los_variance(profile, alpha, params) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("name", ["iso1500", "default-munk-like"])
    def test_strictly_decreasing_in_elevation(self, params, name):
        slab = slab_for(SoundSpeedProfile.builtin(name), 500.0, 3000.0)
        values = [los_variance(slab, math.radians(d), params) for d in np.arange(20.0, 90.01, 0.5)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_gamma_scales_quadratically(self):
        profile = layered(1490, 1500, 1510)
        base = los_variance(profile, 1.0, RangeErrorParams(gamma=0.001))
        assert los_variance(profile, 1.0, RangeErrorParams(gamma=0.002)) == pytest.approx(4 * base)


class TestVectorized:
    def test_matches_scalar(self, params):
        profile = layered(1480, 1500, 1520)
        elevations = np.linspace(0.5, math.pi / 2, 17)
        variances, reflected = los_variance_many(profile, elevations, params)
        assert not reflected.any()
        for alpha, v in zip(elevations, variances):
            assert v == pytest.approx(los_variance(profile, float(alpha), params), rel=1e-14)

    def test_flags_reflection_instead_of_raising(self, params):
        profile = layered(1480, 1520)
        variances, reflected = los_variance_many(profile, np.array([math.radians(10), 1.2]), params)
        assert reflected.tolist() == [True, False]
        assert math.isnan(variances[0])
        assert variances[1] > 0

    def test_rejects_zero_elevation(self, params):
        with pytest.raises(InvalidAngle):
            los_variance_many(layered(1500, 1500), np.array([0.0, 1.0]), params)


class TestProfiles:
    def test_slab_layer_count(self, iso_profile):
        slab = slab_for(iso_profile, 500.0, 3000.0, 100.0)
        assert len(slab) == 25
        assert slab.depths[0] == 500.0
        assert slab.depths[-1] == 2900.0

    def test_slab_interpolates_speeds(self):
        profile = SoundSpeedProfile(layers=((0.0, 1500.0), (1000.0, 1520.0)))
        slab = profile.slab(200.0, 600.0, 200.0)
        assert slab.speeds.tolist() == pytest.approx([1504.0, 1508.0])

    def test_layers_must_increase(self):
        with pytest.raises(ValueError):
            SoundSpeedProfile(layers=((0.0, 1500.0), (0.0, 1510.0)))

    def test_builtin_and_unknown(self):
        assert len(resolve_profile("default-munk-like")) == 3
        with pytest.raises(ValueError, match="Unknown profile"):
            resolve_profile("nope")

    def test_from_csv(self, tmp_path):
        path = tmp_path / "ssp.csv"
        path.write_text("depth_m,speed_mps\n0,1500\n1000,1490\n", encoding="utf-8")
        profile = resolve_profile("iso1500", csv_path=path)
        assert profile.layers == ((0.0, 1500.0), (1000.0, 1490.0))
