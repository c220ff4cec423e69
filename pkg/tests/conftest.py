"""Shared fixtures for the AUV Anchor Tools test suite."""

import json
import math

import pytest

from auv_anchor_tools.config import RuntimeConfig
from auv_anchor_tools.models import (
    ClusterDesign,
    InsDivergenceModel,
    LegSampling,
    RangeErrorParams,
    SoundSpeedProfile,
)

DESIGN_ELEVATION = math.radians(46.0)


@pytest.fixture(autouse=True)
def reset_runtime():
    """Keep the runtime singleton from leaking between tests."""
    RuntimeConfig.reset()
    yield
    RuntimeConfig.reset()


@pytest.fixture
def params():
    return RangeErrorParams(gamma=0.001)


@pytest.fixture
def iso_profile():
    return SoundSpeedProfile.builtin("iso1500")


@pytest.fixture
def design():
    return ClusterDesign()


@pytest.fixture
def ins_model():
    return InsDivergenceModel(sigma0_sq=0.01, beta1=0.039, beta2=0.053, distance_unit_m=1000.0)


@pytest.fixture
def leg():
    return LegSampling(speed=2.0, slot=50.0)


@pytest.fixture
def write_config(tmp_path):
    """Write a scenario dict to a JSON file and return its path."""

    def _write(data, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
