import hypothesis
import numpy as np
import pytest

from flickerband.geometry import LayerKinematics, StripeBand

hypothesis.settings.register_profile("suite", max_examples=50, deadline=None)
hypothesis.settings.load_profile("suite")


@pytest.fixture
def band():
    return StripeBand(width=10.0, gap=6.0, feather=1.5)


@pytest.fixture
def kin():
    return LayerKinematics(center_x=21.4, center_y=33.9, tilt=0.37,
                           velocity_x=1.2, velocity_y=-0.8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
