import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flickerband.errors import ConfigError
from flickerband.geometry import (FrameContext, LayerKinematics, StripeBand,
                                  orthogonal_coord, phase_shift, project_static,
                                  smoothstep, stripe_index, uniform_occupancy)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
small = st.floats(min_value=-500.0, max_value=500.0, allow_nan=False)


def make_kin(draw_tuple):
    cx, cy, tilt, vx, vy = draw_tuple
    return LayerKinematics(cx, cy, tilt, vx, vy)


kin_strategy = st.tuples(small, small,
                         st.floats(min_value=-3.0, max_value=3.0),
                         st.floats(min_value=-5.0, max_value=5.0),
                         st.floats(min_value=-5.0, max_value=5.0)).map(make_kin)

band_strategy = st.tuples(st.floats(min_value=2.0, max_value=50.0),
                          st.floats(min_value=0.0, max_value=50.0),
                          st.floats(min_value=0.1, max_value=1.0)).map(
    lambda t: StripeBand(width=t[0], gap=t[1], feather=t[2]))


class TestTypes:
    def test_band_period_is_width_plus_gap(self):
        band = StripeBand(width=10.0, gap=6.0, feather=1.5)
        assert band.period == 16.0

    @pytest.mark.parametrize("width,gap,feather", [
        (0.5, 5.0, 0.2),    # width below 1
        (10.0, -1.0, 1.0),  # negative gap
        (10.0, 5.0, 0.0),   # feather must be positive
        (10.0, 5.0, 5.1),   # feather above width/2
        (float("nan"), 5.0, 1.0),
    ])
    def test_band_rejects_invalid(self, width, gap, feather):
        with pytest.raises(ConfigError):
            StripeBand(width=width, gap=gap, feather=feather)

    def test_kinematics_normalizes_tilt(self):
        assert LayerKinematics(tilt=3 * math.pi).tilt == pytest.approx(math.pi - 2 * math.pi)
        assert -math.pi <= LayerKinematics(tilt=math.pi).tilt < math.pi
        assert LayerKinematics(tilt=0.3).tilt == pytest.approx(0.3)

    def test_kinematics_rejects_nonfinite(self):
        with pytest.raises(ConfigError):
            LayerKinematics(velocity_x=float("inf"))

    def test_frame_context_rejects_degenerate(self):
        with pytest.raises(ConfigError):
            FrameContext(0, 4)
        with pytest.raises(ConfigError):
            FrameContext(4, 4, frame_index=-1)


class TestProjection:
    def test_axis_aligned(self):
        assert project_static(3, 5, LayerKinematics()) == 5.0

    def test_center_pixel_is_zero(self):
        kin = LayerKinematics(center_x=7.5, center_y=-2.25, tilt=1.1)
        assert project_static(7.5, -2.25, kin) == 0.0

    def test_diagonal_cancellation(self):
        assert project_static(1, 1, LayerKinematics(tilt=math.pi / 4)) == pytest.approx(0.0, abs=1e-12)

    def test_phase_shift_zero_time(self):
        kin = LayerKinematics(tilt=0.7, velocity_x=3.0, velocity_y=-1.0)
        assert phase_shift(0, kin) == 0.0

    def test_phase_shift_hand_values(self):
        # -(2*3)*sin(pi/2) = -6 ; (4*2)*cos(0) = 8
        assert phase_shift(3, LayerKinematics(tilt=math.pi / 2, velocity_x=2.0)) == pytest.approx(-6.0)
        assert phase_shift(2, LayerKinematics(tilt=0.0, velocity_y=4.0)) == pytest.approx(8.0)

    def test_orthogonal_at_t0_is_static(self):
        kin = LayerKinematics(4.0, 5.0, 0.9, 2.0, 3.0)
        assert orthogonal_coord(11.0, -3.0, 0, kin) == project_static(11.0, -3.0, kin)

    def test_orthogonal_moving_center_pixel(self):
        # static projection 0, drift -(1*5)*sin(pi/2) = -5, so v = 5
        kin = LayerKinematics(tilt=math.pi / 2, velocity_x=1.0)
        assert orthogonal_coord(0.0, 0.0, 5, kin) == pytest.approx(5.0)

    @given(kin_strategy, small, small, st.integers(min_value=0, max_value=50))
    def test_zero_velocity_is_static(self, kin, x, y, t):
        frozen = LayerKinematics(kin.center_x, kin.center_y, kin.tilt, 0.0, 0.0)
        assert orthogonal_coord(x, y, t, frozen) == project_static(x, y, frozen)


class TestStripeIndex:
    def test_origin(self):
        band = StripeBand(width=10.0, gap=2.0, feather=1.0)
        assert stripe_index(0.0, band) == (0, 0.0)

    def test_hand_values(self):
        band = StripeBand(width=10.0, gap=2.0, feather=1.0)  # period 12
        assert stripe_index(25.0, band) == (2, 24.0)
        assert stripe_index(-7.0, band) == (-1, -12.0)

    def test_ties_round_away_from_zero(self):
        band = StripeBand(width=10.0, gap=2.0, feather=1.0)
        assert stripe_index(6.0, band)[0] == 1
        assert stripe_index(-6.0, band)[0] == -1

    @given(st.floats(min_value=-1e5, max_value=1e5), band_strategy)
    def test_residual_bound(self, v, band):
        _, v_c = stripe_index(v, band)
        assert abs(v - v_c) <= band.period / 2 + 1e-9


class TestSmoothstep:
    def test_clamps(self):
        assert smoothstep(-1, 1, -2) == 0.0
        assert smoothstep(-1, 1, 5) == 1.0

    def test_midpoint(self):
        assert smoothstep(-1, 1, 0) == 0.5

    def test_hermite_value(self):
        # x = 0.75 -> 3x^2 - 2x^3 = 0.84375
        x = 0.75
        assert smoothstep(-1, 1, 0.5) == 3 * x ** 2 - 2 * x ** 3 == 0.84375

    def test_rejects_bad_edges(self):
        with pytest.raises(ConfigError):
            smoothstep(1.0, 1.0, 0.5)
        with pytest.raises(ConfigError):
            smoothstep(2.0, -2.0, 0.5)

    @given(st.lists(st.floats(min_value=-10, max_value=10), min_size=2, max_size=40))
    def test_monotone(self, values):
        d = np.sort(np.array(values))
        s = smoothstep(-1.5, 1.5, d)
        assert np.all(np.diff(s) >= 0.0)


class TestUniformOccupancy:
    def test_deep_inside(self):
        band = StripeBand(width=10.0, gap=6.0, feather=1.0)
        assert uniform_occupancy(0, 0, 0, LayerKinematics(), band) == 1.0

    def test_boundary_is_half(self):
        band = StripeBand(width=10.0, gap=6.0, feather=1.0)
        # theta = 0: v = y, stripe edge at y = 5
        assert uniform_occupancy(0, 5.0, 0, LayerKinematics(), band) == 0.5

    def test_beyond_feather_is_zero(self):
        band = StripeBand(width=10.0, gap=8.0, feather=1.0)
        assert uniform_occupancy(0, 7.0, 0, LayerKinematics(), band) == 0.0

    @given(kin_strategy, band_strategy, small, small, st.integers(min_value=0, max_value=20))
    def test_in_unit_interval(self, kin, band, x, y, t):
        occ = uniform_occupancy(x, y, t, kin, band)
        assert 0.0 <= occ <= 1.0

    @given(kin_strategy, band_strategy, small, small, st.integers(min_value=0, max_value=12))
    def test_translation_kinematics_equivalence(self, kin, band, x, y, t):
        moved = LayerKinematics(kin.center_x + kin.velocity_x * t,
                                kin.center_y + kin.velocity_y * t,
                                kin.tilt, 0.0, 0.0)
        assert uniform_occupancy(x, y, t, kin, band) == pytest.approx(
            uniform_occupancy(x, y, 0, moved, band), abs=1e-9)

    @given(band_strategy, st.floats(min_value=-200, max_value=200))
    def test_periodic_in_v(self, band, y):
        kin = LayerKinematics()  # theta 0: v = y
        a = uniform_occupancy(0.0, y, 0, kin, band)
        b = uniform_occupancy(0.0, y + band.period, 0, kin, band)
        assert a == pytest.approx(b, abs=1e-9)
