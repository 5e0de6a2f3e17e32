from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flickerband.metrics import (clamp_confidence, fa_mse, verify_injection_identity,
                                 zero_init_augment)


def naive_mse(pred, truth):
    total = 0.0
    count = 0
    for a, b in zip(pred.ravel().tolist(), truth.ravel().tolist()):
        total += (a - b) ** 2
        count += 1
    return total / count


class TestFaMse:
    def test_identical_is_zero(self, rng):
        maps = rng.random((8, 8, 3))
        assert fa_mse(maps, maps) == 0.0

    def test_maximal_unit_error(self):
        assert fa_mse(np.ones((4, 4)), np.zeros((4, 4))) == 1.0

    def test_hand_value(self):
        assert fa_mse(np.array([0.5, 0.0]), np.array([0.0, 0.5])) == 0.25

    def test_matches_double_loop_oracle(self, rng):
        for _ in range(10):
            pred = rng.random((32, 32, 4))
            truth = rng.random((32, 32, 4))
            assert fa_mse(pred, truth) == pytest.approx(naive_mse(pred, truth),
                                                        abs=1e-12)

    def test_symmetric(self, rng):
        a, b = rng.random((6, 7)), rng.random((6, 7))
        assert fa_mse(a, b) == fa_mse(b, a)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fa_mse(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fa_mse(np.zeros((0,)), np.zeros((0,)))

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_nonnegative(self, seed):
        r = np.random.default_rng(seed)
        assert fa_mse(r.random(16), r.random(16)) >= 0.0

    def test_clamp_confidence(self):
        raw = np.array([-0.5, 0.25, 1.75])
        assert np.array_equal(clamp_confidence(raw), [0.0, 0.25, 1.0])


class TestZeroInit:
    def test_block_structure(self, rng):
        w4 = rng.standard_normal((2, 8))
        widened = zero_init_augment(w4, extra_dim=2)
        assert widened.widened.shape == (2, 10)
        assert np.array_equal(widened.widened[:, :8], w4)
        assert np.all(widened.widened[:, 8:] == 0.0)

    def test_zero_in_zero_out(self):
        widened = zero_init_augment(np.zeros((3, 4)))
        assert np.all(widened.widened == 0.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            zero_init_augment(np.array([[np.inf, 1.0]]))

    def test_identity_weight_example(self):
        widened = zero_init_augment(np.eye(2), extra_dim=1)
        x = np.array([1.0, 2.0])
        assert verify_injection_identity(widened, x, np.array([123.4])) == 0.0

    def test_deviation_exactly_zero_random_trials(self, rng):
        for _ in range(30):
            out_d, in_d, extra, cols = rng.integers(1, 24, size=4)
            widened = zero_init_augment(rng.standard_normal((out_d, in_d)),
                                        extra_dim=int(extra))
            activations = rng.standard_normal((in_d, cols))
            prior = rng.standard_normal((extra, cols))
            assert verify_injection_identity(widened, activations, prior) == 0.0

    def test_perturbed_entry_leaks_proportionally(self, rng):
        widened = zero_init_augment(rng.standard_normal((4, 16)), extra_dim=2)
        appended = widened.appended.copy()
        appended[0, 0] = 1e-3
        broken = replace(widened, appended=appended)
        activations = rng.standard_normal((16, 3))
        prior = np.zeros((2, 3))
        prior[0, :] = 1.0
        deviation = verify_injection_identity(broken, activations, prior)
        assert deviation == pytest.approx(1e-3, rel=1e-9)

    def test_shape_errors(self, rng):
        widened = zero_init_augment(rng.standard_normal((3, 6)))
        with pytest.raises(ValueError):
            verify_injection_identity(widened, rng.standard_normal((5, 2)),
                                      rng.standard_normal((1, 2)))
        with pytest.raises(ValueError):
            verify_injection_identity(widened, rng.standard_normal((6, 2)),
                                      rng.standard_normal((2, 2)))
