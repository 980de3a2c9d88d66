import numpy as np
import pytest

from mcastpower.mdp import PowerWindow, encode_state, lagrangian_reward, window_power


class TestEncodeState:
    def test_layout_and_scaling(self, two_user_config):
        two_user_config.gain_scale = 2.0
        s = encode_state([0.2, 1.0], [1.0, 0.0], two_user_config)
        assert s.tolist() == [0.1, 0.5, 1.0, 0.0]

    def test_length_is_2l(self, four_user_config):
        s = encode_state(np.ones(4), np.zeros(4), four_user_config)
        assert s.shape == (8,)

    def test_shape_mismatch(self, two_user_config):
        with pytest.raises(ValueError):
            encode_state([1.0], [1.0, 0.0], two_user_config)


class TestLagrangianReward:
    def test_values(self):
        assert lagrangian_reward(3, 10.0, 0.0) == 3.0
        assert lagrangian_reward(3, 10.0, 0.2) == pytest.approx(1.0)
        assert lagrangian_reward(0, 4.0, 0.5) == pytest.approx(-2.0)


class TestPowerWindow:
    def test_mean_matches_reference(self):
        rng = np.random.default_rng(0)
        history = []
        win = PowerWindow(5)
        assert not win.warmed_up
        assert win.mean() == 0.0
        for _ in range(23):
            p = float(rng.uniform(1.0, 50.0))
            history.append(p)
            got = win.push(p)
            assert got == pytest.approx(window_power(history, 5))
        assert win.warmed_up

    def test_partial_fill(self):
        win = PowerWindow(200)
        win.push(4.0)
        win.push(6.0)
        assert win.mean() == pytest.approx(5.0)

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            PowerWindow(0)
        with pytest.raises(ValueError):
            window_power([1.0], 0)

    def test_window_power_empty(self):
        assert window_power([], 10) == 0.0
