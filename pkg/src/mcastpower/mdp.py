"""State encoding, Lagrangian reward shaping, and the windowed power average."""

import numpy as np


def encode_state(gains, requests, config):
    """2L state vector: gains / gain_scale followed by the request indicators."""
    gains = np.asarray(gains, dtype=float)
    requests = np.asarray(requests, dtype=float)
    if gains.shape != (config.num_users,) or requests.shape != (config.num_users,):
        raise ValueError("gains and requests must both have length L")
    return np.concatenate([gains / config.gain_scale, requests])


def lagrangian_reward(successes, power, beta):
    """Shaped instantaneous reward: successes - beta * power."""
    return successes - beta * power


class PowerWindow:
    """Mean of the last `window` chosen transmit powers (transmissions only).

    Before the first push the mean is 0 and `warmed_up` is False; until the
    window fills, the mean is over what has been pushed so far.
    """

    def __init__(self, window):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = int(window)
        self._buf = np.zeros(self.window)
        self._count = 0
        self._sum = 0.0

    @property
    def warmed_up(self):
        return self._count > 0

    def push(self, power):
        slot = self._count % self.window
        if self._count >= self.window:
            self._sum -= self._buf[slot]
        self._buf[slot] = power
        self._sum += power
        self._count += 1
        return self.mean()

    def mean(self):
        n = min(self._count, self.window)
        return self._sum / n if n else 0.0


def window_power(history, window):
    """Windowed power average over a full history list (reference form)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(history) == 0:
        return 0.0
    tail = history[-window:]
    return float(np.mean(tail))
