"""Per-user fading channel models and the Shannon-threshold power requirement."""

import numpy as np


class DiscreteChannel:
    """Gain drawn from a finite set with fixed probabilities."""

    kind = "discrete"

    def __init__(self, values, probs=None):
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("discrete channel needs a non-empty 1-D gain list")
        if np.any(self.values <= 0):
            raise ValueError("discrete channel gains must be > 0")
        if probs is None:
            probs = np.full(self.values.size, 1.0 / self.values.size)
        self.probs = np.asarray(probs, dtype=float)
        if self.probs.shape != self.values.shape:
            raise ValueError("probs must match gains in length")
        if np.any(self.probs < 0) or abs(self.probs.sum() - 1.0) > 1e-12:
            raise ValueError("probs must be nonnegative and sum to 1")
        self._cum = np.cumsum(self.probs)

    def sample(self, rng, size=None):
        if size is None:
            return self.values[np.searchsorted(self._cum, rng.random())]
        return self.values[np.searchsorted(self._cum, rng.random(size))]

    def mean(self):
        return float(self.values @ self.probs)


class ExponentialChannel:
    """Exponentially distributed gain; `mean` is the distribution mean."""

    kind = "exponential"

    def __init__(self, mean):
        if mean <= 0:
            raise ValueError("exponential channel mean must be > 0")
        self.mean_gain = float(mean)

    def sample(self, rng, size=None):
        # rejection of exact zeros keeps gains strictly positive
        g = rng.exponential(self.mean_gain, size=size)
        if size is None:
            while g <= 0.0:
                g = rng.exponential(self.mean_gain)
            return g
        while True:
            bad = g <= 0.0
            if not bad.any():
                return g
            g[bad] = rng.exponential(self.mean_gain, size=int(bad.sum()))

    def mean(self):
        return self.mean_gain


def p_req(h, config):
    """Minimum transmit power (W) for successful decoding at gain `h`.

    P_req = (N_g / h^2) * (2^(C/B) - 1).
    """
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise ValueError("channel gain must be > 0")
    factor = 2.0 ** config.spectral_ratio - 1.0
    out = config.noise_power / (h * h) * factor
    return float(out) if out.ndim == 0 else out


class ChannelSampler:
    """Draws the length-L gain vector, vectorizing users that share a model.

    Draw order is fixed (by first user of each model group) so runs are
    reproducible for a given RNG seed.
    """

    def __init__(self, config):
        self.num_users = config.num_users
        self._groups = []  # (indices array, model)
        seen = {}
        for j, model in enumerate(config.channels):
            seen.setdefault(id(model), ([], model))[0].append(j)
        for idx, model in seen.values():
            self._groups.append((np.asarray(idx), model))

    def sample(self, rng):
        h = np.empty(self.num_users)
        for idx, model in self._groups:
            h[idx] = model.sample(rng, size=idx.size)
        return h


def sample_channels(config, rng):
    """One independent gain per user, each from that user's channel model."""
    h = np.empty(config.num_users)
    for j, model in enumerate(config.channels):
        h[j] = model.sample(rng)
    return h
