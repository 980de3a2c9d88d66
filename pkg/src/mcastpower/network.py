"""Feed-forward Q-network (numpy): ReLU hidden layers, linear head, plain SGD.

Loss is mean squared error on the taken action's output only; all other
outputs receive zero gradient.
"""

import json

import numpy as np


def lr_schedule(t, eta0, decay, mode="decaying"):
    """Step size at iteration t: eta0 / (1 + decay * t), or constant eta0."""
    if eta0 <= 0:
        raise ValueError("eta0 must be > 0")
    if mode == "constant":
        return eta0
    if mode == "decaying":
        if decay < 0:
            raise ValueError("decay must be >= 0")
        return eta0 / (1.0 + decay * t)
    raise ValueError(f"unknown mode {mode!r}")


class QNetwork:
    """MLP mapping a state vector to one Q-value per action."""

    def __init__(self, layer_sizes, rng=None, _empty=False):
        if any(s <= 0 for s in layer_sizes):
            raise ValueError("layer sizes must be positive")
        self.layer_sizes = list(layer_sizes)
        self.weights = []
        self.biases = []
        if _empty:
            return
        if rng is None:
            rng = np.random.default_rng()
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            scale = np.sqrt(2.0 / fan_in)  # He init for the ReLU layers
            self.weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    # ---- inference ----------------------------------------------------

    def forward(self, x):
        """Q-values for a single state (1-D) or a batch (2-D, row per state)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        a = x[None, :] if single else x
        if a.shape[1] != self.layer_sizes[0]:
            raise ValueError("input width does not match the network")
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            a = np.maximum(a @ W + b, 0.0)
        a = a @ self.weights[-1] + self.biases[-1]
        return a[0] if single else a

    # ---- training -----------------------------------------------------

    def train_minibatch(self, states, actions, targets, lr):
        """One SGD step on the selected-action MSE; returns the pre-update loss."""
        states = np.atleast_2d(np.asarray(states, dtype=float))
        actions = np.asarray(actions, dtype=int)
        targets = np.asarray(targets, dtype=float)
        if not np.all(np.isfinite(targets)):
            raise ValueError("non-finite training targets")
        n = states.shape[0]

        activations = [states]
        a = states
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            a = np.maximum(a @ W + b, 0.0)
            activations.append(a)
        q = a @ self.weights[-1] + self.biases[-1]

        rows = np.arange(n)
        err = q[rows, actions] - targets
        loss = float(np.mean(err * err))

        delta = np.zeros_like(q)
        delta[rows, actions] = 2.0 * err / n
        grads_w = []
        grads_b = []
        for layer in range(len(self.weights) - 1, -1, -1):
            grads_w.append(activations[layer].T @ delta)
            grads_b.append(delta.sum(axis=0))
            if layer > 0:
                delta = (delta @ self.weights[layer].T) * (activations[layer] > 0.0)
        for W, b, gw, gb in zip(self.weights, self.biases, grads_w[::-1], grads_b[::-1]):
            W -= lr * gw
            b -= lr * gb
        return loss

    # ---- parameter management -----------------------------------------

    def clone(self):
        other = QNetwork(self.layer_sizes, _empty=True)
        other.weights = [W.copy() for W in self.weights]
        other.biases = [b.copy() for b in self.biases]
        return other

    def copy_from(self, other):
        for W, b, Ws, bs in zip(self.weights, self.biases, other.weights, other.biases):
            W[...] = Ws
            b[...] = bs

    def save(self, path):
        """Flat tensor list + JSON shape manifest, in one .npz file."""
        manifest = json.dumps({"layer_sizes": self.layer_sizes})
        arrays = {"manifest": np.frombuffer(manifest.encode(), dtype=np.uint8)}
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            arrays[f"W{i}"] = W
            arrays[f"b{i}"] = b
        np.savez(path, **arrays)

    @classmethod
    def load(cls, path):
        data = np.load(path)
        manifest = json.loads(bytes(data["manifest"]).decode())
        net = cls(manifest["layer_sizes"], _empty=True)
        for i in range(len(net.layer_sizes) - 1):
            net.weights.append(data[f"W{i}"])
            net.biases.append(data[f"b{i}"])
        return net
