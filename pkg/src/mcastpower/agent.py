"""DQN and its constrained two-timescale variant driving the power choice.

The unconstrained learner follows the classic loop: epsilon-greedy action,
replay memory, minibatch SGD toward a frozen target network, periodic target
sync. The constrained variant additionally runs a slower stochastic ascent on
the Lagrange multiplier so the windowed average power settles at the
constraint.
"""

from dataclasses import dataclass, replace

import numpy as np

from .mdp import PowerWindow, encode_state, lagrangian_reward
from .network import QNetwork, lr_schedule


class ReplayMemory:
    """Bounded FIFO transition store with uniform with-replacement sampling."""

    def __init__(self, capacity, state_dim):
        self.capacity = int(capacity)
        self.states = np.empty((capacity, state_dim))
        self.actions = np.empty(capacity, dtype=np.int64)
        self.rewards = np.empty(capacity)
        self.window_powers = np.empty(capacity)
        self.next_states = np.empty((capacity, state_dim))
        self._next = 0
        self.size = 0

    def __len__(self):
        return self.size

    def push(self, state, action, reward, window_power, next_state):
        i = self._next
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = reward
        self.window_powers[i] = window_power
        self.next_states[i] = next_state
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, n, rng):
        if self.size == 0:
            raise ValueError("cannot sample from an empty memory")
        idx = rng.integers(0, self.size, size=n)
        return (
            self.states[idx],
            self.actions[idx],
            self.rewards[idx],
            self.window_powers[idx],
            self.next_states[idx],
        )


def epsilon_schedule(t, eps0, decay, floor):
    """Exploration rate max(floor, eps0 * decay**t)."""
    if not (0.0 < decay <= 1.0):
        raise ValueError("decay must be in (0, 1]")
    return max(floor, eps0 * decay**t)


def act(net, state, eps, rng, num_actions=None):
    """Epsilon-greedy action; greedy ties break toward the lowest power index."""
    if not (0.0 <= eps <= 1.0):
        raise ValueError("eps must be in [0, 1]")
    if num_actions is None:
        num_actions = net.layer_sizes[-1]
    if eps > 0.0 and rng.random() < eps:
        return int(rng.integers(num_actions))
    return int(np.argmax(net.forward(state)))


def compute_targets(target_net, rewards, next_states, gamma):
    """Bellman targets Y_i = r_i + gamma * max_a Q_target(s'_i, a)."""
    q_next = target_net.forward(np.atleast_2d(next_states))
    return np.asarray(rewards, dtype=float) + gamma * q_next.max(axis=1)


def lagrange_step(beta, window_power, power_constraint, eta2):
    """Multiplier ascent, projected to stay nonnegative."""
    return max(0.0, beta + eta2 * (window_power - power_constraint))


@dataclass
class StepInfo:
    reward: float
    window_power: float
    beta: float
    epsilon: float


class GreedyPolicyController:
    """Frozen greedy play of a trained Q-network: no exploration, no learning.

    Used to evaluate a learned policy on a fresh simulation, separating the
    policy's steady-state behaviour from the transients (exploration actions,
    warm-up backlog) of the training run.
    """

    def __init__(self, net, config, window=200):
        self.net = net
        self.config = config
        self.window = PowerWindow(window)

    def choose(self, gains, requests, t):
        state = encode_state(gains, requests, self.config)
        return int(np.argmax(self.net.forward(state)))

    def feedback(self, successes, power):
        return StepInfo(float(successes), self.window.push(power), 0.0, 0.0)


class DQNAgent:
    """Power controller learning Q online; set constrained=True for AC-DQN.

    Implements the simulator's controller protocol: `choose(gains, requests, t)`
    at each service start, then `feedback(successes, power)` once the outcome
    of that transmission is known.
    """

    def __init__(self, config, hyper, seed=0, constrained=True):
        self.config = config
        self.hyper = hyper
        self.constrained = constrained
        ss = np.random.SeedSequence(seed)
        self._rng_explore, self._rng_replay, init_rng = (
            np.random.default_rng(s) for s in ss.spawn(3)
        )
        sizes = [2 * config.num_users, 128, 64, config.num_actions]
        self.net = QNetwork(sizes, init_rng)
        self.target_net = self.net.clone()
        self.memory = ReplayMemory(hyper.replay_capacity, sizes[0])
        self.window = PowerWindow(hyper.power_window)
        self.beta = hyper.beta0 if constrained else 0.0
        self.t = 0
        self._pending = None  # (state, action, reward, window_power)
        self._last = None     # (state, action) awaiting feedback

    # ---- schedules ------------------------------------------------------

    def epsilon(self, t):
        h = self.hyper
        if h.mode == "tracking":
            return h.eps_tracking
        return epsilon_schedule(t, h.eps0, h.eps_decay, h.eps_floor)

    def eta1(self, t):
        h = self.hyper
        mode = "constant" if h.mode == "tracking" else "decaying"
        return lr_schedule(t, h.eta1, h.eta1_decay, mode)

    def eta2(self, t):
        h = self.hyper
        mode = "constant" if h.mode == "tracking" else "decaying"
        return lr_schedule(t, h.eta2, h.eta2_decay, mode)

    # ---- controller protocol ---------------------------------------------

    def choose(self, gains, requests, t):
        state = encode_state(gains, requests, self.config)
        if self._pending is not None:
            s0, a0, r0, cp0 = self._pending
            self.memory.push(s0, a0, r0, cp0, state)
            self._pending = None
        self._learn()
        self.t = t
        self._eps = self.epsilon(t)
        action = act(self.net, state, self._eps, self._rng_explore)
        self._last = (state, action)
        return action

    def feedback(self, successes, power):
        state, action = self._last
        cp = self.window.push(power)
        reward = lagrangian_reward(successes, power, self.beta)
        self._pending = (state, action, reward, cp)
        if self.constrained:
            self.beta = lagrange_step(
                self.beta, cp, self.config.avg_power_constraint, self.eta2(self.t)
            )
        return StepInfo(reward, cp, self.beta, self._eps)

    # ---- learning --------------------------------------------------------

    def _learn(self):
        h = self.hyper
        if len(self.memory) >= h.minibatch:
            states, actions, rewards, _, next_states = self.memory.sample(
                h.minibatch, self._rng_replay
            )
            targets = compute_targets(self.target_net, rewards, next_states, h.gamma)
            self.net.train_minibatch(states, actions, targets, self.eta1(self.t))
        self._steps_since_sync = getattr(self, "_steps_since_sync", 0) + 1
        if self._steps_since_sync >= h.target_period:
            self.target_net.copy_from(self.net)
            self._steps_since_sync = 0

    def exploit(self):
        """Switch off exploration for steady-state evaluation.

        Learning and the multiplier update stay on, so the average power
        re-settles at the constraint under the greedy policy instead of the
        epsilon-mixed one it was calibrated against during training.
        """
        self.hyper = replace(
            self.hyper, eps0=0.0, eps_floor=0.0, eps_tracking=0.0
        )

    # ---- persistence -------------------------------------------------------

    def checkpoint(self, path_prefix):
        """Snapshot (theta, theta*, beta, t, eps) to path_prefix.{online,target,meta}."""
        import json

        self.net.save(f"{path_prefix}.online.npz")
        self.target_net.save(f"{path_prefix}.target.npz")
        meta = {"beta": self.beta, "t": self.t, "epsilon": self.epsilon(self.t)}
        with open(f"{path_prefix}.meta.json", "w") as f:
            json.dump(meta, f)
