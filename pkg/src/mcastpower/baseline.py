"""Reference policies for the stationary problem.

For discrete channels the stationary control problem
    max sum_k q_k R_k(P_k)   s.t.  sum_k q_k P_k <= Pbar
decomposes per state once the constraint is priced: for a multiplier mu each
state independently picks argmax_a [R_k(a) - mu * P(a)]. Achieved power is
nonincreasing in mu, so bisection finds the best deterministic policy; a
brute-force enumerator verifies it on tiny instances.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channels import p_req
from .mdp import PowerWindow
from .simulate import run_simulation


class BaselineUnsupported(ValueError):
    """Raised when the tabular baseline cannot handle the scenario."""


class Infeasible(ValueError):
    """Even the minimum-power policy violates the average-power constraint."""


# ---------------------------------------------------------------------------
# state enumeration and the analytic reward table


@dataclass
class StateSpace:
    """All (H, V) pairs for discrete channels: gain rows and request rows."""

    gains: np.ndarray     # (K, L)
    requests: np.ndarray  # (K, L) binary, never all-zero
    index: dict           # (gain tuple, request tuple) -> k

    def __len__(self):
        return len(self.gains)

    def key(self, gains, requests):
        return (tuple(np.asarray(gains, dtype=float)), tuple(int(v) for v in requests))

    def lookup(self, gains, requests):
        return self.index[self.key(gains, requests)]


def enumerate_states(config):
    """Every channel-gain combination crossed with every non-empty request set."""
    if not config.all_channels_discrete():
        raise BaselineUnsupported("state enumeration needs discrete channel models")
    supports = [ch.values for ch in config.channels]
    gain_rows = []
    req_rows = []
    index = {}
    vs = [v for v in itertools.product((0, 1), repeat=config.num_users) if any(v)]
    for h in itertools.product(*supports):
        for v in vs:
            index[(tuple(float(x) for x in h), v)] = len(gain_rows)
            gain_rows.append(h)
            req_rows.append(v)
    return StateSpace(
        gains=np.asarray(gain_rows, dtype=float),
        requests=np.asarray(req_rows, dtype=float),
        index=index,
    )


def reward_table(states, config):
    """R[k, a]: successful deliveries in state k at power level a (deterministic)."""
    need = p_req(states.gains, config)                  # (K, L)
    powers = config.power_levels                        # (A,)
    ok = powers[None, None, :] > need[:, :, None]       # (K, L, A), strict
    return (states.requests[:, :, None] * ok).sum(axis=1)


# ---------------------------------------------------------------------------
# stationary distribution under a policy


@dataclass
class StationaryEstimate:
    states: StateSpace
    q: np.ndarray

    def __post_init__(self):
        if np.any(self.q < 0) or abs(self.q.sum() - 1.0) > 1e-9:
            raise ValueError("q must be a probability vector")


class TabularController:
    """Plays a fixed state -> power-level policy; used to simulate baselines."""

    def __init__(self, states, policy, window=200):
        self.states = states
        self.policy = np.asarray(policy, dtype=int)
        self.window = PowerWindow(window)

    def choose(self, gains, requests, t):
        return int(self.policy[self.states.lookup(gains, requests)])

    def feedback(self, successes, power):
        from .agent import StepInfo

        return StepInfo(float(successes), self.window.push(power), 0.0, 0.0)


class _CountingController:
    """Wraps a controller and tallies visited (H, V) states at service starts."""

    def __init__(self, states, inner):
        self.states = states
        self.inner = inner
        self.counts = np.zeros(len(states))

    def choose(self, gains, requests, t):
        self.counts[self.states.lookup(gains, requests)] += 1
        return self.inner.choose(gains, requests, t)

    def feedback(self, successes, power):
        return self.inner.feedback(successes, power)


def estimate_stationary(config, controller, num_samples, seed=0, states=None):
    """Empirical state frequencies at service starts under `controller`."""
    if states is None:
        states = enumerate_states(config)
    counter = _CountingController(states, controller)
    run_simulation(config, counter, horizon=num_samples, seed=seed)
    total = counter.counts.sum()
    if total == 0:
        raise ValueError("no transmissions occurred; cannot estimate q")
    return StationaryEstimate(states=states, q=counter.counts / total)


# ---------------------------------------------------------------------------
# policies and solvers


def constant_policy(config, states=None):
    """Power level nearest the constraint, in every state."""
    if states is None:
        states = enumerate_states(config)
    a = int(np.argmin(np.abs(config.power_levels - config.avg_power_constraint)))
    return np.full(len(states), a, dtype=int)


@dataclass
class SweepResult:
    policy: np.ndarray
    value: float
    power: float
    mu: float
    dual_bound: float  # upper bound on any feasible policy's value


def _priced_policy(rewards, powers, mu):
    # first max index = lowest power on ties
    return np.argmax(rewards - mu * powers[None, :], axis=1)


def _evaluate(q, rewards, powers, policy):
    rows = np.arange(len(policy))
    return float(q @ rewards[rows, policy]), float(q @ powers[policy])


def lagrangian_sweep(estimate, rewards, powers, power_constraint, tol=1e-9, iters=200):
    """Best deterministic policy found by pricing the power constraint.

    Bisection on mu >= 0: achieved power is nonincreasing in mu, so the search
    brackets the smallest mu whose priced policy is feasible. Returns that
    policy together with the Lagrangian dual bound on the optimum.
    """
    q = estimate.q
    powers = np.asarray(powers, dtype=float)
    policy0 = _priced_policy(rewards, powers, 0.0)
    value0, power0 = _evaluate(q, rewards, powers, policy0)
    if power0 <= power_constraint + tol:
        return SweepResult(policy0, value0, power0, 0.0, value0)

    lo, hi = 0.0, 1.0
    for _ in range(100):
        pol = _priced_policy(rewards, powers, hi)
        _, pw = _evaluate(q, rewards, powers, pol)
        if pw <= power_constraint + tol:
            break
        hi *= 2.0
    else:
        raise Infeasible("no multiplier makes the priced policy feasible")
    pol_hi = pol
    val_hi, pow_hi = _evaluate(q, rewards, powers, pol_hi)
    if pow_hi > power_constraint + tol:
        raise Infeasible("minimum-power policy exceeds the power constraint")

    best_pol, best_val, best_pow, best_mu = pol_hi, val_hi, pow_hi, hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pol = _priced_policy(rewards, powers, mid)
        val, pw = _evaluate(q, rewards, powers, pol)
        if pw <= power_constraint + tol:
            hi = mid
            if val > best_val:
                best_pol, best_val, best_pow, best_mu = pol, val, pw, mid
        else:
            lo = mid
    # dual value at the final bracketing mu bounds every feasible policy
    mu = hi
    dual = float(
        estimate.q @ np.max(rewards - mu * powers[None, :], axis=1)
        + mu * power_constraint
    )
    return SweepResult(best_pol, best_val, best_pow, best_mu, dual)


def brute_force(estimate, rewards, powers, power_constraint, max_states=12):
    """Exact optimum by enumerating all |A|^K deterministic policies."""
    q = estimate.q
    powers = np.asarray(powers, dtype=float)
    num_states = len(q)
    num_actions = len(powers)
    if num_states > max_states or num_actions**num_states > 2_000_000:
        raise ValueError("instance too large for brute force")
    best = None
    for assignment in itertools.product(range(num_actions), repeat=num_states):
        policy = np.asarray(assignment, dtype=int)
        val, pw = _evaluate(q, rewards, powers, policy)
        if pw <= power_constraint + 1e-9 and (best is None or val > best[1]):
            best = (policy, val, pw)
    if best is None:
        raise Infeasible("no deterministic policy satisfies the power constraint")
    return SweepResult(best[0], best[1], best[2], math.nan, best[1])


def optimize_policy(config, num_samples=20_000, rounds=3, seed=0):
    """Fixed-point driver: estimate q under the incumbent policy, re-solve, repeat.

    Starts from the constant-power policy (round 1 estimates q under it).
    Returns (SweepResult, StationaryEstimate) of the final round.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    states = enumerate_states(config)
    rewards = reward_table(states, config)
    controller = TabularController(states, constant_policy(config, states))
    result = None
    estimate = None
    for r in range(rounds):
        estimate = estimate_stationary(
            config, controller, num_samples, seed=seed + r, states=states
        )
        result = lagrangian_sweep(
            estimate, rewards, config.power_levels, config.avg_power_constraint
        )
        controller = TabularController(states, result.policy)
    return result, estimate


def policy_report(config, result, states):
    """Structured text report of a tabular policy (consumed by the CLI)."""
    lines = [
        "oracle-policy-report",
        "feasible: true",
        f"mu: {result.mu:.6g}",
        f"value: {result.value:.6g}",
        f"power: {result.power:.6g}",
        f"dual_bound: {result.dual_bound:.6g}",
        f"power_constraint: {config.avg_power_constraint:.6g}",
        f"states: {len(states)}",
    ]
    for k in range(len(states)):
        h = " ".join(f"{x:g}" for x in states.gains[k])
        v = "".join(str(int(x)) for x in states.requests[k])
        p = config.power_levels[result.policy[k]]
        lines.append(f"state {k}: H=[{h}] V={v} -> P={p:g}")
    return "\n".join(lines) + "\n"
