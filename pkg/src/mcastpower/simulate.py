"""Discrete-event loop for the multicast downlink.

The server is work-conserving: whenever the queue is non-empty it samples the
channel gains, asks the controller for a transmit power, serves the head entry
for T seconds, then enqueues every arrival that landed during the service
before selecting the next head. With an empty queue it idles until the next
arrival.
"""

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelSampler
from .mdp import PowerWindow
from .mqueue import MulticastQueue, head_indicator, serve_head

TRACE_COLUMNS = (
    "transmission_index",
    "sim_time_s",
    "action_power_w",
    "reward",
    "successes",
    "avg_power_window",
    "beta",
    "epsilon",
    "mean_sojourn_window",
)

SOJOURN_MA_WINDOW = 1000


class ArrivalProcess:
    """Poisson request stream with a piecewise-constant total rate.

    Each arrival is (time, file_id, user_id): file by Zipf popularity, user
    uniform, i.e. per-pair rates lambda * zipf(i) / L. After the last schedule
    segment the final rate holds forever. A zero rate produces no arrivals.
    """

    def __init__(self, config, rng, schedule=None):
        self.config = config
        self.rng = rng
        if schedule is None:
            schedule = [(math.inf, config.arrival_rate)]
        self._bounds = []  # (segment_end_time, rate)
        t0 = 0.0
        for dur, lam in schedule:
            t0 += dur
            self._bounds.append((t0, lam))
        self._bounds[-1] = (math.inf, self._bounds[-1][1])
        self._seg = 0
        self._clock = 0.0
        self._next = self._draw()

    def rate_at(self, t):
        for end, lam in self._bounds:
            if t < end:
                return lam
        return self._bounds[-1][1]

    def _draw(self):
        t = self._clock
        seg = self._seg
        while True:
            end, lam = self._bounds[seg]
            if lam <= 0.0:
                if math.isinf(end):
                    return math.inf
                t = end
                seg += 1
                continue
            gap = self.rng.exponential(1.0 / lam)
            if t + gap <= end:
                self._seg = seg
                return t + gap
            # memorylessness: restart the draw at the segment boundary
            t = end
            seg += 1

    def peek_time(self):
        return self._next

    def pop(self):
        """Consume and return the next arrival (time, file_id, user_id)."""
        t = self._next
        if math.isinf(t):
            raise StopIteration("no further arrivals")
        file_id = self.config.sample_file(self.rng)
        user_id = int(self.rng.integers(self.config.num_users))
        self._clock = t
        self._next = self._draw()
        return t, file_id, user_id


def sample_arrival(config, rng, now):
    """Next arrival after `now` under the constant total rate lambda.

    Returns (file_id, user_id, arrival_time); raises if lambda == 0 since the
    stream then never produces an arrival.
    """
    lam = config.arrival_rate
    if lam <= 0.0:
        raise ValueError("arrival rate is zero: no arrivals")
    gap = rng.exponential(1.0 / lam)
    return config.sample_file(rng), int(rng.integers(config.num_users)), now + gap


class ConstantPowerController:
    """Always transmits at the average-power constraint (nearest level)."""

    def __init__(self, config, window=200):
        self.action = int(np.argmin(np.abs(config.power_levels - config.avg_power_constraint)))
        self.window = PowerWindow(window)

    def choose(self, gains, requests, t):
        return self.action

    def feedback(self, successes, power):
        from .agent import StepInfo

        return StepInfo(float(successes), self.window.push(power), 0.0, 0.0)


@dataclass
class SimResult:
    """Per-transmission trace arrays plus completion records and counters."""

    trace: dict                       # column name -> np.ndarray
    completions: np.ndarray           # rows (completion_time_s, user_id, sojourn_s)
    total_arrivals: int
    initial_requests: int
    pending_timestamps: int
    final_time_s: float

    @property
    def num_transmissions(self):
        return len(self.trace["sim_time_s"])

    def mean_sojourn(self, t_from=None, t_to=None):
        """Mean sojourn over completions, optionally restricted by completion time."""
        c = self.completions
        if len(c) == 0:
            return math.nan
        mask = np.ones(len(c), dtype=bool)
        if t_from is not None:
            mask &= c[:, 0] >= t_from
        if t_to is not None:
            mask &= c[:, 0] < t_to
        if not mask.any():
            return math.nan
        return float(c[mask, 2].mean())

    def summary(self):
        tr = self.trace
        return {
            "transmissions": int(self.num_transmissions),
            "sim_time_s": float(self.final_time_s),
            "mean_sojourn_s": self.mean_sojourn(),
            "achieved_avg_power_w": float(tr["action_power_w"].mean())
            if self.num_transmissions
            else math.nan,
            "final_beta": float(tr["beta"][-1]) if self.num_transmissions else 0.0,
            "completed_requests": int(len(self.completions)),
            "pending_requests": int(self.pending_timestamps),
            "total_arrivals": int(self.total_arrivals),
        }

    def write_csv(self, path):
        cols = [self.trace[c] for c in TRACE_COLUMNS]
        data = np.column_stack(cols) if self.num_transmissions else np.empty((0, len(cols)))
        header = ",".join(TRACE_COLUMNS)
        np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.10g")


@dataclass
class _Recorder:
    capacity: int
    n: int = 0
    arrays: dict = field(default_factory=dict)

    def __post_init__(self):
        for c in TRACE_COLUMNS:
            self.arrays[c] = np.empty(self.capacity)

    def record(self, **values):
        i = self.n
        for c, v in values.items():
            self.arrays[c][i] = v
        self.n += 1

    def trimmed(self):
        return {c: a[: self.n].copy() for c, a in self.arrays.items()}


def run_simulation(
    config,
    controller,
    horizon,
    seed=0,
    schedule=None,
    max_time_s=None,
    initial_queue=None,
    check_invariants=False,
):
    """Run up to `horizon` transmissions (or until max_time_s / arrivals dry up).

    Arrival and channel randomness come from independent streams spawned from
    `seed`, so a controller's own RNG usage never perturbs the environment.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    ss = np.random.SeedSequence(seed)
    rng_arrivals, rng_channels = (np.random.default_rng(s) for s in ss.spawn(2))

    queue = initial_queue if initial_queue is not None else MulticastQueue(config.catalog_size)
    initial_requests = queue.pending_timestamps()
    arrivals = ArrivalProcess(config, rng_arrivals, schedule)
    sampler = ChannelSampler(config)
    rec = _Recorder(horizon)
    soj_ma = deque(maxlen=SOJOURN_MA_WINDOW)
    soj_ma_sum = 0.0
    completions = []
    total_arrivals = 0
    now = 0.0
    t = 0
    T = config.service_time

    while t < horizon:
        if max_time_s is not None and now >= max_time_s:
            break
        if not queue:
            nxt = arrivals.peek_time()
            if math.isinf(nxt) or (max_time_s is not None and nxt >= max_time_s):
                break
            now = nxt
            while arrivals.peek_time() <= now:
                at, fid, uid = arrivals.pop()
                queue.enqueue(fid, uid, at)
                total_arrivals += 1
            continue

        gains = sampler.sample(rng_channels)
        requests = head_indicator(queue, config.num_users)
        action = controller.choose(gains, requests, t)
        power = float(config.power_levels[action])
        outcome = serve_head(queue, gains, power, config, now)
        end = now + T

        for user, sojourn in outcome.completed:
            completions.append((end, user, sojourn))
            if len(soj_ma) == soj_ma.maxlen:
                soj_ma_sum -= soj_ma[0]
            soj_ma.append(sojourn)
            soj_ma_sum += sojourn

        info = controller.feedback(outcome.reward_successes, power)

        # arrivals during the service join the queue before the next head pick
        while arrivals.peek_time() <= end:
            at, fid, uid = arrivals.pop()
            queue.enqueue(fid, uid, at)
            total_arrivals += 1

        if check_invariants:
            queue.check_invariants()
            assert len(completions) + queue.pending_timestamps() == (
                total_arrivals + initial_requests
            ), "request conservation violated"

        rec.record(
            transmission_index=t,
            sim_time_s=now,
            action_power_w=power,
            reward=info.reward,
            successes=outcome.reward_successes,
            avg_power_window=info.window_power,
            beta=info.beta,
            epsilon=info.epsilon,
            mean_sojourn_window=(soj_ma_sum / len(soj_ma)) if soj_ma else math.nan,
        )
        now = end
        t += 1

    comp = (
        np.asarray(completions, dtype=float) if completions else np.empty((0, 3))
    )
    return SimResult(
        trace=rec.trimmed(),
        completions=comp,
        total_arrivals=total_arrivals,
        initial_requests=initial_requests,
        pending_timestamps=queue.pending_timestamps(),
        final_time_s=now,
    )
