"""Scenario and system configuration: dataclasses, validation, YAML loading."""

import importlib.resources
from dataclasses import dataclass, field

import numpy as np
import yaml

from .channels import DiscreteChannel, ExponentialChannel


class ConfigError(ValueError):
    """Validation failure; message carries the offending field path."""


@dataclass
class SystemConfig:
    """Physical and traffic description of one scenario."""

    num_users: int
    catalog_size: int
    file_size_bits: float
    tx_rate_bps: float
    power_levels: np.ndarray
    avg_power_constraint: float
    channels: list
    bandwidth_hz: float = 10e6
    spectral_ratio: float = 1.0      # exponent argument C/B, bits/s/Hz
    noise_power: float = 1.0
    arrival_rate: float = 1.0
    zipf_exponent: float = 0.0
    max_attempts: int = 1            # attempts before loop-back (N); 0 means unbounded
    gain_scale: float = 1.0

    def __post_init__(self):
        self.power_levels = np.asarray(self.power_levels, dtype=float)
        self.validate()
        w = np.arange(1, self.catalog_size + 1, dtype=float) ** (-self.zipf_exponent)
        self.zipf_probs = w / w.sum()
        self._zipf_cum = np.cumsum(self.zipf_probs)

    def validate(self):
        if self.num_users < 1:
            raise ConfigError("system.num_users: must be >= 1")
        if self.catalog_size < 1:
            raise ConfigError("system.catalog_size: must be >= 1")
        if self.file_size_bits <= 0 or self.tx_rate_bps <= 0:
            raise ConfigError("system.file_size_bits/tx_rate_bps: must be > 0")
        if self.noise_power <= 0:
            raise ConfigError("system.noise_power: must be > 0")
        if self.arrival_rate < 0:
            raise ConfigError("system.arrival_rate: must be >= 0")
        if self.zipf_exponent < 0:
            raise ConfigError("system.zipf_exponent: must be >= 0")
        if self.max_attempts < 0:
            raise ConfigError("system.max_attempts: must be >= 1 (0 = unbounded)")
        p = np.asarray(self.power_levels, dtype=float)
        if p.ndim != 1 or p.size == 0 or np.any(p < 0) or np.any(np.diff(p) <= 0):
            raise ConfigError("system.power_levels: must be strictly increasing, >= 0")
        if not (p[0] <= self.avg_power_constraint <= p[-1]):
            raise ConfigError(
                "system.avg_power_constraint: must lie within [min, max] power level"
            )
        if len(self.channels) != self.num_users:
            raise ConfigError("system.channels: need exactly one model per user")
        if self.gain_scale <= 0:
            raise ConfigError("system.gain_scale: must be > 0")

    @property
    def service_time(self):
        """Transmission duration T = F/R in seconds."""
        return self.file_size_bits / self.tx_rate_bps

    @property
    def num_actions(self):
        return int(self.power_levels.size)

    def sample_file(self, rng):
        """File index in [0, M) with Zipf(zipf_exponent) popularity."""
        return int(np.searchsorted(self._zipf_cum, rng.random()))

    def all_channels_discrete(self):
        return all(ch.kind == "discrete" for ch in self.channels)


@dataclass
class AgentHyperparams:
    gamma: float = 0.9
    eps0: float = 1.0
    eps_decay: float = 0.98
    eps_floor: float = 0.01
    eps_tracking: float = 0.05
    eta1: float = 0.001
    eta1_decay: float = 1e-5
    eta2: float = 1e-4
    eta2_decay: float = 1e-4
    beta0: float = 0.0
    replay_capacity: int = 30000
    minibatch: int = 64
    target_period: int = 100
    power_window: int = 200
    mode: str = "stationary"  # or "tracking"

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ConfigError("agent.gamma: must be in [0, 1)")
        if not (0.0 < self.eps_decay <= 1.0):
            raise ConfigError("agent.eps_decay: must be in (0, 1]")
        if self.eta1 <= 0 or self.eta2 < 0:
            raise ConfigError("agent.eta1/eta2: must be positive")
        if self.beta0 < 0:
            raise ConfigError("agent.beta0: must be >= 0")
        if self.minibatch < 1 or self.replay_capacity < self.minibatch:
            raise ConfigError("agent.replay_capacity: must hold at least one minibatch")
        if self.target_period < 1 or self.power_window < 1:
            raise ConfigError("agent.target_period/power_window: must be >= 1")
        if self.mode not in ("stationary", "tracking"):
            raise ConfigError("agent.mode: must be 'stationary' or 'tracking'")
        if self.mode == "stationary":
            if self.eta1_decay <= 0 or self.eta2_decay <= 0:
                raise ConfigError("agent: stationary mode needs decaying step sizes")
        else:
            if self.eta2 > 0.1 * self.eta1:
                raise ConfigError("agent: tracking mode needs eta2 <= 0.1 * eta1")


ALGORITHMS = ("constant", "dqn", "acdqn", "oracle")


@dataclass
class Scenario:
    name: str
    system: SystemConfig
    agent: AgentHyperparams
    algorithm: str = "acdqn"
    horizon: int = 100_000
    max_time_s: float = None
    # piecewise-constant arrival rate: list of (duration_s, lambda)
    arrival_schedule: list = None
    seeds: list = field(default_factory=lambda: [1])
    output_dir: str = "runs"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm: must be one of {ALGORITHMS}")
        if self.horizon < 1:
            raise ConfigError("horizon: must be >= 1")
        if self.arrival_schedule is not None:
            for i, (dur, lam) in enumerate(self.arrival_schedule):
                if dur <= 0:
                    raise ConfigError(f"schedule[{i}]: duration must be > 0")
                if lam < 0:
                    raise ConfigError(f"schedule[{i}]: rate must be >= 0")
        if not self.seeds:
            raise ConfigError("seeds: need at least one seed")


def _parse_channels(raw, num_users):
    models = [None] * num_users
    for i, group in enumerate(raw):
        try:
            users = group["users"]
            kind = group["kind"]
            if kind == "discrete":
                model = DiscreteChannel(group["values"], group.get("probs"))
            elif kind == "exponential":
                model = ExponentialChannel(group["mean"])
            else:
                raise ConfigError(f"system.channels[{i}].kind: unknown kind {kind!r}")
        except KeyError as exc:
            raise ConfigError(f"system.channels[{i}]: missing field {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"system.channels[{i}]: {exc}") from None
        for u in users:
            if not (0 <= u < num_users):
                raise ConfigError(f"system.channels[{i}].users: user {u} out of range")
            if models[u] is not None:
                raise ConfigError(f"system.channels[{i}].users: user {u} listed twice")
            models[u] = model
    missing = [u for u, m in enumerate(models) if m is None]
    if missing:
        raise ConfigError(f"system.channels: no model for users {missing}")
    return models


def _parse_power_levels(raw):
    if isinstance(raw, dict):
        return np.linspace(raw["min"], raw["max"], int(raw["count"]))
    return np.asarray(raw, dtype=float)


def scenario_from_dict(doc, name="scenario"):
    try:
        sys_raw = dict(doc["system"])
    except KeyError:
        raise ConfigError("system: section is required") from None
    num_users = int(sys_raw.get("num_users", 0))
    sys_raw["channels"] = _parse_channels(sys_raw.get("channels", []), num_users)
    sys_raw["power_levels"] = _parse_power_levels(sys_raw.get("power_levels", []))
    try:
        system = SystemConfig(**sys_raw)
    except TypeError as exc:
        raise ConfigError(f"system: {exc}") from None
    try:
        agent = AgentHyperparams(**doc.get("agent", {}))
    except TypeError as exc:
        raise ConfigError(f"agent: {exc}") from None
    schedule = doc.get("schedule")
    if schedule is not None:
        schedule = [(float(d), float(l)) for d, l in schedule]
    return Scenario(
        name=doc.get("name", name),
        system=system,
        agent=agent,
        algorithm=doc.get("algorithm", "acdqn"),
        horizon=int(doc.get("horizon", 100_000)),
        max_time_s=doc.get("max_time_s"),
        arrival_schedule=schedule,
        seeds=list(doc.get("seeds", [1])),
        output_dir=doc.get("output_dir", "runs"),
    )


def load_scenario(path):
    with open(path) as f:
        doc = yaml.safe_load(f)
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return scenario_from_dict(doc, name=str(path))


def bundled_scenario(name):
    """Load one of the scenarios shipped with the package (e.g. 'small-4user')."""
    ref = importlib.resources.files("mcastpower") / "scenarios" / f"{name}.yaml"
    with importlib.resources.as_file(ref) as path:
        return load_scenario(path)
