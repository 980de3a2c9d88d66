"""Fading multicast downlink simulator with learned power control.

Main entry points:
  - config.load_scenario / config.bundled_scenario
  - simulate.run_simulation with a controller (constant, tabular, DQNAgent)
  - baseline.optimize_policy for the exact stationary reference policy
  - harness.run_scenario / sweep_arrivals / compare_runs
"""

from .agent import DQNAgent, GreedyPolicyController, ReplayMemory
from .channels import DiscreteChannel, ExponentialChannel, p_req, sample_channels
from .config import (
    AgentHyperparams,
    ConfigError,
    Scenario,
    SystemConfig,
    bundled_scenario,
    load_scenario,
)
from .mdp import PowerWindow, encode_state, lagrangian_reward, window_power
from .mqueue import MulticastQueue, QueueEntry, ServiceOutcome, serve_head
from .network import QNetwork, lr_schedule
from .simulate import ArrivalProcess, ConstantPowerController, run_simulation

__all__ = [
    "AgentHyperparams",
    "ArrivalProcess",
    "ConfigError",
    "ConstantPowerController",
    "DQNAgent",
    "DiscreteChannel",
    "ExponentialChannel",
    "GreedyPolicyController",
    "MulticastQueue",
    "PowerWindow",
    "QNetwork",
    "QueueEntry",
    "ReplayMemory",
    "Scenario",
    "ServiceOutcome",
    "SystemConfig",
    "bundled_scenario",
    "encode_state",
    "lagrangian_reward",
    "load_scenario",
    "lr_schedule",
    "p_req",
    "run_simulation",
    "sample_channels",
    "serve_head",
    "window_power",
]

__version__ = "0.1.0"
