"""Tracking an abruptly changing load with constant step sizes.

The arrival rate jumps every few thousand seconds. In tracking mode the agent
keeps constant learning rates and a fixed exploration rate, so the Lagrange
multiplier keeps adapting and the windowed average power returns to the
constraint after each change. A decaying-step agent would stop adapting once
its step sizes have shrunk.

This is a scaled-down version of the bundled tracking-24h scenario so it
finishes in about a minute.
"""

import numpy as np

from mcastpower import DQNAgent, bundled_scenario, run_simulation

scenario = bundled_scenario("tracking-24h")
config = scenario.system
schedule = [(5_000.0, 0.4), (5_000.0, 0.8), (5_000.0, 0.2), (5_000.0, 1.0)]

agent = DQNAgent(config, scenario.agent, seed=1, constrained=True)
result = run_simulation(
    config, agent, horizon=200_000, seed=1, schedule=schedule, max_time_s=20_000.0
)

t = result.trace["sim_time_s"]
power = result.trace["action_power_w"]
beta = result.trace["beta"]

print(f"{'segment':>8} {'rate':>6} {'tx':>7} {'mean power (W)':>15} {'median beta':>12}")
t0 = 0.0
for k, (duration, rate) in enumerate(schedule):
    mask = (t >= t0) & (t < t0 + duration)
    print(f"{k:>8} {rate:>6.1f} {mask.sum():>7} {power[mask].mean():>15.2f} "
          f"{np.median(beta[mask]):>12.4f}")
    t0 += duration

print(f"\nconstraint: {config.avg_power_constraint} W "
      f"(tracking mode: eta1={scenario.agent.eta1}, eta2={scenario.agent.eta2}, "
      f"eps={scenario.agent.eps_tracking})")
