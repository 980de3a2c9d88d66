"""Constrained learning on the 4-user downlink.

Runs the two-timescale agent on the bundled small scenario and shows the
windowed average transmit power settling at the 7 W constraint while the
Lagrange multiplier converges. Takes about half a minute.
"""

import numpy as np

from mcastpower import DQNAgent, bundled_scenario, run_simulation

scenario = bundled_scenario("small-4user")
config = scenario.system

agent = DQNAgent(config, scenario.agent, seed=1, constrained=True)
result = run_simulation(config, agent, horizon=50_000, seed=1)

trace = result.trace
print(f"transmissions: {result.num_transmissions}")
print(f"completed requests: {len(result.completions)}")
print(f"mean sojourn (steady state): "
      f"{result.mean_sojourn(t_from=result.final_time_s / 2):.1f} s")
print()
print("windowed average power along the run (constraint = 7 W):")
for frac in (0.05, 0.25, 0.5, 0.75, 1.0):
    i = int(frac * result.num_transmissions) - 1
    print(f"  after {trace['transmission_index'][i]:>7.0f} tx: "
          f"P_window = {trace['avg_power_window'][i]:5.2f} W, "
          f"beta = {trace['beta'][i]:.4f}, "
          f"eps = {trace['epsilon'][i]:.3f}")

final = trace["action_power_w"][-10_000:]
print()
print(f"mean power over the final 1e4 transmissions: {final.mean():.2f} W")
print(f"({100 * abs(final.mean() - 7.0) / 7.0:.1f}% from the constraint)")
