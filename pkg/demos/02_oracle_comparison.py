"""Learned policy vs the exact stationary oracle vs constant power.

For the discrete-fading 4-user system the constrained stationary problem can
be solved exactly: price the power constraint with a multiplier, let every
state pick its best action, and bisect the multiplier until the average-power
constraint is tight. This script compares that oracle policy, the naive
constant-power baseline, and the learned agent at one arrival rate.

Sojourn times are measured in steady state (completions in the second half of
the run) so the agent's warm-up phase does not pollute the comparison.
Takes a couple of minutes.
"""

from mcastpower import ConstantPowerController, DQNAgent, bundled_scenario, run_simulation
from mcastpower.baseline import TabularController, optimize_policy

scenario = bundled_scenario("small-4user")
config = scenario.system
horizon = 100_000
seed = 1

print(f"arrival rate {config.arrival_rate}/s, constraint "
      f"{config.avg_power_constraint} W, {horizon} transmissions\n")

sweep, estimate = optimize_policy(config, num_samples=20_000, rounds=3, seed=0)
print(f"oracle: multiplier mu = {sweep.mu:.4f}, "
      f"stationary power {sweep.power:.2f} W, "
      f"value {sweep.value:.3f} deliveries/tx "
      f"(dual bound {sweep.dual_bound:.3f})\n")

controllers = {
    "constant": ConstantPowerController(config),
    "oracle": TabularController(estimate.states, sweep.policy),
}

rows = []
for name, controller in controllers.items():
    result = run_simulation(config, controller, horizon=horizon, seed=seed)
    rows.append(
        (
            name,
            result.mean_sojourn(t_from=result.final_time_s / 2),
            result.trace["action_power_w"].mean(),
        )
    )

# the agent trains with exploration, then is evaluated greedily on a fresh
# run while the multiplier re-settles the power budget
agent = DQNAgent(config, scenario.agent, seed=seed, constrained=True)
run_simulation(config, agent, horizon=scenario.horizon, seed=seed)
agent.exploit()
result = run_simulation(config, agent, horizon=horizon, seed=seed + 100)
rows.append(
    (
        "ac-dqn",
        result.mean_sojourn(t_from=result.final_time_s / 2),
        result.trace["action_power_w"].mean(),
    )
)

print(f"{'policy':>10} {'sojourn (s)':>12} {'avg power (W)':>14}")
for name, sojourn, power in rows:
    print(f"{name:>10} {sojourn:>12.1f} {power:>14.2f}")
