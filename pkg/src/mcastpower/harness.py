"""Experiment orchestration: scenario runs, arrival-rate sweeps, trace comparison."""

import copy
import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import DQNAgent
from .baseline import TabularController, optimize_policy, policy_report
from .simulate import ConstantPowerController, run_simulation


@dataclass
class RunResult:
    scenario_name: str
    algorithm: str
    seed: int
    result: object            # SimResult
    summary: dict
    trace_path: str = None


def build_controller(scenario, algorithm, seed):
    cfg = scenario.system
    if algorithm == "constant":
        return ConstantPowerController(cfg, window=scenario.agent.power_window)
    if algorithm == "dqn":
        return DQNAgent(cfg, scenario.agent, seed=seed, constrained=False)
    if algorithm == "acdqn":
        return DQNAgent(cfg, scenario.agent, seed=seed, constrained=True)
    if algorithm == "oracle":
        result, estimate = optimize_policy(cfg, seed=seed)
        return TabularController(
            estimate.states, result.policy, window=scenario.agent.power_window
        )
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_scenario(scenario, outdir=None, algorithm=None, seeds=None, horizon=None):
    """One trace + summary per seed; deterministic given the seed."""
    algorithm = algorithm or scenario.algorithm
    seeds = seeds if seeds is not None else scenario.seeds
    horizon = horizon or scenario.horizon
    results = []
    for seed in seeds:
        controller = build_controller(scenario, algorithm, seed)
        start = time.perf_counter()
        sim = run_simulation(
            scenario.system,
            controller,
            horizon=horizon,
            seed=seed,
            schedule=scenario.arrival_schedule,
            max_time_s=scenario.max_time_s,
        )
        summary = sim.summary()
        summary["wallclock_s"] = time.perf_counter() - start
        summary["algorithm"] = algorithm
        summary["seed"] = seed
        rr = RunResult(scenario.name, algorithm, seed, sim, summary)
        if outdir is not None:
            outdir = Path(outdir)
            outdir.mkdir(parents=True, exist_ok=True)
            stem = f"{Path(scenario.name).stem}_{algorithm}_seed{seed}"
            rr.trace_path = str(outdir / f"{stem}.csv")
            sim.write_csv(rr.trace_path)
            with open(outdir / f"{stem}.summary.json", "w") as f:
                json.dump(summary, f, indent=2)
        results.append(rr)
    return results


def sweep_arrivals(scenario, rates, algorithms=("constant", "acdqn"), seeds=None, outpath=None):
    """(rate, algorithm, seed) grid; rows of mean sojourn and achieved power."""
    if len(rates) == 0:
        raise ValueError("rate list must be non-empty")
    rows = []
    for rate in rates:
        sc = copy.deepcopy(scenario)
        sc.system.arrival_rate = float(rate)
        for algorithm in algorithms:
            for rr in run_scenario(sc, algorithm=algorithm, seeds=seeds):
                rows.append(
                    {
                        "arrival_rate": float(rate),
                        "algorithm": algorithm,
                        "seed": rr.seed,
                        "mean_sojourn_s": rr.summary["mean_sojourn_s"],
                        "achieved_avg_power_w": rr.summary["achieved_avg_power_w"],
                    }
                )
    if outpath is not None:
        with open(outpath, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    return rows


class TraceData:
    """Trace CSV loaded back for comparison; sojourn stats come from the
    moving-average column since raw completions are not part of the trace."""

    def __init__(self, path):
        from .simulate import TRACE_COLUMNS

        data = np.genfromtxt(path, delimiter=",", names=True)
        missing = [c for c in TRACE_COLUMNS if c not in (data.dtype.names or ())]
        if missing:
            raise ValueError(f"{path}: missing trace columns {missing}")
        self.trace = {c: np.atleast_1d(data[c]) for c in data.dtype.names}

    def mean_sojourn(self):
        return float(np.nanmean(self.trace["mean_sojourn_window"]))


def compare_runs(result_a, result_b, window=1000):
    """Windowed deltas (B relative to A) of sojourn and power over two traces."""
    ta, tb = result_a.trace, result_b.trace
    na, nb = len(ta["sim_time_s"]), len(tb["sim_time_s"])
    if na != nb:
        raise ValueError(f"mismatched horizons: {na} vs {nb} transmissions")
    n_windows = na // window
    report = {"window": window, "windows": []}
    for w in range(n_windows):
        s = slice(w * window, (w + 1) * window)
        soj_a = float(np.nanmean(ta["mean_sojourn_window"][s]))
        soj_b = float(np.nanmean(tb["mean_sojourn_window"][s]))
        pow_a = float(np.mean(ta["action_power_w"][s]))
        pow_b = float(np.mean(tb["action_power_w"][s]))
        report["windows"].append(
            {
                "index": w,
                "sojourn_delta_s": soj_b - soj_a,
                "power_delta_w": pow_b - pow_a,
            }
        )
    mean_a = result_a.mean_sojourn()
    mean_b = result_b.mean_sojourn()
    report["mean_sojourn_a_s"] = mean_a
    report["mean_sojourn_b_s"] = mean_b
    report["sojourn_improvement_pct"] = (
        100.0 * (mean_a - mean_b) / mean_a if mean_a else float("nan")
    )
    report["avg_power_a_w"] = float(np.mean(ta["action_power_w"]))
    report["avg_power_b_w"] = float(np.mean(tb["action_power_w"]))
    return report


def oracle_report(scenario, num_samples=20_000, rounds=3, seed=0):
    result, estimate = optimize_policy(
        scenario.system, num_samples=num_samples, rounds=rounds, seed=seed
    )
    return policy_report(scenario.system, result, estimate.states), result
