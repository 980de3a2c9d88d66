"""Render figure-style charts from the documented mcastpower CSV schemas.

Two input formats are understood, both plain CSV with a header row:

* per-transmission traces with the columns in ``TRACE_COLUMNS`` (one file per
  run, produced by ``mcastpower run``), and
* sweep summaries with the columns in ``SWEEP_COLUMNS`` (produced by
  ``mcastpower sweep``).

Rendering is a pure function of the inputs: a fixed figure size and dpi, no
timestamps, and legend labels derived from the file stems or the algorithm
column.
"""

import glob as globlib
import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# Documented trace schema of the mcastpower harness; kept in sync by the
# schema tests on both sides, not by an import.
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

SWEEP_COLUMNS = (
    "arrival_rate",
    "algorithm",
    "seed",
    "mean_sojourn_s",
    "achieved_avg_power_w",
)

CHART_KINDS = (
    "delay_vs_rate",
    "power_convergence",
    "beta_trace",
    "tracking_timeline",
    "comparison",
)

FIG_SIZE = (8.0, 4.5)   # inches
FIG_DPI = 120           # -> 960 x 540 px images


class SchemaError(ValueError):
    """Input CSV does not carry the expected columns."""


@dataclass
class ChartSpec:
    kind: str
    inputs: list
    output: str
    smoothing: int = 1000        # matches the harness moving-average window
    constraint: float = None     # horizontal reference line (W)
    markers: list = field(default_factory=list)  # vertical lines (s), timelines

    def __post_init__(self):
        if self.kind not in CHART_KINDS:
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("no input files given")
        if self.smoothing < 1:
            raise ValueError("smoothing window must be >= 1")


# ---------------------------------------------------------------------------
# loading


def _check_columns(names, required, path):
    missing = [c for c in required if c not in (names or ())]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")


def load_trace(path):
    """Trace CSV as a dict of float arrays; empty traces are an error."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    _check_columns(data.dtype.names, TRACE_COLUMNS, path)
    if data.size == 0:
        raise SchemaError(f"{path}: trace has no rows")
    return {c: np.atleast_1d(data[c]) for c in data.dtype.names}


def load_sweep(path):
    """Sweep CSV as a dict of arrays (algorithm stays a string column)."""
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    _check_columns(data.dtype.names, SWEEP_COLUMNS, path)
    if data.size == 0:
        raise SchemaError(f"{path}: sweep has no rows")
    data = np.atleast_1d(data)
    return {c: np.asarray(data[c]) for c in data.dtype.names}


def _smooth(x, window):
    if window <= 1 or len(x) < 2:
        return x
    window = min(window, len(x))
    kernel = np.ones(window) / window
    return np.convolve(x, kernel, mode="valid")


def _label(path):
    return Path(path).stem


# ---------------------------------------------------------------------------
# chart kinds


def _chart_delay_vs_rate(ax, spec):
    """Mean sojourn vs arrival rate, one line per algorithm (sweep CSVs)."""
    for path in spec.inputs:
        sweep = load_sweep(path)
        for algorithm in sorted(set(sweep["algorithm"].tolist())):
            mask = sweep["algorithm"] == algorithm
            rates = sweep["arrival_rate"][mask].astype(float)
            soj = sweep["mean_sojourn_s"][mask].astype(float)
            # average over seeds at equal rates
            xs = np.unique(rates)
            ys = [soj[rates == r].mean() for r in xs]
            ax.plot(xs, ys, marker="o", label=str(algorithm))
    ax.set_xlabel("arrival rate (requests/s)")
    ax.set_ylabel("mean sojourn (s)")
    ax.set_title("Mean sojourn time vs arrival rate")


def _chart_power_convergence(ax, spec):
    """Windowed average power vs transmission index, one line per trace."""
    for path in spec.inputs:
        tr = load_trace(path)
        ax.plot(tr["transmission_index"], tr["avg_power_window"], label=_label(path))
    if spec.constraint is not None:
        ax.axhline(spec.constraint, linestyle="--", color="k", label="constraint")
    ax.set_xlabel("transmission")
    ax.set_ylabel("windowed average power (W)")
    ax.set_title("Average transmit power convergence")


def _chart_beta_trace(ax, spec):
    """Lagrange multiplier vs transmission index."""
    for path in spec.inputs:
        tr = load_trace(path)
        ax.plot(tr["transmission_index"], tr["beta"], label=_label(path))
    ax.set_xlabel("transmission")
    ax.set_ylabel("Lagrange multiplier")
    ax.set_title("Multiplier convergence")


def _chart_tracking_timeline(ax, spec):
    """Windowed power against sim time with rate-change markers."""
    for path in spec.inputs:
        tr = load_trace(path)
        ax.plot(tr["sim_time_s"] / 3600.0, tr["avg_power_window"], label=_label(path))
    for t in spec.markers:
        ax.axvline(t / 3600.0, linestyle=":", color="gray")
    if spec.constraint is not None:
        ax.axhline(spec.constraint, linestyle="--", color="k", label="constraint")
    ax.set_xlabel("simulated time (h)")
    ax.set_ylabel("windowed average power (W)")
    ax.set_title("Power tracking under a non-stationary load")


def _chart_comparison(ax, spec):
    """Smoothed per-trace sojourn moving averages on one axis."""
    for path in spec.inputs:
        tr = load_trace(path)
        y = tr["mean_sojourn_window"]
        ok = np.isfinite(y)
        y = _smooth(y[ok], spec.smoothing)
        x = tr["transmission_index"][ok][: len(y)] if len(y) else []
        ax.plot(x, y, label=_label(path))
    ax.set_xlabel("transmission")
    ax.set_ylabel(f"mean sojourn, {spec.smoothing}-sample window (s)")
    ax.set_title("Sojourn time comparison")


_RENDERERS = {
    "delay_vs_rate": _chart_delay_vs_rate,
    "power_convergence": _chart_power_convergence,
    "beta_trace": _chart_beta_trace,
    "tracking_timeline": _chart_tracking_timeline,
    "comparison": _chart_comparison,
}


def render(spec):
    """Render the chart and write it to ``spec.output``; returns the path.

    All inputs are validated before any drawing, so a schema error never
    leaves a partial image behind.
    """
    loader = load_sweep if spec.kind == "delay_vs_rate" else load_trace
    for path in spec.inputs:
        loader(path)

    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=FIG_DPI)
    try:
        _RENDERERS[spec.kind](ax, spec)
        ax.legend(loc="best", fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.savefig(spec.output, dpi=FIG_DPI)
    finally:
        plt.close(fig)
    return spec.output


def expand_inputs(patterns):
    """Glob expansion preserving order, de-duplicated."""
    seen = []
    for pattern in patterns:
        matches = sorted(globlib.glob(pattern)) or [pattern]
        for m in matches:
            if m not in seen:
                seen.append(m)
    return seen


def sample_path(name):
    """Filesystem path of a bundled sample CSV (e.g. 'trace_constant.csv')."""
    ref = importlib.resources.files("mcastplots") / "samples" / name
    with importlib.resources.as_file(ref) as path:
        return str(path)
