"""Chart rendering for mcastpower trace CSVs and sweep summaries."""

from .charts import (
    CHART_KINDS,
    FIG_DPI,
    FIG_SIZE,
    ChartSpec,
    SchemaError,
    load_sweep,
    load_trace,
    render,
    sample_path,
)

__all__ = [
    "CHART_KINDS",
    "FIG_DPI",
    "FIG_SIZE",
    "ChartSpec",
    "SchemaError",
    "load_sweep",
    "load_trace",
    "render",
    "sample_path",
]

__version__ = "0.1.0"
