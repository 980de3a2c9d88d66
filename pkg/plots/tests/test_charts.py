import numpy as np
import pytest
from PIL import Image

from mcastplots import (
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
from mcastplots.cli import main

EXPECT_PX = (int(FIG_SIZE[0] * FIG_DPI), int(FIG_SIZE[1] * FIG_DPI))


def _spec_for(kind, tmp_path, **kwargs):
    if kind == "delay_vs_rate":
        inputs = [sample_path("sample_sweep.csv")]
    elif kind == "tracking_timeline":
        inputs = [sample_path("sample_tracking.csv")]
        kwargs.setdefault("markers", [1000.0, 2000.0])
        kwargs.setdefault("constraint", 7.0)
    else:
        inputs = [
            sample_path("sample_constant_seed1.csv"),
            sample_path("sample_acdqn_seed1.csv"),
        ]
    return ChartSpec(kind=kind, inputs=inputs, output=str(tmp_path / f"{kind}.png"), **kwargs)


class TestLoaders:
    def test_load_trace_columns(self):
        tr = load_trace(sample_path("sample_acdqn_seed1.csv"))
        assert "avg_power_window" in tr
        assert len(tr["sim_time_s"]) > 100

    def test_load_sweep_columns(self):
        sw = load_sweep(sample_path("sample_sweep.csv"))
        assert set(sw["algorithm"].tolist()) == {"constant", "acdqn"}

    def test_missing_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("sim_time_s,beta\n0.0,0.0\n")
        with pytest.raises(SchemaError, match="missing columns"):
            load_trace(bad)

    def test_empty_trace(self, tmp_path):
        empty = tmp_path / "empty.csv"
        header = ("transmission_index,sim_time_s,action_power_w,reward,successes,"
                  "avg_power_window,beta,epsilon,mean_sojourn_window")
        empty.write_text(header + "\n")
        with pytest.raises(SchemaError, match="no rows"):
            load_trace(empty)


class TestRender:
    @pytest.mark.parametrize("kind", CHART_KINDS)
    def test_all_kinds_render_at_declared_size(self, kind, tmp_path):
        spec = _spec_for(kind, tmp_path)
        out = render(spec)
        with Image.open(out) as im:
            assert im.size == EXPECT_PX

    def test_rerender_identical_dimensions(self, tmp_path):
        spec = _spec_for("power_convergence", tmp_path, constraint=7.0)
        render(spec)
        with Image.open(spec.output) as im:
            first = im.size
        render(spec)
        with Image.open(spec.output) as im:
            assert im.size == first

    def test_schema_error_writes_no_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        spec = ChartSpec(
            kind="beta_trace", inputs=[str(bad)], output=str(tmp_path / "out.png")
        )
        with pytest.raises(SchemaError):
            render(spec)
        assert not (tmp_path / "out.png").exists()

    def test_invalid_kind(self, tmp_path):
        with pytest.raises(ValueError):
            ChartSpec(kind="scatter", inputs=["x.csv"], output="o.png")

    def test_no_inputs(self):
        with pytest.raises(ValueError):
            ChartSpec(kind="beta_trace", inputs=[], output="o.png")


class TestCli:
    def test_render_via_cli(self, tmp_path, capsys):
        out = tmp_path / "chart.png"
        rc = main([
            "power_convergence",
            "--in", sample_path("sample_acdqn_seed1.csv"),
            "--out", str(out),
            "--constraint", "7",
        ])
        assert rc == 0
        assert str(out) in capsys.readouterr().out
        with Image.open(out) as im:
            assert im.size == EXPECT_PX

    def test_glob_input(self, tmp_path):
        import shutil

        for name in ("sample_constant_seed1.csv", "sample_acdqn_seed1.csv"):
            shutil.copy(sample_path(name), tmp_path / name)
        out = tmp_path / "cmp.png"
        rc = main([
            "comparison", "--in", str(tmp_path / "sample_*_seed1.csv"),
            "--out", str(out), "--smooth", "200",
        ])
        assert rc == 0
        assert out.exists()

    def test_bad_input_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        rc = main(["beta_trace", "--in", str(bad), "--out", str(tmp_path / "o.png")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err
