import json

import pytest
import yaml

from mcastpower.cli import main

from test_harness import TINY_DOC


@pytest.fixture
def tiny_yaml(tmp_path):
    path = tmp_path / "tiny.yaml"
    path.write_text(yaml.safe_dump(TINY_DOC))
    return str(path)


class TestRunCommand:
    def test_prints_one_summary_per_seed(self, tiny_yaml, tmp_path, capsys):
        rc = main(["run", tiny_yaml, "--out", str(tmp_path / "runs")])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        summaries = [json.loads(l) for l in lines]
        assert [s["seed"] for s in summaries] == [1, 2]
        assert (tmp_path / "runs" / "tiny_constant_seed1.csv").exists()

    def test_seed_and_horizon_overrides(self, tiny_yaml, tmp_path, capsys):
        rc = main([
            "run", tiny_yaml, "--seed", "7", "--horizon", "150",
            "--algorithm", "acdqn", "--out", str(tmp_path / "runs"),
        ])
        assert rc == 0
        (line,) = capsys.readouterr().out.strip().splitlines()
        s = json.loads(line)
        assert s["seed"] == 7
        assert s["algorithm"] == "acdqn"
        assert s["transmissions"] <= 150

    def test_missing_file_exits_2(self, capsys):
        rc = main(["run", "/nonexistent/scenario.yaml"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_scenario_exits_2(self, tmp_path, capsys):
        bad = dict(TINY_DOC)
        bad["algorithm"] = "ppo"
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump(bad))
        rc = main(["run", str(path)])
        assert rc == 2
        assert "algorithm" in capsys.readouterr().err


class TestSweepCommand:
    def test_rows_and_csv(self, tiny_yaml, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        rc = main([
            "sweep", tiny_yaml, "--rates", "0.5,1.5", "--algorithms", "constant",
            "--seed", "1", "--out", str(out),
        ])
        assert rc == 0
        rows = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
        assert len(rows) == 2
        assert out.exists()


class TestCompareCommand:
    def test_compare_same_trace(self, tiny_yaml, tmp_path, capsys):
        main(["run", tiny_yaml, "--seed", "1", "--out", str(tmp_path)])
        trace = str(tmp_path / "tiny_constant_seed1.csv")
        capsys.readouterr()
        rc = main(["compare", trace, trace, "--window", "100"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["sojourn_improvement_pct"] == pytest.approx(0.0)


class TestOracleCommand:
    def test_report_to_stdout_and_file(self, tiny_yaml, tmp_path, capsys):
        out = tmp_path / "policy.txt"
        rc = main([
            "oracle", tiny_yaml, "--samples", "2000", "--rounds", "1",
            "--out", str(out),
        ])
        assert rc == 0
        text = capsys.readouterr().out
        assert text.startswith("oracle-policy-report")
        assert out.read_text() == text

    def test_continuous_channels_exit_2(self, tmp_path, capsys):
        doc = yaml.safe_load(yaml.safe_dump(TINY_DOC))
        doc["system"]["channels"] = [
            {"users": [0, 1], "kind": "exponential", "mean": 1.0}
        ]
        path = tmp_path / "cont.yaml"
        path.write_text(yaml.safe_dump(doc))
        rc = main(["oracle", str(path)])
        assert rc == 2
        assert "discrete" in capsys.readouterr().err
