import numpy as np
import pytest

from mcastpower.config import (
    AgentHyperparams,
    ConfigError,
    Scenario,
    SystemConfig,
    bundled_scenario,
    load_scenario,
    scenario_from_dict,
)
from mcastpower.channels import DiscreteChannel

MINIMAL = {
    "system": {
        "num_users": 2,
        "catalog_size": 5,
        "file_size_bits": 1.0,
        "tx_rate_bps": 2.0,
        "power_levels": {"min": 1.0, "max": 50.0, "count": 20},
        "avg_power_constraint": 7.0,
        "channels": [
            {"users": [0], "kind": "discrete", "values": [0.1, 0.2]},
            {"users": [1], "kind": "exponential", "mean": 1.0},
        ],
    }
}


def _doc(**overrides):
    import copy

    doc = copy.deepcopy(MINIMAL)
    for key, val in overrides.items():
        section, _, name = key.partition(".")
        if name:
            doc.setdefault(section, {})[name] = val
        else:
            doc[section] = val
    return doc


class TestSystemConfig:
    def test_service_time(self):
        sc = scenario_from_dict(MINIMAL)
        assert sc.system.service_time == pytest.approx(0.5)
        assert sc.system.num_actions == 20

    def test_zipf_probabilities(self):
        sc = scenario_from_dict(_doc(**{"system.zipf_exponent": 1.0}))
        probs = sc.system.zipf_probs
        assert probs.sum() == pytest.approx(1.0)
        assert probs[0] / probs[4] == pytest.approx(5.0)

    def test_sample_file_distribution(self):
        sc = scenario_from_dict(_doc(**{"system.zipf_exponent": 1.0}))
        rng = np.random.default_rng(0)
        draws = np.array([sc.system.sample_file(rng) for _ in range(20_000)])
        freq = np.bincount(draws, minlength=5) / len(draws)
        assert np.allclose(freq, sc.system.zipf_probs, atol=0.01)

    @pytest.mark.parametrize(
        "field,value,fragment",
        [
            ("system.num_users", 0, "out of range"),
            ("system.noise_power", -1.0, "noise_power"),
            ("system.power_levels", [5.0, 4.0], "power_levels"),
            ("system.avg_power_constraint", 100.0, "avg_power_constraint"),
            ("system.gain_scale", 0.0, "gain_scale"),
            ("system.max_attempts", -1, "max_attempts"),
        ],
    )
    def test_validation_messages_name_the_field(self, field, value, fragment):
        with pytest.raises(ConfigError, match=fragment):
            scenario_from_dict(_doc(**{field: value}))

    def test_channel_coverage_errors(self):
        with pytest.raises(ConfigError, match="no model for users"):
            scenario_from_dict(
                _doc(**{"system.channels": [
                    {"users": [0], "kind": "discrete", "values": [0.1]},
                ]})
            )
        with pytest.raises(ConfigError, match="listed twice"):
            scenario_from_dict(
                _doc(**{"system.channels": [
                    {"users": [0, 1], "kind": "discrete", "values": [0.1]},
                    {"users": [1], "kind": "exponential", "mean": 1.0},
                ]})
            )
        with pytest.raises(ConfigError, match="unknown kind"):
            scenario_from_dict(
                _doc(**{"system.channels": [
                    {"users": [0, 1], "kind": "rician", "k": 3.0},
                ]})
            )

    def test_unknown_system_field_rejected(self):
        with pytest.raises(ConfigError, match="system"):
            scenario_from_dict(_doc(**{"system.carrier_freq": 2.4e9}))


class TestAgentHyperparams:
    def test_defaults_valid(self):
        AgentHyperparams()

    def test_tracking_timescale_separation_enforced(self):
        with pytest.raises(ConfigError, match="eta2"):
            AgentHyperparams(mode="tracking", eta1=0.001, eta2=0.001)
        AgentHyperparams(mode="tracking", eta1=0.001, eta2=3e-5)

    def test_stationary_needs_decay(self):
        with pytest.raises(ConfigError):
            AgentHyperparams(mode="stationary", eta1_decay=0.0)

    def test_bad_mode(self):
        with pytest.raises(ConfigError, match="mode"):
            AgentHyperparams(mode="adaptive")


class TestScenario:
    def test_schedule_validation(self):
        with pytest.raises(ConfigError, match="schedule"):
            scenario_from_dict(_doc(schedule=[[0.0, 1.0]]))
        sc = scenario_from_dict(_doc(schedule=[[100.0, 0.4], [100.0, 0.8]]))
        assert sc.arrival_schedule == [(100.0, 0.4), (100.0, 0.8)]

    def test_bad_algorithm(self):
        with pytest.raises(ConfigError, match="algorithm"):
            scenario_from_dict(_doc(algorithm="ppo"))

    def test_load_yaml_roundtrip(self, tmp_path):
        import yaml

        path = tmp_path / "scenario.yaml"
        path.write_text(yaml.safe_dump(_doc(name="tiny", horizon=123, seeds=[4, 5])))
        sc = load_scenario(path)
        assert sc.name == "tiny"
        assert sc.horizon == 123
        assert sc.seeds == [4, 5]
        assert isinstance(sc.system.channels[0], DiscreteChannel)

    def test_non_mapping_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            load_scenario(path)

    @pytest.mark.parametrize(
        "name", ["small-4user", "large-20user", "tracking-24h", "tracking-48h"]
    )
    def test_bundled_scenarios_load(self, name):
        sc = bundled_scenario(name)
        assert sc.name == name
        assert sc.system.num_users >= 4
