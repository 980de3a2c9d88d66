import numpy as np
import pytest

from mcastpower.channels import DiscreteChannel
from mcastpower.config import AgentHyperparams, SystemConfig


@pytest.fixture
def two_user_config():
    """Tiny discrete system: one weak and one strong user."""
    ch_bad = DiscreteChannel([0.1, 0.2, 0.3])
    ch_good = DiscreteChannel([0.7, 0.8, 0.9])
    return SystemConfig(
        num_users=2,
        catalog_size=10,
        file_size_bits=1.0,
        tx_rate_bps=1.0,
        power_levels=np.linspace(1.0, 50.0, 20),
        avg_power_constraint=7.0,
        channels=[ch_bad, ch_good],
        spectral_ratio=0.5,
        arrival_rate=1.0,
    )


@pytest.fixture
def four_user_config():
    ch_bad = DiscreteChannel([0.1, 0.2, 0.3])
    ch_good = DiscreteChannel([0.7, 0.8, 0.9])
    return SystemConfig(
        num_users=4,
        catalog_size=100,
        file_size_bits=1.0,
        tx_rate_bps=1.0,
        power_levels=np.linspace(1.0, 50.0, 20),
        avg_power_constraint=7.0,
        channels=[ch_bad, ch_bad, ch_good, ch_good],
        spectral_ratio=0.5,
        arrival_rate=1.2,
        gain_scale=0.9,
    )


@pytest.fixture
def hyper():
    return AgentHyperparams()
