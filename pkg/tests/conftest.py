import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rheakit import DomainConfig, EvolveConfig, gather_experts


@pytest.fixture(scope="session")
def domain() -> DomainConfig:
    return DomainConfig()


@pytest.fixture(scope="session")
def experts(domain):
    return gather_experts(domain)


@pytest.fixture
def tiny_config() -> EvolveConfig:
    """Small, fast evolution setup for mechanics tests (not for recovery)."""
    return EvolveConfig(population_size=24, generations=12, seed=7)
