import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from rieszned.lattice import cond_exp, global_mean, uniform_space

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile(
    "thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def four_atom():
    """Uniform 4 atoms, T global, U = {ab|cd}, V = {a|bcd}."""
    sp = uniform_space(4)
    return sp, global_mean(sp), cond_exp(sp, [[0, 1], [2, 3]]), cond_exp(sp, [[0], [1, 2, 3]])
