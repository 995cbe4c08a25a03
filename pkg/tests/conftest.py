import math
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "hardykit" / "fixtures"
SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name
