import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from meroshift.operators import disk_samples

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def disk():
    """The default 100-point low-discrepancy sample of |z| <= 5."""
    return disk_samples(100, 5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def rel_err(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
