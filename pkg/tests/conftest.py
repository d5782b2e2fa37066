import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def assert_close(x, y, tol, rel=False):
    x, y = np.asarray(x), np.asarray(y)
    err = np.linalg.norm(np.atleast_2d(x - y), 2)
    if rel:
        err /= max(np.linalg.norm(np.atleast_2d(y), 2), 1e-300)
    assert err <= tol, f"error {err:.3e} exceeds {tol:.1e}"
