import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from orbitqmi.spectra import Spectrum

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LAMBDA = (0.6, 0.3, 0.1, 0.0)


@pytest.fixture
def lam():
    return Spectrum(LAMBDA, (2, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def weights(d, min_value=0.0):
    """Hypothesis strategy for normalized probability vectors of length d."""
    return st.lists(st.floats(min_value=min_value, max_value=1.0), min_size=d, max_size=d).filter(
        lambda w: sum(w) > 1e-3
    ).map(lambda w: np.asarray(w) / sum(w))


def spectra(dims, min_value=0.0):
    return weights(dims[0] * dims[1], min_value).map(lambda w: Spectrum(w / w.sum(), dims))


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
