import numpy as np
import pytest
from hypothesis import settings

from matrixless_toeplitz import SymbolParams
from matrixless_toeplitz.harness import RunConfig, build_cache, compute_spectra

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def model():
    return SymbolParams(0.75)


@pytest.fixture(scope="session")
def config():
    return RunConfig()


@pytest.fixture(scope="session")
def precompute_spectra(model, config):
    return compute_spectra(model, config.precompute_sizes())


@pytest.fixture(scope="session")
def cache(config, precompute_spectra):
    return build_cache(config, precompute_spectra)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
