import sys

import numpy as np
import pytest

from ppt_forge.hermitian_core import BipartiteDims
from ppt_forge.perturbation import prepare_upb, rank45_pipeline
from ppt_forge.product_vectors import OrthParams
from ppt_forge.state_construction import search_low_rank_ppt, upb_state

D33 = BipartiteDims(3, 3)
D44 = BipartiteDims(4, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def upb_unit():
    return upb_state(OrthParams(1, 1, 1, 1))


@pytest.fixture(scope="session")
def upb_context():
    return prepare_upb(OrthParams(1.3, 0.7, 0.9, 1.6), np.random.default_rng(101))


@pytest.fixture(scope="session")
def state55():
    """A (5,5) state from the low-rank search, comfortably away from the boundary."""
    return search_low_rank_ppt(D33, 5, 5, np.random.default_rng(5)).rho


@pytest.fixture(scope="session")
def state55_from_upb(upb_context):
    return rank45_pipeline(upb_context, np.random.default_rng(202)).step.rho_prime


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n][1])
