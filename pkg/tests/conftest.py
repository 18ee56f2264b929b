"""Shared fixtures for slow solves reused across test modules."""

import pytest

from flowerwaves.bifurcation import find_bifurcation
from flowerwaves.ksplit_states import solve_ksplit_at_eps


@pytest.fixture(scope="session")
def report_n2():
    return find_bifurcation(2)


@pytest.fixture(scope="session")
def report_n3():
    return find_bifurcation(3)


@pytest.fixture(scope="session")
def deep_ksplit_n3():
    """Opposite-regime K-split states at eps = 5 for N = 3, keyed by K."""
    return {k: solve_ksplit_at_eps(5.0, 3, k)[0] for k in (1, 2)}


@pytest.fixture(scope="session")
def n2_k1_states():
    """The N = 2, K = 1 opposite-regime state at a few moderate scales."""
    return {eps: solve_ksplit_at_eps(eps, 2, 1)[0] for eps in (1.5, 2.0, 3.0)}
