"""
Shared test fixtures for Nonlinearity SDK tests.
"""

import numpy as np
import pytest

from nonlinearity_sdk import (
    BooleanFunction,
    VectorialFunction,
    example_boolean_function,
    example_inverse_sbox,
)
from nonlinearity_sdk.config import reset_config, update_config
from nonlinearity_sdk.subspaces import canonicalize

# =====================
# Configuration Fixtures
# =====================


@pytest.fixture(autouse=True)
def single_process_config():
    """Run every test against default settings with one worker."""
    reset_config()
    update_config(parallel={"jobs": 1})
    yield
    reset_config()


# =====================
# Function Fixtures
# =====================


@pytest.fixture
def example_function():
    """The five-variable example function (weight 16)."""
    return example_boolean_function()


@pytest.fixture
def inverse_sbox():
    """Inversion S-box over GF(2^4) with modulus x^4 + x + 1."""
    return example_inverse_sbox()


@pytest.fixture
def rng():
    """Seeded generator for property suites."""
    return np.random.default_rng(20240917)


@pytest.fixture
def random_boolean(rng):
    """Factory for random non-constant-zero Boolean functions."""

    def make(n):
        while True:
            table = rng.integers(0, 2, size=1 << n)
            if table.any():
                return BooleanFunction(n, table)

    return make


@pytest.fixture
def random_vectorial(rng):
    """Factory for random vectorial functions."""

    def make(n, m):
        return VectorialFunction(n, m, rng.integers(0, 1 << m, size=1 << n))

    return make


@pytest.fixture
def random_invertible(rng):
    """Factory for random invertible n x n matrices over GF(2)."""

    def make(n):
        while True:
            rows = [int(v) for v in rng.integers(0, 1 << n, size=n)]
            if canonicalize(rows, n).rank == n:
                return rows

    return make


def bent_tables_n4():
    """All 896 bent functions of four variables, as table integers, by direct spectrum check."""
    from nonlinearity_sdk.core import fwht

    values = np.arange(1 << 16, dtype=np.int64)
    bits = (values[:, None] >> np.arange(15, -1, -1)) & 1
    spectra = fwht(1 - 2 * bits)
    return set(np.flatnonzero(np.all(np.abs(spectra) == 4, axis=1)).tolist())


@pytest.fixture(scope="session")
def bent_n4():
    return bent_tables_n4()
