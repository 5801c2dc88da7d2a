import random

import pytest

from mcfe_si import scheme
from mcfe_si.pairing import default_context


@pytest.fixture(scope="session")
def ctx():
    return default_context()


@pytest.fixture(scope="session")
def small_deployment(ctx):
    """One seeded (pp, msk, csks) instance shared by read-only tests."""
    rng = random.Random(1234)
    return scheme.setup(ctx, 5, 3, rng)
