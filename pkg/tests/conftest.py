import numpy as np
import pytest

from evlcp.probgen import gen_example51, gen_example52, gen_random_certified


@pytest.fixture
def ex51():
    return gen_example51()


@pytest.fixture
def ex52():
    return gen_example52()


def random_corpus(count, seed0=0, max_n=4, max_k=2):
    """Seeded random certified instances with n <= max_n, k <= max_k."""
    rng = np.random.default_rng(seed0)
    for j in range(count):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, max_k + 1))
        yield gen_random_certified(n, k, seed0 * 100_000 + j)
