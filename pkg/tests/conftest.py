import zlib

import numpy as np
import pytest

from qse.sampling import trial_rng


@pytest.fixture
def rng(request):
    # one independent stream per test, stable across runs
    return trial_rng(zlib.crc32(request.node.name.encode()))


def ginibre(n, m, rng):
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def random_hermitian(n, rng):
    g = ginibre(n, n, rng)
    return 0.5 * (g + g.conj().T)
