import numpy as np
import pytest

from levcur.random_matrices import make_rng


@pytest.fixture
def rng():
    return make_rng(1234)


def seeded(seed, stream=0):
    return make_rng(seed, stream)


def random_orthonormal(m, p, rng):
    """Orthonormal columns via QR of a Gaussian draw."""
    G = rng.standard_normal((m, p))
    Q, _ = np.linalg.qr(G)
    return Q
