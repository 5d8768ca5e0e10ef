import numpy as np
import pytest


def random_pure_state(rng):
    psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    return psi / np.linalg.norm(psi)


def random_density_matrix(rng):
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def haar_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
