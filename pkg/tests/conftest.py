import numpy as np
import pytest

from hnlsqec.scenarios import (SX, SY, SZ, THREE_LEVEL_H, THREE_LEVEL_L, qubit_dephasing,
                               qubit_rank1_pauli, three_level_model)

I2 = np.eye(2, dtype=complex)


def random_matrix(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_hermitian(rng, d):
    A = random_matrix(rng, d)
    return (A + A.conj().T) / 2


def random_density(rng, d, rank=None):
    rank = rank or d
    X = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def three_level():
    return three_level_model()


@pytest.fixture
def dephasing_model():
    return qubit_dephasing()


@pytest.fixture
def rank1_model():
    return qubit_rank1_pauli()
