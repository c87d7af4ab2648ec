import pytest

from twisted_chain.chain import ModelParams
from twisted_chain.spectrum import extract_states, joint_eigenbasis


@pytest.fixture(scope="session")
def real_a():
    return ModelParams(2, 0.2, 0.6j)


@pytest.fixture(scope="session")
def imag_a():
    return ModelParams(2, 0.2j, 0.6)


@pytest.fixture(scope="session")
def real_a_basis(real_a):
    return joint_eigenbasis(real_a)


@pytest.fixture(scope="session")
def real_a_states(real_a, real_a_basis):
    return extract_states(real_a, real_a_basis)


@pytest.fixture(scope="session")
def imag_a_basis(imag_a):
    return joint_eigenbasis(imag_a)


@pytest.fixture(scope="session")
def imag_a_states(imag_a, imag_a_basis):
    return extract_states(imag_a, imag_a_basis)


@pytest.fixture(scope="session")
def shadow_states():
    from twisted_chain.shadows import classified_states

    return classified_states(ModelParams(4, 0.2, 0.6j))
