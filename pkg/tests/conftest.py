import pytest

from msgeo.data.problem_file import load_problem


@pytest.fixture
def klein_gordon():
    """The two-dimensional Klein-Gordon lagrangian with m0 = 1."""
    return load_problem("sample:klein-gordon").problem


@pytest.fixture
def oscillator():
    """Harmonic oscillator problem file, with its solving connection."""
    return load_problem("sample:harmonic-oscillator")


@pytest.fixture
def free_particle():
    return load_problem("sample:free-particle")


@pytest.fixture
def field_model():
    return load_problem("sample:field-model")
