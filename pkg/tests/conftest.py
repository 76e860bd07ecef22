import numpy as np
import pytest
from hypothesis import strategies as st

from boundent.states import FamilyParams

ACCEPTANCE_LINES: list[str] = []


def random_params(rng: np.random.Generator, eps=None) -> FamilyParams:
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    if eps is None:
        eps = rng.uniform(0.0, 1.0)
    return FamilyParams.normalized(*z, eps)


def random_hermitian(rng: np.random.Generator, n: int = 16) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return X + X.conj().T


def random_unitary(rng: np.random.Generator, n: int = 16) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(X)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_amplitude = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def family_params(draw, eps=st.floats(0.0, 1.0)):
    amps = [draw(_amplitude) for _ in range(4)]
    if sum(abs(x) ** 2 for x in amps) < 1e-6:
        amps[0] = 1.0
    return FamilyParams.normalized(*amps, draw(eps))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
