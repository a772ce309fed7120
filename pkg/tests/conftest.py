import numpy as np
import pytest
from hypothesis import strategies as st

from zenolab.pauli import PauliOperator, build_detection_code


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(scope="session")
def code4():
    return build_detection_code(4)


def pauli_strategy(n: int, with_phase: bool = True):
    """Random n-qubit PauliOperator."""
    bits = st.tuples(
        st.tuples(*[st.integers(0, 1)] * n),
        st.tuples(*[st.integers(0, 1)] * n),
    )
    phases = st.sampled_from([1, -1, 1j, -1j]) if with_phase else st.just(1)
    return st.builds(
        lambda xz, phase: PauliOperator(n, xz[0], xz[1], phase), bits, phases
    )
