"""
Tests for the quinary five-qudit encoder
"""
import pytest

from core.exceptions import ParameterRangeError, RegistryLookupError
from core.five_qudit_code import encode_5_1_3_5, five_qudit_code, quantum_outer
from core.kl_verifier import pauli_detection_deviation
from core.qudit_core import inner_product


def test_states_have_125_terms():
    for k in range(5):
        state = encode_5_1_3_5(k)
        assert len(state) == 125
        assert state.is_normalized()


def test_orthonormal():
    states = [encode_5_1_3_5(k) for k in range(5)]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            assert abs(inner_product(a, b) - (i == j)) < 1e-10


def test_logical_digit_range():
    with pytest.raises(ParameterRangeError):
        encode_5_1_3_5(5)


def test_detects_single_site_paulis():
    assert pauli_detection_deviation(five_qudit_code(), 1) < 1e-10


@pytest.mark.slow
def test_distance_three():
    assert pauli_detection_deviation(five_qudit_code(), 2) < 1e-10


def test_registry():
    code = quantum_outer("5_1_3_5")
    assert (code.n, code.dimension, code.metadata["distance"]) == (5, 5, 3)
    assert quantum_outer("trivial_3").dimension == 3
    with pytest.raises(RegistryLookupError):
        quantum_outer("7_1_3_7")
    with pytest.raises(RegistryLookupError):
        quantum_outer("trivial_x")
