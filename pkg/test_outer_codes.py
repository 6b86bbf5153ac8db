"""
Tests for outer codes
"""
import pytest

from core.asym_metrics import min_hamming_distance
from core.exceptions import ConstructionError, RegistryLookupError
from core.outer_codes import (hamming_redundancy, make_entry, outer_from_file, outer_registry,
                              projective_columns, shortened_hamming)
from core.qudit_core import ClassicalCode


def test_ternary_repetition():
    entry = outer_registry(3, 3)
    assert {str(w) for w in entry.code} == {"000", "111", "222"}
    assert entry.dimension == pytest.approx(1.0)


def test_tetracode():
    entry = outer_registry(3, 4)
    assert entry.size == 9
    assert min_hamming_distance(entry.code) == 3


def test_shortened_ternary_hamming_length8():
    entry = outer_registry(3, 8)
    assert entry.size == 3 ** 5
    assert min_hamming_distance(entry.code) >= 3


@pytest.mark.parametrize("q,length,k", [(3, 9, 6), (4, 5, 3), (5, 6, 4), (7, 4, 2)])
def test_dimension_of_shortened_codes(q, length, k):
    code = shortened_hamming(q, length)
    assert len(code) == q ** k
    assert min_hamming_distance(code) >= 3


def test_redundancy():
    assert hamming_redundancy(3, 4) == 2
    assert hamming_redundancy(3, 5) == 3
    assert hamming_redundancy(3, 13) == 3


def test_projective_columns_start_with_units():
    cols = projective_columns(3, 2)
    assert cols[:2] == [(1, 0), (0, 1)]
    assert len(cols) == 4


def test_short_lengths_are_trivial():
    assert outer_registry(3, 1).size == 1
    assert outer_registry(5, 2, "rq_single").size == 1


def test_rq_property_for_repetition():
    assert outer_registry(5, 3, "rq_single").size == 5


def test_non_prime_power():
    with pytest.raises(RegistryLookupError):
        outer_registry(6, 4)


def test_unknown_property():
    with pytest.raises(RegistryLookupError):
        outer_registry(3, 4, "quantum_distance_t_plus_1")


def test_file_code_must_hold_property():
    bad = ClassicalCode.from_words(3, ["000", "001"])
    with pytest.raises(ConstructionError):
        outer_from_file(bad, "hamming_d3")
    good = ClassicalCode.from_words(4, ["00", "22"])
    assert make_entry(good, "rq_single", "file").source == "file"
