"""
Tests for qudit strings, sparse states and code containers
"""
import pytest
from hypothesis import given, strategies as st

from core.exceptions import ConstructionError, DimensionMismatchError
from core.qudit_core import (ClassicalCode, QuantumCode, QuditString, SparseState, all_one_orbit,
                             apply_string_shift, inner_product, orbit_transversal, relift, states_to_csr)


def strings(q_max=7, n_max=6):
    return st.integers(2, q_max).flatmap(
        lambda q: st.lists(st.integers(0, q - 1), min_size=1, max_size=n_max).map(
            lambda d: QuditString(tuple(d), q)))


def amplitudes():
    parts = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    return st.builds(complex, parts, parts)


def sparse_states(q=3, n=3):
    keys = st.tuples(*[st.integers(0, q - 1)] * n)
    return st.dictionaries(keys, amplitudes(), max_size=12).map(
        lambda terms: SparseState.from_terms(q, n, terms.items()))


class TestQuditString:
    def test_parse_and_render_base36(self):
        s = QuditString.parse("0a3", 11)
        assert s.digits == (0, 10, 3)
        assert str(s) == "0a3"
        assert s.n == 3

    def test_rejects_digit_outside_alphabet(self):
        with pytest.raises(ValueError):
            QuditString.parse("013", 3)

    def test_rejects_alphabet_out_of_range(self):
        with pytest.raises(ValueError):
            QuditString((0,), 1)
        with pytest.raises(ValueError):
            QuditString((0,), 37)

    def test_coerce_checks_alphabet(self):
        with pytest.raises(DimensionMismatchError):
            QuditString.coerce(QuditString.parse("01", 3), 5)

    def test_shift_wraps(self):
        assert str(apply_string_shift(QuditString.parse("0122", 3), 1)) == "1200"

    def test_orbit_in_alpha_order(self):
        orbit = all_one_orbit(QuditString.parse("00", 3))
        assert [str(s) for s in orbit] == ["00", "11", "22"]

    @given(strings(), st.integers(0, 36))
    def test_shifts_compose(self, s, a):
        a %= s.q
        b = (a * 2 + 1) % s.q
        assert s.shift(a).shift(b) == s.shift((a + b) % s.q)

    @given(strings())
    def test_orbit_has_q_distinct_members(self, s):
        assert len(set(all_one_orbit(s))) == s.q


class TestSparseState:
    def test_from_terms_accumulates_and_prunes(self):
        u = QuditString.parse("01", 3)
        state = SparseState.from_terms(3, 2, [(u, 0.5), (u, 0.5), ((1, 1), 1e-20)])
        assert dict(state.terms) == {u: 1 + 0j}

    def test_rejects_foreign_terms(self):
        with pytest.raises(DimensionMismatchError):
            SparseState(3, 2, {QuditString.parse("012", 3): 1.0})

    def test_inner_product_conjugates_left(self):
        u, v = QuditString.parse("0", 2), QuditString.parse("1", 2)
        a = SparseState(2, 1, {u: 1j, v: 0})
        b = SparseState(2, 1, {u: 1.0})
        assert inner_product(a, b) == pytest.approx(-1j)
        assert inner_product(b, a) == pytest.approx(1j)

    @given(sparse_states(), sparse_states())
    def test_inner_product_conjugate_symmetric(self, a, b):
        assert inner_product(a, b) == pytest.approx(inner_product(b, a).conjugate(), abs=1e-12)

    @given(sparse_states())
    def test_self_inner_product_is_norm(self, a):
        assert inner_product(a, a) == pytest.approx(a.norm() ** 2, abs=1e-12)

    def test_direct_construction_prunes(self):
        u, v = QuditString.parse("0", 2), QuditString.parse("1", 2)
        state = SparseState(2, 1, {u: 1.0, v: 1e-20})
        assert state.support() == [u]
        assert isinstance(state.terms[u], complex)

    def test_inner_product_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            inner_product(SparseState.basis(QuditString.parse("0", 2)), SparseState.basis(QuditString.parse("0", 3)))

    def test_states_to_csr_shares_columns(self):
        matrix, index = states_to_csr([{(0,): 1.0}, {(0,): 2.0, (1,): 1.0}])
        assert matrix.shape == (2, 2)
        assert matrix[1, index[(0,)]] == 2.0


class TestClassicalCode:
    def test_relift_expands_orbits(self):
        code = relift(3, ["000", "012"])
        assert len(code) == 6
        assert QuditString.parse("120", 3) in code

    def test_relift_rejects_repeated_orbit(self):
        with pytest.raises(ConstructionError):
            relift(3, ["000", "111"])

    def test_transversal_must_cover(self):
        words = [QuditString.parse(w, 3) for w in ("000", "111")]
        with pytest.raises(ConstructionError):
            ClassicalCode(3, 3, frozenset(words), tilde_transversal=frozenset(words[:1]))

    def test_orbit_transversal_picks_leading_zero(self):
        code = ClassicalCode.from_words(3, ["000", "111", "222", "012", "120", "201"])
        tilde = orbit_transversal(code).tilde_transversal
        assert {str(u) for u in tilde} == {"000", "012"}

    def test_orbit_transversal_needs_closure(self):
        with pytest.raises(ConstructionError):
            orbit_transversal(ClassicalCode.from_words(3, ["000", "111"]))

    def test_shifted_by(self):
        code = ClassicalCode.from_words(3, ["00", "11"]).shifted_by((0, 1))
        assert {str(w) for w in code} == {"01", "12"}

    def test_empty_code_needs_length(self):
        with pytest.raises(ValueError):
            ClassicalCode.from_words(3, [])
        assert ClassicalCode.from_words(3, [], n=4).n == 4


class TestQuantumCode:
    def test_gram_and_orthonormality(self):
        a = SparseState.basis(QuditString.parse("00", 2))
        b = SparseState.basis(QuditString.parse("11", 2))
        code = QuantumCode(2, 2, (a, b), 0, frozenset(), "test")
        assert code.dimension == 2
        assert code.gram_deviation() == pytest.approx(0.0)
        code.check_orthonormal()

    def test_non_orthogonal_basis_fails(self):
        s = 2 ** -0.5
        a = SparseState.basis(QuditString.parse("0", 2))
        b = SparseState(2, 1, {QuditString.parse("0", 2): s, QuditString.parse("1", 2): s})
        with pytest.raises(ConstructionError):
            QuantumCode(2, 1, (a, b), 0, frozenset(), "test").check_orthonormal()

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            QuantumCode(2, 1, (SparseState.basis(QuditString.parse("00", 2)),), 0, frozenset(), "test")

    def test_rejects_empty_basis(self):
        with pytest.raises(ConstructionError):
            QuantumCode(2, 1, (), 0, frozenset(), "test")
