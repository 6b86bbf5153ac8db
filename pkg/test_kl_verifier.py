"""
Tests for the approximate Knill-Laflamme verifier
"""
import math
import random

import pytest

from core.ad_channels import ChannelKind, ChannelSpec, enumerate_error_ops
from core.constructions import gc_construct, lift, multi_error_construct, parity_inner_set, v_lambda_construct
from core.exceptions import ConstructionError, DimensionMismatchError
from core.five_qudit_code import five_qudit_code, unencoded_site
from core.kl_verifier import (deviation_at, fit_slope, order_slope, select_error_ops, verify_code,
                              verify_parity_structure, verify_single_ad_combinatorial)
from core.qudit_core import QuantumCode, QuditString, SparseState, relift

A3 = ChannelSpec(ChannelKind.BOSONIC, 3)
XI3 = ChannelSpec(ChannelKind.CASCADE, 3)


@pytest.fixture(scope="module")
def gc_6_27():
    return gc_construct(3, 6)


@pytest.fixture(scope="module")
def multi_10_5():
    return multi_error_construct(five_qudit_code(), 3, 2)


def two_level_code(q=3):
    basis = tuple(SparseState.basis(QuditString((d,), q)) for d in (0, 1))
    return QuantumCode(q, 1, basis, 1, frozenset({"A"}), "test", name="unencoded_01")


class TestDeviation:
    def test_single_state_has_no_deviation(self):
        code = lift([QuditString.parse("000", 3)])
        errors = enumerate_error_ops(A3, 3, 2, point=1e-2)
        assert deviation_at(code, errors) == pytest.approx(0.0, abs=1e-15)

    def test_unprotected_qutrit_scales_as_sqrt_gamma(self):
        gamma = 1e-3
        errors = enumerate_error_ops(A3, 1, 2, point=gamma)
        assert deviation_at(two_level_code(), errors) == pytest.approx(math.sqrt(gamma), rel=1e-9)

    def test_dimension_mismatch(self, gc_6_27):
        errors = enumerate_error_ops(A3, 3, 1, point=1e-2)
        with pytest.raises(DimensionMismatchError):
            deviation_at(gc_6_27, errors)

    def test_gc_code_second_order(self, gc_6_27):
        gamma = 1e-3
        errors, _, _ = select_error_ops(A3, 6, 1, "correctable")
        bound = [e.rebind(A3.at(gamma)) for e in errors]
        assert deviation_at(gc_6_27, bound, t=1) < 100 * gamma ** 2

    def test_invariant_under_error_order(self, gc_6_27):
        errors, _, _ = select_error_ops(A3, 6, 1, "correctable")
        site_ops = A3.at(3e-3)
        bound = [e.rebind(site_ops) for e in errors]
        shuffled = bound[:]
        random.Random(7).shuffle(shuffled)
        assert deviation_at(gc_6_27, shuffled) == pytest.approx(deviation_at(gc_6_27, bound), rel=1e-12)

    def test_invariant_under_basis_order(self, gc_6_27):
        errors = enumerate_error_ops(A3, 6, 2, point=3e-3)
        reordered = QuantumCode(gc_6_27.q, gc_6_27.n, tuple(reversed(gc_6_27.basis)), 1,
                                gc_6_27.channel_scope, "test")
        assert deviation_at(reordered, errors) == pytest.approx(deviation_at(gc_6_27, errors), rel=1e-12)

    def test_identity_pair_bounded_by_full_set(self, multi_10_5):
        errors = enumerate_error_ops(A3, 10, 2, point=1e-2)
        assert deviation_at(multi_10_5, errors[:1]) <= deviation_at(multi_10_5, errors) + 1e-15


class TestSelection:
    def test_correctable_filter(self):
        used, omitted, max_damping = select_error_ops(A3, 4, 1, "correctable")
        assert max_damping == 2
        assert len(used) == 1 + 4
        assert omitted > 0
        assert all(e.order_in_tau <= 0.5 for e in used)

    def test_total_order_filter(self):
        used, _, max_damping = select_error_ops(A3, 3, 1, "total_order")
        assert max_damping == 4
        assert all(e.order_in_tau <= 2.5 for e in used)

    def test_unknown_filter(self):
        with pytest.raises(ValueError):
            select_error_ops(A3, 3, 1, "everything")


class TestFit:
    def test_slope_of_power_law(self):
        grid = [1e-2, 1e-3, 1e-4]
        assert fit_slope(grid, [g ** 2 for g in grid], 1e-13) == pytest.approx(2.0)

    def test_points_below_floor_are_dropped(self):
        grid = [1e-2, 1e-3, 1e-4]
        assert fit_slope(grid, [1e-6, 1e-9, 1e-20], 1e-13) == pytest.approx(3.0)

    def test_unresolvable(self):
        assert fit_slope([1e-2, 1e-3], [1e-5, 1e-20], 1e-13) is None


class TestOrderSlope:
    def test_gc_code_bosonic(self, gc_6_27):
        report = order_slope(gc_6_27, A3, 1)
        assert report.passed
        assert report.exact or report.fitted_slope >= 1.85
        assert report.parameter == "gamma"
        assert len(report.deviations) == 5

    def test_gc_code_cascade(self, gc_6_27):
        report = order_slope(gc_6_27, XI3, 1)
        assert report.passed
        assert report.parameter == "tau"

    def test_gc_code_literal_pair_rule(self, gc_6_27):
        report = order_slope(gc_6_27, A3, 1, pair_filter="total_order")
        assert report.max_damping == 4
        assert report.pair_filter == "total_order"
        assert not report.passed
        assert report.fitted_slope < 1.5

    def test_unencoded_site_fails(self):
        report = order_slope(unencoded_site(3), A3, 1)
        assert not report.passed
        assert report.fitted_slope < 1.0

    def test_corrupted_support_fails(self, gc_6_27):
        first = gc_6_27.basis[0]
        terms = dict(first.terms)
        victim = sorted(terms)[1]
        amp = terms.pop(victim)
        digits = list(victim.digits)
        digits[-1] = (digits[-1] + 2) % 3
        terms[QuditString(tuple(digits), 3)] = amp
        corrupted = QuantumCode(3, 6, (SparseState(3, 6, terms),) + gc_6_27.basis[1:], 1,
                                gc_6_27.channel_scope, "test", name="corrupted")
        assert not order_slope(corrupted, A3, 1).passed

    def test_multi_error_code_bosonic(self, multi_10_5):
        report = order_slope(multi_10_5, A3, 2)
        assert report.passed
        assert report.exact or report.fitted_slope >= 2.85

    def test_multi_error_code_cascade(self, multi_10_5):
        assert order_slope(multi_10_5, XI3, 2).passed

    def test_threads_do_not_change_report(self, gc_6_27):
        serial = order_slope(gc_6_27, A3, 1, threads=1)
        parallel = order_slope(gc_6_27, A3, 1, threads=4)
        assert serial.deviations == parallel.deviations

    def test_rejects_alphabet_mismatch(self, gc_6_27):
        with pytest.raises(DimensionMismatchError):
            order_slope(gc_6_27, ChannelSpec(ChannelKind.BOSONIC, 4), 1)

    @pytest.mark.parametrize("pattern,kind", [("L1", ChannelKind.V), ("L2", ChannelKind.LAMBDA)])
    def test_v_lambda_codes_with_guard(self, pattern, kind):
        code = v_lambda_construct(five_qudit_code(), pattern, 2)
        report = order_slope(code, ChannelSpec(kind, 3), 2)
        assert report.guard is not None
        assert report.guard.channel["parameters"] == {"k1": 1.0, "k2": 1.0}
        assert report.channel["parameters"] == {"k1": 1.0, "k2": 2.0}
        assert report.passed


@pytest.mark.parametrize("kind", [ChannelKind.BOSONIC, ChannelKind.CASCADE])
def test_ternary_length5_nonlinear_gc_code(kind):
    code = gc_construct(3, 5, flavor="nonlinear")
    assert code.dimension == 11
    report = order_slope(code, ChannelSpec(kind, 3), 1)
    assert report.passed
    assert report.exact or report.fitted_slope >= 1.85


@pytest.mark.slow
def test_quaternary_length7_gc_code():
    code = gc_construct(4, 7)
    assert (code.n, code.dimension) == (7, 256)
    report = order_slope(code, ChannelSpec(ChannelKind.BOSONIC, 4), 1)
    assert report.passed
    assert report.exact or report.fitted_slope >= 1.85


@pytest.mark.slow
@pytest.mark.parametrize("q", [4, 5])
@pytest.mark.parametrize("kind", [ChannelKind.BOSONIC, ChannelKind.CASCADE])
def test_single_damping_codes_other_alphabets(q, kind):
    code = gc_construct(q, 6)
    assert verify_single_ad_combinatorial(code.classical)
    assert order_slope(code, ChannelSpec(kind, q), 1).passed


class TestCombinatorial:
    def test_gc_code(self, gc_6_27):
        assert verify_single_ad_combinatorial(gc_6_27.classical)

    def test_distance_one_code(self):
        assert not verify_single_ad_combinatorial(relift(3, ["00", "01"]))

    def test_needs_self_complementary(self):
        from core.qudit_core import ClassicalCode
        with pytest.raises(ConstructionError):
            verify_single_ad_combinatorial(ClassicalCode.from_words(3, ["00", "11"]))

    def test_parity_structure(self, multi_10_5):
        assert verify_parity_structure(multi_10_5, 2)

    def test_odd_block_detected(self):
        state = SparseState.basis(QuditString.parse("0112", 3))
        code = QuantumCode(3, 4, (state,), 1, frozenset(), "test")
        assert not verify_parity_structure(code, 2)

    def test_binary_even_parity_set(self):
        words = parity_inner_set(2, 3).words()
        assert {str(w) for w in words} == {"000", "011", "101", "110"}
        code = QuantumCode(2, 3, tuple(SparseState.basis(w) for w in words), 1, frozenset(), "test")
        assert verify_parity_structure(code, 3)

    def test_block_size_must_divide(self, multi_10_5):
        with pytest.raises(DimensionMismatchError):
            verify_parity_structure(multi_10_5, 3)


class TestVerifyCode:
    def test_gc_runs_combinatorial_check(self, gc_6_27):
        outcome = verify_code(gc_6_27, A3)
        assert outcome.combinatorial == {"single_damping_combinatorial": True}
        assert outcome.passed

    def test_multi_runs_parity_check(self, multi_10_5):
        outcome = verify_code(multi_10_5, A3)
        assert outcome.report.t == 2
        assert outcome.combinatorial == {"parity_structure": True}
        assert outcome.passed

    def test_rejects_unnormalized_basis(self):
        heavy = SparseState(3, 1, {QuditString.parse("0", 3): 5.0})
        code = QuantumCode(3, 1, (heavy,), 1, frozenset({"A"}), "test", name="heavy")
        with pytest.raises(ConstructionError) as info:
            verify_code(code, A3)
        assert info.value.check == "orthonormality"

    def test_symbol_map_does_not_change_verdict(self):
        remapped = multi_error_construct(five_qudit_code(), 3, 2, ["00", "11", "22", "02", "20"])
        assert verify_code(remapped, A3).passed
