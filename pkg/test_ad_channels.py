"""
Tests for Kraus builders and error-operator enumeration
"""
from itertools import product
import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy.stats import linregress

from core.ad_channels import (ChannelKind, ChannelSpec, bosonic_kraus, cascade_coefficients_from_rates,
                              cascade_kraus, count_error_ops, enumerate_error_ops, kraus_completeness,
                              v_lambda_kraus, v_lambda_rates)
from core.exceptions import ParameterRangeError, ResourceLimitError
from core.qudit_core import QuditString, SparseState


class TestBosonic:
    def test_qubit_operators(self):
        g = 0.1
        a0, a1 = bosonic_kraus(2, g)
        np.testing.assert_allclose(a0.matrix(), np.diag([1, math.sqrt(1 - g)]))
        np.testing.assert_allclose(a1.matrix(), [[0, math.sqrt(g)], [0, 0]])

    def test_qutrit_operators(self):
        g = 0.2
        ops = bosonic_kraus(3, g)
        a1, a2 = ops[1].matrix(), ops[2].matrix()
        assert a1[0, 1] == pytest.approx(math.sqrt(g))
        assert a1[1, 2] == pytest.approx(math.sqrt(2 * g * (1 - g)))
        assert a2[0, 2] == pytest.approx(g)
        assert [op.damping_weight for op in ops] == [0, 1, 2]
        assert [op.order_in_tau for op in ops] == [0, 0.5, 1.0]

    @hsettings(max_examples=40)
    @given(st.integers(2, 8), st.floats(1e-6, 0.999))
    def test_completeness(self, q, gamma):
        assert kraus_completeness(bosonic_kraus(q, gamma)) < 1e-12

    @pytest.mark.parametrize("gamma", [0.0, 1.0, -0.1, 1.5])
    def test_gamma_range(self, gamma):
        with pytest.raises(ParameterRangeError):
            bosonic_kraus(3, gamma)


class TestCascade:
    def test_completeness_default_coefficients(self):
        assert kraus_completeness(cascade_kraus(4, None, 1e-3)) < 1e-12

    def test_three_level_leading_orders(self):
        k1, k2, tau = 1.0, 2.0, 1e-3
        ops = {op.label: op for op in cascade_kraus(3, cascade_coefficients_from_rates(k1, k2), tau)}
        assert ops["A01"].matrix()[0, 1] ** 2 == pytest.approx(2 * k2 * tau)
        assert ops["A12"].matrix()[1, 2] ** 2 == pytest.approx(2 * k1 * tau)
        assert ops["A02"].matrix()[0, 2] ** 2 == pytest.approx(2 * k1 * k2 * tau ** 2)
        assert ops["A02"].damping_weight == 2

    def test_qubit_matches_bosonic(self):
        tau, c = 1e-2, 3.0
        cascade = cascade_kraus(2, {(0, 1): c}, tau)
        bosonic = bosonic_kraus(2, c * tau)
        for a, b in zip(cascade, bosonic):
            np.testing.assert_allclose(a.matrix(), b.matrix())

    def test_overdamped_level_rejected(self):
        with pytest.raises(ParameterRangeError):
            cascade_kraus(3, {(0, 1): 5.0, (0, 2): 1.0, (1, 2): 1.0}, 0.5)

    def test_invalid_transition(self):
        with pytest.raises(ParameterRangeError):
            cascade_kraus(3, {(2, 1): 1.0}, 1e-3)


class TestVLambda:
    def test_v_equal_rates_first_order(self):
        tau = 1e-5
        g1, g2 = v_lambda_rates(ChannelKind.V, 1.0, 1.0, tau)
        assert g1 == pytest.approx(2 * tau, rel=1e-4)
        assert g2 == pytest.approx(g1)

    @pytest.mark.parametrize("kind", [ChannelKind.V, ChannelKind.LAMBDA])
    def test_completeness(self, kind):
        assert kraus_completeness(v_lambda_kraus(kind, 1.0, 2.0, 1e-2)) < 1e-12

    def test_lambda_vanishes_at_small_time(self):
        a0, a1, a2 = v_lambda_kraus(ChannelKind.LAMBDA, 1.0, 2.0, 1e-12)
        np.testing.assert_allclose(a0.matrix(), np.eye(3), atol=1e-5)
        assert a1.norm < 1e-5 and a2.norm < 1e-5

    def test_lambda_transitions(self):
        _, a1, a2 = v_lambda_kraus(ChannelKind.LAMBDA, 1.0, 2.0, 1e-2)
        assert a1.outputs == (-1, -1, 0)
        assert a2.outputs == (-1, -1, 1)
        assert a1.damping_weight == a2.damping_weight == 1

    def test_negative_rate(self):
        with pytest.raises(ParameterRangeError):
            v_lambda_kraus(ChannelKind.V, -1.0, 2.0, 1e-2)

    def test_spec_requires_three_levels(self):
        with pytest.raises(ParameterRangeError):
            ChannelSpec(ChannelKind.V, 4)


class TestChannelSpec:
    def test_parse_aliases(self):
        assert ChannelKind.parse("xi") is ChannelKind.CASCADE
        assert ChannelKind.parse("Lambda") is ChannelKind.LAMBDA
        with pytest.raises(ParameterRangeError):
            ChannelKind.parse("depolarizing")

    def test_parameter_name(self):
        assert ChannelSpec(ChannelKind.BOSONIC, 3).parameter_name == "gamma"
        assert ChannelSpec(ChannelKind.CASCADE, 3).parameter_name == "tau"

    def test_to_dict(self):
        spec = ChannelSpec(ChannelKind.CASCADE, 3, coefficients={(0, 1): 4.0})
        assert spec.to_dict() == {"kind": "Xi", "q": 3, "parameters": {}, "coefficients": {"01": 4.0}}


class TestEnumeration:
    def test_small_bosonic(self):
        ops = enumerate_error_ops(ChannelSpec(ChannelKind.BOSONIC, 3), 2, 1)
        assert [op.label for op in ops] == ["A0 x A0", "A0 x A1", "A1 x A0"]

    def test_lambda_two_sites(self):
        ops = enumerate_error_ops(ChannelSpec(ChannelKind.LAMBDA, 3), 2, 1)
        assert len(ops) == 5
        assert {op.label for op in ops} == {"A0 x A0", "A1 x A0", "A2 x A0", "A0 x A1", "A0 x A2"}

    def test_count_matches_brute_force(self):
        expected = sum(1 for k in product(range(3), repeat=10) if sum(k) <= 6)
        assert count_error_ops([0, 1, 2], 10, 6) == expected
        ops = enumerate_error_ops(ChannelSpec(ChannelKind.BOSONIC, 3), 10, 6)
        assert len(ops) == expected

    def test_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            enumerate_error_ops(ChannelSpec(ChannelKind.BOSONIC, 3), 10, 6, cap=100)
        assert info.value.estimate > 100
        assert info.value.exit_code == 3

    def test_orders_add_up(self):
        for op in enumerate_error_ops(ChannelSpec(ChannelKind.BOSONIC, 4), 3, 4):
            assert op.order_in_tau == pytest.approx(op.damping_weight / 2)

    def test_monomial_images(self):
        ops = enumerate_error_ops(ChannelSpec(ChannelKind.BOSONIC, 3), 3, 2, point=0.05)
        state = SparseState.from_terms(3, 3, [(QuditString.parse(w, 3), 3 ** -0.5) for w in ("000", "111", "222")])
        for op in ops:
            assert len(state.apply(op)) <= len(state)

    def test_vectorised_action_matches_scalar(self):
        ops = enumerate_error_ops(ChannelSpec(ChannelKind.CASCADE, 4), 3, 3, point=1e-2)
        words = np.array(list(product(range(4), repeat=3)))
        for op in ops[::7]:
            images, coeffs = op.act_on_words(words)
            for row, word in enumerate(words):
                scalar = op.act(tuple(word))
                if scalar is None:
                    assert coeffs[row] == 0
                else:
                    assert tuple(images[row]) == scalar[0]
                    assert coeffs[row] == pytest.approx(scalar[1])

    @pytest.mark.parametrize("kind", [ChannelKind.BOSONIC, ChannelKind.CASCADE, ChannelKind.LAMBDA])
    def test_norm_scales_with_order(self, kind):
        spec = ChannelSpec(kind, 3)
        grid = [1e-3, 3e-4, 1e-4, 3e-5]
        structure = enumerate_error_ops(spec, 2, 3)
        for op in structure:
            if op.order_in_tau == 0:
                continue
            norms = [op.rebind(spec.at(p)).norm for p in grid]
            fit = linregress(np.log(grid), np.log(norms))
            assert fit.slope == pytest.approx(op.order_in_tau, abs=0.1)
