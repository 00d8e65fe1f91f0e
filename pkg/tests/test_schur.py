import math

import numpy as np
import pytest

from app.schemas import Factor, FactorKind, Specialization, SpecializationPair, minus_side, plus_side
from core.exceptions import TruncationError


def geom(a: float) -> Factor:
    return Factor(kind=FactorKind.GEOM_POLE, param=a)


def exp(c: float) -> Factor:
    return Factor(kind=FactorKind.EXP, param=c)


def test_h_coeffs_single_pole(schur):
    np.testing.assert_allclose(schur.h_coeffs(plus_side(geom(0.5)), 5), 0.5 ** np.arange(6))


def test_h_coeffs_exponential(schur):
    c = 1.3
    expected = [c ** k / math.factorial(k) for k in range(7)]
    np.testing.assert_allclose(schur.h_coeffs(plus_side(exp(c)), 6), expected)


def test_h_coeffs_linear_zero(schur):
    s = plus_side(Factor(kind=FactorKind.LIN_ZERO, param=0.4))
    np.testing.assert_allclose(schur.h_coeffs(s, 3), [1.0, -0.4, 0.0, 0.0])


def test_skew_schur_two_variables(schur):
    # s_{21}(a, b) = a^2 b + a b^2
    a, b = 0.5, 0.3
    s = plus_side(geom(a), geom(b))
    assert schur.skew_schur((2, 1), (), s) == pytest.approx(a * a * b + a * b * b)


def test_skew_schur_single_variable_strips(schur):
    s = plus_side(geom(0.4))
    assert schur.skew_schur((3, 1), (1,), s) == pytest.approx(0.4 ** 3)
    assert schur.skew_schur((2, 2), (), s) == 0.0


def test_skew_schur_exponential_counts_tableaux(schur):
    # s_lambda(exp c) = c^{|lambda|} dim(lambda) / |lambda|!
    c = 0.7
    assert schur.skew_schur((2, 1), (), plus_side(exp(c))) == pytest.approx(c ** 3 * 2 / 6)


def test_skew_schur_requires_containment(schur):
    assert schur.skew_schur((2,), (3,), plus_side(geom(0.5))) == 0.0
    assert schur.skew_schur((2, 1), (2, 1), Specialization()) == 1.0


def test_transition_weight_one_sided(schur):
    pair = SpecializationPair(plus=plus_side(geom(0.3), geom(0.2)))
    assert schur.transition_weight((1,), (2, 1), pair) == pytest.approx(schur.skew_schur((2, 1), (1,), pair.plus))
    # a plus-only transition never shrinks the slice
    assert schur.transition_weight((2,), (1,), pair) == 0.0


def test_transition_weight_two_sided(schur):
    # sum over nu of s_{mu/nu}(b) s_{lam/nu}(a), mu = lam = (1)
    a, b = 0.3, 0.2
    pair = SpecializationPair(plus=plus_side(geom(a)), minus=minus_side(geom(b)))
    assert schur.transition_weight((1,), (1,), pair) == pytest.approx(a * b + 1.0)


def test_log_coeffs(schur):
    coeffs = schur.log_coeffs(plus_side(geom(0.5)), 4)
    assert coeffs[2] == pytest.approx(0.25 / 2)
    assert coeffs[-1] == 0.0
    assert coeffs[9] == 0.0


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (0.9, 0.3), (0.1, 0.99)])
def test_commutation_constant_geometric(schur, a, b):
    value = schur.commutation_constant(plus_side(geom(a)), minus_side(geom(b)))
    assert value == pytest.approx(1.0 / (1.0 - a * b), rel=1e-12)


def test_commutation_constant_exponential(schur):
    assert schur.commutation_constant(plus_side(exp(1.5)), minus_side(exp(0.4))) == pytest.approx(math.exp(0.6))


def test_commutation_constant_mixed(schur):
    # H(e^{c}, (1 - b/z)^{-1}) = e^{c b}
    assert schur.commutation_constant(plus_side(exp(0.8)), minus_side(geom(0.5))) == pytest.approx(math.exp(0.4))


def test_commutation_truncation_error(schur):
    with pytest.raises(TruncationError) as excinfo:
        schur.log_commutation(plus_side(geom(0.9)), minus_side(geom(0.9)), order=2)
    assert excinfo.value.tail_bound > 1e-3


def test_commutation_needs_orientations(schur):
    with pytest.raises(ValueError):
        schur.commutation_constant(minus_side(geom(0.5)), plus_side(geom(0.5)))
