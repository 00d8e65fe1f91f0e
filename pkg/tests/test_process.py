import math

import pytest
from scipy.special import zeta

from app.schemas import FactorKind, SliceSequence
from core.exceptions import ConfigurationError

MCMAHON = [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]


def test_plane_partition_counts(process):
    assert process.plane_partition_counts(10) == MCMAHON


def test_mq_params_layout(process):
    p = process.mq_params(0.3, M=3)
    assert (p.t_min, p.t_max) == (-3, 3)
    assert sorted(p.phi) == [-5, -3, -1, 1, 3, 5]
    assert p.phi[-3].plus.factors[0].param == pytest.approx(0.3 ** 1.5)
    assert p.phi[-3].minus.is_trivial
    assert p.phi[5].minus.factors[0].param == pytest.approx(0.3 ** 2.5)
    assert p.phi[5].plus.is_trivial


def test_mq_window_from_tolerance(process):
    p = process.mq_params(0.5)
    assert 0.5 ** p.t_max < 1e-14


def test_anisotropic_params_skip_infinite_exponents(process):
    p = process.anisotropic_params(0.5, lambda m: math.inf if m > 0 else -m, M=2)
    assert sorted(p.phi) == [-3, -1]


def test_mq_rejects_bad_q(process):
    with pytest.raises(ConfigurationError):
        process.mq_params(1.2)


def test_weight_is_q_to_the_volume(process, combin, sample_pi):
    q = 0.5
    p = process.mq_params(q, M=6)
    assert process.weight(combin.diagonal_slices(sample_pi), p) == pytest.approx(q ** 29, rel=1e-10)


def test_weight_of_empty_configuration(process):
    assert process.weight(SliceSequence(), process.mq_params(0.3, M=3)) == 1.0


def test_weight_rejects_slices_outside_window(process, combin, sample_pi):
    with pytest.raises(ConfigurationError):
        process.weight(combin.diagonal_slices(sample_pi), process.mq_params(0.5, M=2))


def test_weight_zero_for_broken_interlacing(process):
    p = process.mq_params(0.5, M=3)
    assert process.weight(SliceSequence.from_tuples(0, ((1,), (2,))), p) == 0.0


@pytest.mark.parametrize("q", [0.1, 0.3, 0.6])
def test_partition_function_matches_mcmahon(process, q):
    assert process.partition_function(process.mq_params(q)) == pytest.approx(process.mcmahon_product(q, 400), rel=1e-10)


def test_plancherel_partition_function(process):
    alpha = 2.5
    p = process.plancherel_params(alpha)
    assert p.phi[-1].plus.factors[0].kind == FactorKind.EXP
    assert process.partition_function(p) == pytest.approx(math.exp(alpha))


def test_plancherel_rejects_nonpositive_alpha(process):
    with pytest.raises(ConfigurationError):
        process.plancherel_params(0.0)


def test_marginal_weight_plancherel(process):
    # s_lambda(exp c)^2 with c = sqrt(alpha)
    alpha = 1.7
    p = process.plancherel_params(alpha)
    assert process.marginal_weight((2, 1), 0, p) == pytest.approx((alpha ** 1.5 * 2 / 6) ** 2)


def test_restrict_preserves_marginals(process):
    p = process.mq_params(0.4, M=3)
    r = process.restrict(p, [-1, 1])
    assert (r.t_min, r.t_max) == (-1, 2)
    for lam in [(), (1,), (2,), (1, 1), (2, 1), (3, 1, 1)]:
        assert process.marginal_weight(lam, 0, r) == pytest.approx(process.marginal_weight(lam, -1, p), rel=1e-12)
        assert process.marginal_weight(lam, 1, r) == pytest.approx(process.marginal_weight(lam, 1, p), rel=1e-12)


def test_restrict_merges_intervals(process):
    r = process.restrict(process.mq_params(0.4, M=3), [-1, 1])
    assert len(r.phi[-1].plus.factors) == 2
    assert len(r.phi[1].plus.factors) == 1
    assert len(r.phi[1].minus.factors) == 1
    assert len(r.phi[3].minus.factors) == 2


@pytest.mark.parametrize("times", [[1, 0], [0, 0], [-5, 0], [0, 4]])
def test_restrict_rejects_bad_times(process, times):
    with pytest.raises(ConfigurationError):
        process.restrict(process.mq_params(0.4, M=3), times)


def test_expected_volume_is_log_derivative(process):
    q, dq = 0.3, 1e-6
    log_z = lambda x: math.log(process.mcmahon_product(x, 400))  # noqa: E731
    derivative = (log_z(q + dq) - log_z(q - dq)) / (2 * dq)
    assert process.expected_volume(q) == pytest.approx(q * derivative, rel=1e-6)


def test_volume_variance_is_derivative_of_mean(process):
    q, dq = 0.3, 1e-6
    derivative = (process.expected_volume(q + dq) - process.expected_volume(q - dq)) / (2 * dq)
    assert process.volume_variance(q) == pytest.approx(q * derivative, rel=1e-6)


def test_volume_law_scaling(process):
    r = 0.01
    q = math.exp(-r)
    assert r ** 3 * process.expected_volume(q) == pytest.approx(2 * zeta(3), rel=2e-2)
    assert r ** 4 * process.volume_variance(q) == pytest.approx(6 * zeta(3), rel=3e-2)
