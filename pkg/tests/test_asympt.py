import cmath
import math

import numpy as np
import pytest

from app.schemas import BulkPoint, Classification, TilePoint
from app.services.asympt_service import AsymptService
from app.services.verification_service import BETA_POINTS
from core.exceptions import SingularEndpointError

ORIGIN = BulkPoint(tau=0.0, chi=0.0)
MAHLER_F = 0.6461


def test_dilog_at_one(asympt):
    assert asympt.dilog(1.0) == pytest.approx(math.pi ** 2 / 6)


def test_dilog_on_cut_warns(asympt, caplog):
    with caplog.at_level("WARNING"):
        asympt.dilog(2.0)
    assert "branch cut" in caplog.text


def test_bulk_boundaries_at_zero(asympt):
    lower, upper = asympt.bulk_boundaries(0.0)
    assert lower == pytest.approx(-2 * math.log(2))
    assert upper == math.inf


@pytest.mark.parametrize(
    "tau,chi,expected",
    [
        (0.0, 0.0, Classification.BULK),
        (0.0, -2.0, Classification.BELOW),
        (4.0, 3.0, Classification.ABOVE),
        (-1.0, 0.0, Classification.BULK),
    ],
)
def test_classify(asympt, tau, chi, expected):
    assert asympt.classify(BulkPoint(tau=tau, chi=chi)) == expected


def test_critical_point_at_origin(asympt):
    data = asympt.critical_points(ORIGIN)
    assert data.z_c == pytest.approx(cmath.exp(1j * math.pi / 3))
    assert data.theta_star == pytest.approx(math.pi / 3)
    assert data.rho == pytest.approx(1 / 3)


@pytest.mark.parametrize("tau,chi", [(0.3, -0.2), (1.0, -0.5), (-0.7, 0.1)])
def test_critical_point_solves_saddle_equation(asympt, tau, chi):
    b = BulkPoint(tau=tau, chi=chi)
    z = asympt.critical_points(b).z_c
    assert z.imag > 0
    assert cmath.exp(asympt.action_derivative(z, b)) == pytest.approx(1.0, abs=1e-12)


def test_density_off_the_bulk(asympt):
    assert asympt.theta_density(BulkPoint(tau=0.0, chi=-3.0)) == (math.pi, 1.0)
    assert asympt.theta_density(BulkPoint(tau=4.0, chi=3.0)) == (0.0, 0.0)


def test_density_symmetric_in_tau(asympt):
    assert asympt.theta_density(BulkPoint(tau=-0.8, chi=0.2)) == asympt.theta_density(BulkPoint(tau=0.8, chi=0.2))


@pytest.mark.parametrize("k", [1, 2, 4, 6, 7])
def test_level_curves(asympt, k):
    taus = [0.0, 0.5, 1.5]
    chis = asympt.level_curve(k, taus)
    for tau, chi in zip(taus, chis):
        theta, _ = asympt.theta_density(BulkPoint(tau=tau, chi=float(chi)))
        assert theta == pytest.approx(k * math.pi / 8, abs=1e-10)


def test_level_curve_index_checked(asympt):
    with pytest.raises(ValueError):
        asympt.level_curve(9, [0.0])


def test_lattice_point_parity(asympt):
    tile = asympt.lattice_point(BulkPoint(tau=0.31, chi=-0.52), 0.1)
    assert isinstance(tile, TilePoint)
    assert tile.t == 3
    assert abs(tile.h - (-5.2)) <= 0.5


@pytest.mark.parametrize("l", [1, 2, 5])
def test_equal_time_kernel_is_sine_kernel(asympt, l):
    z_star = asympt.critical_points(ORIGIN).z_star
    assert asympt.incomplete_beta(0, l, z_star, "+") == pytest.approx(asympt.sine_kernel(l, math.pi / 3), abs=1e-12)


def test_one_point_bulk_correlation_is_density(asympt):
    b = BulkPoint(tau=0.4, chi=-0.3)
    assert asympt.bulk_correlation([(0, 0.5)], b) == pytest.approx(asympt.theta_density(b)[1], abs=1e-12)


def test_bulk_correlation_of_two_tiles(asympt):
    rho = 1 / 3
    kernel = asympt.sine_kernel(1, math.pi / 3)
    value = asympt.bulk_correlation([(0, 0.5), (0, 1.5)], ORIGIN)
    assert value == pytest.approx(rho * rho - kernel * kernel, abs=1e-12)


def test_bulk_correlation_rejects_bad_parity(asympt):
    with pytest.raises(ValueError):
        asympt.bulk_correlation([(0, 0.5), (1, 0.5)], ORIGIN)


def test_incomplete_beta_singular_endpoint(asympt):
    with pytest.raises(SingularEndpointError):
        asympt.incomplete_beta(-1, 0, cmath.exp(0.5j), "+")


def test_incomplete_beta_sign_checked(asympt):
    with pytest.raises(ValueError):
        asympt.incomplete_beta(0, 0, cmath.exp(0.5j), "x")


@pytest.mark.parametrize("tau,chi", BETA_POINTS)
@pytest.mark.parametrize("k,l", [(0, 0), (0, 1), (1, 1), (2, 1), (-1, 0), (-2, -1)])
def test_double_integral_matches_incomplete_beta(asympt, tau, chi, k, l):
    b = BulkPoint(tau=tau, chi=chi)
    z_star = asympt.critical_points(b).z_star
    expected = asympt.incomplete_beta(k, l, z_star, "+" if k >= 0 else "-")
    assert asympt.beta_double_integral(k, l, b) == pytest.approx(expected, abs=1e-8)


def test_double_integral_torus_method_runs(asympt):
    value = asympt.beta_double_integral(1, 1, BulkPoint(tau=0.5, chi=0.2), method="torus", nodes=64)
    assert math.isfinite(value)
    with pytest.raises(ValueError):
        asympt.beta_double_integral(1, 1, ORIGIN, method="simpson")


def test_limit_shape_at_origin(asympt):
    x, y, z = asympt.limit_shape(ORIGIN)
    assert z == pytest.approx(MAHLER_F, abs=1e-3)
    assert x == pytest.approx(z)
    assert y == pytest.approx(z)


def test_ck_parametrization_at_equal_weights(asympt):
    np.testing.assert_allclose(asympt.ck_parametrization(1.0, 1.0, 1.0), [MAHLER_F] * 3, atol=1e-3)


@pytest.fixture(scope="module")
def random_bulk_points():
    return AsymptService().sample_bulk_points(10, seed=11)


def test_sampled_points_lie_in_the_bulk(asympt, random_bulk_points):
    assert len(random_bulk_points) == 10
    assert all(asympt.classify(b) == Classification.BULK for b in random_bulk_points)
    assert random_bulk_points == asympt.sample_bulk_points(10, seed=11)


def test_limit_shape_matches_ck_parametrization(asympt, random_bulk_points):
    for b in random_bulk_points:
        np.testing.assert_allclose(
            asympt.limit_shape(b), asympt.ck_parametrization(*asympt.ck_weights(b)), atol=1e-3, err_msg=str(b)
        )


def test_limit_shape_permutation_symmetry(asympt):
    b = BulkPoint(tau=0.4, chi=-0.2)
    x, y, z = asympt.limit_shape(b)
    np.testing.assert_allclose(asympt.limit_shape(asympt.permuted_bulk_point(b)), (y, z, x), atol=1e-8)


@pytest.mark.slow
def test_limit_shape_mesh_is_threefold_symmetric(asympt):
    taus = np.linspace(-2.0, 2.0, 9)
    chis = np.linspace(-1.5, 1.5, 9)
    nodes = [BulkPoint(tau=float(t), chi=float(c)) for t in taus for c in chis]
    bulk = [b for b in nodes if asympt.classify(b) == Classification.BULK]
    assert len(bulk) > 20
    assert max(asympt.symmetry_defect(b) for b in bulk) <= 1e-3


def test_height_from_density_matches_limit_shape(asympt, random_bulk_points):
    for b in random_bulk_points[:5]:
        assert asympt.limit_shape(b)[2] == pytest.approx(asympt.height_from_density(b), abs=1e-8)


def test_height_vanishes_below_the_bulk(asympt):
    lower, _ = asympt.bulk_boundaries(0.5)
    below = BulkPoint(tau=0.5, chi=lower - 0.1)
    assert asympt.height_from_density(below) == 0.0
    assert asympt.limit_shape(below)[2] == 0.0
    first = asympt.height_from_density(BulkPoint(tau=0.5, chi=-0.5))
    second = asympt.height_from_density(BulkPoint(tau=0.5, chi=0.5))
    assert 0.0 < first < second


@pytest.mark.parametrize("tau", [-2.5, -1.0, 0.3, 1.7])
def test_outer_level_sets_are_the_bulk_boundaries(asympt, tau):
    lower, upper = asympt.bulk_boundaries(tau)
    assert asympt.level_curve(0, [tau])[0] == pytest.approx(upper, abs=1e-12)
    assert asympt.level_curve(8, [tau])[0] == pytest.approx(lower, abs=1e-12)


def test_density_support_is_the_bulk_region(asympt):
    """0 < theta* < pi exactly between the boundaries, sampled on a grid"""
    for tau in np.linspace(-3.0, 3.0, 25):
        lower, upper = asympt.bulk_boundaries(tau)
        for chi in np.linspace(-4.0, 2.0, 25):
            theta, _ = asympt.theta_density(BulkPoint(tau=float(tau), chi=float(chi)))
            assert (0.0 < theta < math.pi) == (lower < chi < upper), (tau, chi, theta)

class TestPlancherelLimit:
    def test_theta(self, asympt):
        assert asympt.planch_theta(0.0) == pytest.approx(math.pi / 2)
        assert asympt.planch_theta(2.0) == 0.0

    def test_out_of_range(self, asympt):
        with pytest.raises(ValueError):
            asympt.planch_theta(2.5)

    def test_kernel_limit_diagonal(self, asympt):
        assert asympt.planch_kernel_limit(0, 1.0) == pytest.approx(1 / 3)
