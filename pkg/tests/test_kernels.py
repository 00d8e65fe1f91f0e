import math

import pytest

from app.kernels import BulkKernel, KernelFactory, PlancherelKernel, PlaneKernel3D, SchurProcessKernel
from app.schemas import BulkPoint, RunConfig, Subcommand
from core.exceptions import ConfigurationError


@pytest.fixture
def factory():
    return KernelFactory()


def test_available_kernels(factory):
    assert set(factory.get_available_kernels()) == {"schur", "3d", "plancherel", "bulk"}


@pytest.mark.parametrize(
    "kwargs,cls",
    [
        ({"q": 0.3}, PlaneKernel3D),
        ({"alpha": 1.0}, PlancherelKernel),
        ({"bulk": BulkPoint()}, BulkKernel),
    ],
)
def test_auto_kind(factory, kwargs, cls):
    assert isinstance(factory.create_kernel(**kwargs), cls)


def test_schur_kernel_from_q(factory):
    kernel = factory.create_kernel("schur", q=0.3)
    assert isinstance(kernel, SchurProcessKernel)
    assert kernel.get_kernel_info()["kind"] == "schur"


def test_unknown_kind(factory):
    with pytest.raises(ValueError):
        factory.create_kernel("hexagon", q=0.3)


def test_missing_parameter(factory):
    with pytest.raises(ValueError):
        factory.create_kernel("3d")


def test_invalid_q():
    with pytest.raises(ConfigurationError):
        PlaneKernel3D(1.5)


def test_from_run_config(factory):
    cfg = RunConfig(subcommand=Subcommand.KERNEL, kind="bulk", bulk=(0.0, 0.0))
    kernel = factory.from_run_config(cfg)
    assert isinstance(kernel, BulkKernel)
    assert kernel.entry(kernel.parse_point([0, 0.5]), kernel.parse_point([0, 0.5])) == pytest.approx(1 / 3)


def test_schur_and_3d_kernels_agree(factory):
    schur = factory.create_kernel("schur", q=0.2)
    plane = factory.create_kernel("3d", q=0.2)
    # tile (t, h) = (1, 0) is the lattice point (1, 1/2)
    assert schur.entry(schur.parse_point([1, 0.5]), schur.parse_point([1, 0.5])) == pytest.approx(
        plane.entry(plane.parse_point([1, 0]), plane.parse_point([1, 0])), abs=1e-8
    )


def test_determinant_of_single_point_is_entry(factory):
    kernel = factory.create_kernel("3d", q=0.3)
    u = kernel.parse_point([0, 0.5])
    assert kernel.determinant([u]) == pytest.approx(kernel.entry(u, u))


def test_parity_violation_rejected_at_parse(factory):
    kernel = factory.create_kernel("3d", q=0.3)
    with pytest.raises(ValueError):
        kernel.parse_point([0, 1.0])


def test_evaluate_reports_errors(factory):
    kernel = factory.create_kernel("plancherel", alpha=1.0)
    value = kernel.evaluate(kernel.parse_point([1, 0.5]), kernel.parse_point([0, 0.5]))
    assert value.error is not None
    assert math.isnan(value.value)


def test_bulk_kernel_info(factory):
    info = factory.create_kernel("bulk", bulk=BulkPoint(tau=0.0, chi=0.0)).get_kernel_info()
    assert info["z_star"][0] == pytest.approx(0.5)
