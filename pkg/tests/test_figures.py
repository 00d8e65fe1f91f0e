import pytest

from app.schemas import GridSpec, PlanePartition
from app.services.figure_service import FigureService


@pytest.fixture
def figures(asympt):
    return FigureService(asympt)


@pytest.mark.parametrize(
    "rows,box",
    [
        ([], (2, 3, 4)),
        ([[3, 2, 1], [1]], (2, 3, 4)),
        ([[4, 4, 4], [4, 4, 4]], (2, 3, 4)),
    ],
)
def test_lozenge_count_is_fixed_by_the_box(figures, rows, box):
    a, b, c = box
    faces = figures.faces(PlanePartition.model_validate(rows), box)
    assert len(faces) == a * b + b * c + c * a
    counts = [sum(1 for kind, _ in faces if kind == k) for k in range(3)]
    assert counts == [a * b, b * c, a * c]


def test_tiling_is_deterministic(figures):
    pi = PlanePartition.model_validate([[2, 1], [1]])
    first = figures.tiling(pi, (2, 2, 2))
    second = FigureService().tiling(pi, (2, 2, 2))
    assert first.startswith("<?xml")
    assert first == second


def test_density_levels_svg(figures):
    svg = figures.density_levels(GridSpec(tau_steps=5, chi_steps=5), samples=50)
    assert "<svg" in svg
    assert "Date" not in svg


def test_limit_shape_mesh_svg(figures, asympt):
    grid = GridSpec(tau_min=-1.0, tau_max=1.0, tau_steps=3, chi_min=-1.0, chi_max=1.0, chi_steps=3)
    rows = []
    for tau in (-1.0, 0.0, 1.0):
        for chi in (-1.0, 0.0, 1.0):
            x, y, z = asympt.limit_shape((tau, chi))
            rows.append({"x": x, "y": y, "z": z})
    assert "<svg" in figures.limit_shape_mesh(rows, grid)
