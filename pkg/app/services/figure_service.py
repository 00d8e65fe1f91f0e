"""
Figure rendering with matplotlib: density level sets, limit-shape mesh and
lozenge tilings of sampled plane partitions, all as SVG text.
"""

from __future__ import annotations

import io
import logging
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

from app.schemas import GridSpec, PlanePartition  # noqa: E402
from app.services.asympt_service import AsymptService  # noqa: E402

logger = logging.getLogger(__name__)

# top, +x wall, +y wall
TILE_COLORS = ("#f2c14e", "#5b8e7d", "#3d5a80")


def _project(x: float, y: float, z: float) -> Tuple[float, float]:
    """(t, h) = (y - x, z - (x + y)/2): t horizontal, h vertical"""
    return y - x, z - (x + y) / 2


class FigureService:
    """
    Deterministic SVG figures: the same inputs always produce the same bytes.
    """

    def __init__(self, asympt: Optional[AsymptService] = None):
        """Initialize figure service"""
        self.asympt = asympt or AsymptService()
        plt.rcParams["svg.hashsalt"] = "schurlab"
        plt.rcParams["svg.fonttype"] = "none"
        logger.info("FigureService initialized")

    def _to_svg(self, fig) -> str:
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)
        return buffer.getvalue()

    def density_levels(self, grid: GridSpec, samples: int = 400) -> str:
        """
        Level sets theta* = k pi / 8, k = 0..8, of the horizontal-tile density.

        Args:
            grid: Plot window in (tau, chi)
            samples: Points per curve

        Returns:
            SVG document
        """
        taus = np.linspace(grid.tau_min, grid.tau_max, samples)
        fig, ax = plt.subplots(figsize=(6, 6))
        for k in range(9):
            chis = self.asympt.level_curve(k, taus)
            chis = np.where(np.isfinite(chis), chis, np.nan)
            style = "-" if k in (0, 8) else "--"
            ax.plot(taus, chis, style, color="black" if k in (0, 8) else "gray", linewidth=1.0, label=f"k={k}")
        ax.set_xlim(grid.tau_min, grid.tau_max)
        ax.set_ylim(grid.chi_min, grid.chi_max)
        ax.set_xlabel("tau")
        ax.set_ylabel("chi")
        ax.set_title("Level sets of the horizontal-tile density")
        ax.set_aspect("equal")
        return self._to_svg(fig)

    def limit_shape_mesh(self, rows: Sequence[dict], grid: GridSpec) -> str:
        """
        Wireframe of the limit-shape mesh in (x, y, z).

        Args:
            rows: Mesh rows with keys x, y, z in grid order (tau outer, chi inner)
            grid: Grid the mesh was computed on

        Returns:
            SVG document
        """
        shape = (grid.tau_steps, grid.chi_steps)
        xs = np.array([r["x"] for r in rows], dtype=float).reshape(shape)
        ys = np.array([r["y"] for r in rows], dtype=float).reshape(shape)
        zs = np.array([r["z"] for r in rows], dtype=float).reshape(shape)
        fig = plt.figure(figsize=(6, 6))
        ax = fig.add_subplot(projection="3d")
        ax.plot_wireframe(xs, ys, zs, linewidth=0.5, color="black")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_zlabel("z")
        ax.view_init(elev=35.26, azim=45)
        return self._to_svg(fig)

    def faces(self, pi: PlanePartition, box: Tuple[int, int, int]) -> List[Tuple[int, List[Tuple[float, float]]]]:
        """
        Projected visible faces of the stacked cubes and the box walls.

        Returns:
            (orientation, polygon) pairs; orientation indexes ``TILE_COLORS``
        """
        a, b, c = box
        faces: List[Tuple[int, List[Tuple[float, float]]]] = []
        for i in range(1, a + 1):
            for j in range(1, b + 1):
                z = pi.entry(i, j)
                corners = [(i - 1, j - 1), (i, j - 1), (i, j), (i - 1, j)]
                faces.append((0, [_project(x, y, z) for x, y in corners]))
        # walls with normal +x: between row i and row i+1, row 0 is the back wall
        for i in range(0, a + 1):
            for j in range(1, b + 1):
                top = c if i == 0 else pi.entry(i, j)
                bottom = pi.entry(i + 1, j)
                for z in range(bottom, top):
                    square = [(i, j - 1, z), (i, j, z), (i, j, z + 1), (i, j - 1, z + 1)]
                    faces.append((1, [_project(*p) for p in square]))
        for j in range(0, b + 1):
            for i in range(1, a + 1):
                top = c if j == 0 else pi.entry(i, j)
                bottom = pi.entry(i, j + 1)
                for z in range(bottom, top):
                    square = [(i - 1, j, z), (i, j, z), (i, j, z + 1), (i - 1, j, z + 1)]
                    faces.append((2, [_project(*p) for p in square]))
        return faces

    def tiling(self, pi: PlanePartition, box: Tuple[int, int, int]) -> str:
        """
        Lozenge tiling of the a x b x c hexagon given by a plane partition.

        Args:
            pi: Plane partition inside the box
            box: Box dimensions

        Returns:
            SVG document, tiles colored by orientation
        """
        faces = self.faces(pi, box)
        fig, ax = plt.subplots(figsize=(8, 8))
        collection = PolyCollection(
            [poly for _, poly in faces],
            facecolors=[TILE_COLORS[kind] for kind, _ in faces],
            edgecolors="black",
            linewidths=0.2,
        )
        ax.add_collection(collection)
        points = np.array([p for _, poly in faces for p in poly])
        ax.set_xlim(points[:, 0].min() - 0.5, points[:, 0].max() + 0.5)
        ax.set_ylim(points[:, 1].min() - 0.5, points[:, 1].max() + 0.5)
        ax.set_aspect("equal")
        ax.axis("off")
        logger.info(f"Rendered tiling with {len(faces)} lozenges")
        return self._to_svg(fig)
