"""
Horizontal-tile kernel of random plane partitions with weight q^{|pi|}.
"""

from __future__ import annotations

from typing import Sequence

from app.schemas import KernelValue, QuadratureSpec, TilePoint
from app.schemas.kernel_schemas import _double
from core.exceptions import ConfigurationError

from .base_kernel import BaseKernel


class PlaneKernel3D(BaseKernel):
    """K_3D on tile centers (t, h) via quantum dilogarithms"""

    kind = "3d"

    def __init__(self, q: float, quad: QuadratureSpec | None = None, **kwargs):
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        self.q = q
        super().__init__(quad, **kwargs)

    def parse_point(self, raw: Sequence[float]) -> TilePoint:
        t, h = raw
        return TilePoint(t=int(t), h2=_double(h))

    def is_suitable_for(self, point: TilePoint) -> bool:
        return isinstance(point, TilePoint)

    def _evaluate(self, u: TilePoint, v: TilePoint) -> KernelValue:
        return self.service.evaluate_3d(u, v, self.q, self.quad)
