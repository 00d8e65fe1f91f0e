"""
Limiting incomplete beta kernel around a bulk point.
"""

from __future__ import annotations

from typing import Sequence

from app.schemas import BulkPoint, KernelValue, TilePoint
from app.schemas.kernel_schemas import _double
from app.services.asympt_service import AsymptService

from .base_kernel import BaseKernel


class BulkKernel(BaseKernel):
    """B_+-(dt, dh + dt/2; z*) on tile offsets around (tau, chi)"""

    kind = "bulk"

    def __init__(self, point: BulkPoint, asympt: AsymptService | None = None, **kwargs):
        self.point = point
        self.asympt = asympt or AsymptService()
        self.z_star = self.asympt.critical_points(point).z_star
        super().__init__(**kwargs)

    def parse_point(self, raw: Sequence[float]) -> TilePoint:
        t, h = raw
        return TilePoint(t=int(t), h2=_double(h))

    def is_suitable_for(self, point: TilePoint) -> bool:
        return isinstance(point, TilePoint)

    def _evaluate(self, u: TilePoint, v: TilePoint) -> KernelValue:
        dt = u.t - v.t
        # dh + dt/2, doubled, is even by tile parity
        l = (u.h2 - v.h2 + dt) // 2
        value = self.asympt.incomplete_beta(dt, l, self.z_star, "+" if dt >= 0 else "-")
        return KernelValue(
            query={"first": u.to_json(), "second": v.to_json()},
            value=value,
            nodes_used=0,
            est_error=0.0,
        )

    def get_kernel_info(self) -> dict:
        info = super().get_kernel_info()
        info["bulk_point"] = self.point.model_dump()
        info["z_star"] = [self.z_star.real, self.z_star.imag]
        return info
