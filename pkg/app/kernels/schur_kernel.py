"""
Kernel of a general Schur process on Z x (Z + 1/2).
"""

from __future__ import annotations

from typing import Sequence

from app.schemas import KernelQuery, KernelValue, LatticePoint, QuadratureSpec, SchurProcessParams
from app.schemas.kernel_schemas import _double

from .base_kernel import BaseKernel


class SchurProcessKernel(BaseKernel):
    """Contour-integral kernel built from Phi(t, z) of arbitrary parameters"""

    kind = "schur"

    def __init__(self, params: SchurProcessParams, quad: QuadratureSpec | None = None, **kwargs):
        self.params = params
        super().__init__(quad, **kwargs)

    def parse_point(self, raw: Sequence[float]) -> LatticePoint:
        t, x = raw
        return LatticePoint(t=int(t), x2=_double(x))

    def is_suitable_for(self, point: LatticePoint) -> bool:
        return self.params.t_min <= point.t <= self.params.t_max

    def _evaluate(self, u: LatticePoint, v: LatticePoint) -> KernelValue:
        return self.service.evaluate_entry(self.params, KernelQuery(first=u, second=v), self.quad)
