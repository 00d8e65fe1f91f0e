"""
Poissonized Plancherel kernel at t = 0.
"""

from __future__ import annotations

from typing import Sequence

from app.schemas import KernelValue, LatticePoint, QuadratureSpec
from app.schemas.kernel_schemas import _double
from core.exceptions import ConfigurationError

from .base_kernel import BaseKernel


class PlancherelKernel(BaseKernel):
    """K_Planch(x, y) on half-integers; the time coordinate must be 0"""

    kind = "plancherel"

    def __init__(self, alpha: float, quad: QuadratureSpec | None = None, **kwargs):
        if alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        self.alpha = alpha
        super().__init__(quad, **kwargs)

    def parse_point(self, raw: Sequence[float]) -> LatticePoint:
        t, x = raw
        return LatticePoint(t=int(t), x2=_double(x))

    def is_suitable_for(self, point: LatticePoint) -> bool:
        return point.t == 0

    def _evaluate(self, u: LatticePoint, v: LatticePoint) -> KernelValue:
        if not (self.is_suitable_for(u) and self.is_suitable_for(v)):
            raise ConfigurationError("the Plancherel kernel lives at t = 0")
        return self.service.evaluate_planch(u.x2, v.x2, self.alpha, self.quad)
