"""
Kernel evaluation schemas: contour discretization and kernel queries.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.config import config

from .combin_schemas import LatticePoint, TilePoint


class KernelKind(str, Enum):
    """Kernels the factory knows how to build"""
    SCHUR = "schur"
    THREE_D = "3d"
    PLANCHEREL = "plancherel"
    BULK = "bulk"


class QuadratureSpec(BaseModel):
    """Periodic trapezoid discretization of the two circles |z| = 1 +- epsilon"""

    model_config = ConfigDict(frozen=True)

    nodes: int = Field(default_factory=lambda: config.default_nodes, description="Initial nodes per circle", ge=64)
    epsilon: float = Field(default_factory=lambda: config.default_epsilon, description="Radial separation", gt=0.0, lt=0.5)
    tol: float = Field(default_factory=lambda: config.default_quad_tol, description="Target accuracy", gt=0.0)
    max_doublings: int = Field(default_factory=lambda: config.max_doublings, description="Node doublings allowed", ge=0)

    @field_validator("nodes")
    @classmethod
    def validate_power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"nodes must be a power of two, got {v}")
        return v


class KernelQuery(BaseModel):
    """Pair of lattice points (t1, x1), (t2, x2) of the Schur process"""

    model_config = ConfigDict(frozen=True)

    first: LatticePoint = Field(..., description="Row point")
    second: LatticePoint = Field(..., description="Column point")

    @classmethod
    def from_tiles(cls, a: TilePoint, b: TilePoint) -> "KernelQuery":
        return cls(first=a.to_lattice(), second=b.to_lattice())

    @classmethod
    def from_halves(cls, t1: int, x1: float, t2: int, x2: float) -> "KernelQuery":
        """Build from half-integer positions given as floats"""
        return cls(
            first=LatticePoint(t=t1, x2=_double(x1)),
            second=LatticePoint(t=t2, x2=_double(x2)),
        )

    def to_json(self) -> Dict[str, Any]:
        return {"first": self.first.to_json(), "second": self.second.to_json()}


class KernelValue(BaseModel):
    """Kernel entry with its quadrature diagnostics"""

    model_config = ConfigDict(validate_assignment=True)

    query: Dict[str, Any] = Field(..., description="Echo of the query")
    value: float = Field(..., description="Real part of the kernel entry")
    nodes_used: int = Field(..., description="Nodes per circle at convergence", ge=0)
    est_error: float = Field(..., description="Change under the last node doubling", ge=0.0)
    imag_part: float = Field(0.0, description="Discarded imaginary part")
    error: Optional[str] = Field(None, description="Error message if evaluation failed")


def _double(x: float) -> int:
    x2 = round(2 * x)
    if abs(2 * x - x2) > 1e-9:
        raise ValueError(f"{x} is not a half-integer")
    return int(x2)
