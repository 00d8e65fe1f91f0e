"""
Schemas for the bulk asymptotics: rescaled positions and critical-point data.
"""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Classification(str, Enum):
    """Position of (tau, chi) relative to the bulk"""
    BELOW = "below"
    BULK = "bulk"
    ABOVE = "above"


class BulkPoint(BaseModel):
    """Rescaled position (tau, chi) = lim r (t, h)"""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(0.0, description="Rescaled time")
    chi: float = Field(0.0, description="Rescaled height")

    @field_validator("tau", "chi")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("Bulk coordinates must be finite")
        return v

    def reflected(self) -> "BulkPoint":
        """Representative with tau >= 0"""
        return self if self.tau >= 0 else BulkPoint(tau=-self.tau, chi=self.chi)


class CriticalData(BaseModel):
    """Critical points of the action and the derived bulk quantities"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: BulkPoint = Field(..., description="Where the data was computed")
    z_c: complex = Field(..., description="Critical point, upper half plane in the bulk")
    z_star: complex = Field(..., description="e^{-tau} z_c, or its degenerate value off the bulk")
    theta_star: float = Field(..., description="arg z_star", ge=0.0, le=math.pi)
    classification: Classification = Field(..., description="below, bulk or above")

    @property
    def rho(self) -> float:
        return self.theta_star / math.pi
