"""
Specialization schemas: elementary analytic factors, one-sided
specializations and their logarithmic coefficients.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FactorKind(str, Enum):
    """Elementary factor shapes in the series variable u"""
    GEOM_POLE = "geom_pole"  # (1 - a u)^{-1}
    LIN_ZERO = "lin_zero"    # (1 - a u)
    EXP = "exp"              # e^{c u}


class Orientation(str, Enum):
    """Plus side is a series in z, minus side a series in 1/z"""
    PLUS = "plus"
    MINUS = "minus"


class Factor(BaseModel):
    """Single elementary factor of a specialization"""

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    kind: FactorKind = Field(..., description="Factor shape")
    param: float = Field(..., description="Parameter a (geom_pole, lin_zero) or c (exp)")

    @model_validator(mode="after")
    def validate_param(self) -> "Factor":
        if self.kind == FactorKind.GEOM_POLE and abs(self.param) >= 1.0:
            raise ValueError(f"geom_pole needs |a| < 1 to be analytic near the unit circle, got {self.param}")
        return self

    @property
    def radius(self) -> float:
        """Modulus of the singular point in u, zero for exponentials"""
        return 0.0 if self.kind == FactorKind.EXP else abs(self.param)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "param": self.param}


class Specialization(BaseModel):
    """Product of elementary factors on one side of the Wiener-Hopf factorization"""

    model_config = ConfigDict(frozen=True)

    orientation: Orientation = Field(Orientation.PLUS, description="Series in z (plus) or 1/z (minus)")
    factors: Tuple[Factor, ...] = Field(default=(), description="Elementary factors")

    @field_validator("factors", mode="before")
    @classmethod
    def coerce_factors(cls, v: Any) -> Any:
        if isinstance(v, list):
            return tuple(v)
        return v

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def times(self, other: "Specialization") -> "Specialization":
        """Product of two specializations of the same orientation"""
        if other.orientation != self.orientation:
            raise ValueError("Cannot multiply specializations of different orientation")
        return Specialization(orientation=self.orientation, factors=self.factors + other.factors)

    def strip_bound(self) -> int:
        """
        Number of geometric poles when no other factor is present, else -1.

        A product of k geometric poles is k variables set to the factor
        parameters, so skew Schur functions vanish unless every column of
        the skew shape has length at most k.
        """
        if self.factors and all(f.kind == FactorKind.GEOM_POLE for f in self.factors):
            return len(self.factors)
        return -1

    def to_json(self) -> List[Dict[str, Any]]:
        return [f.to_json() for f in self.factors]


def plus_side(*factors: Factor) -> Specialization:
    return Specialization(orientation=Orientation.PLUS, factors=tuple(factors))


def minus_side(*factors: Factor) -> Specialization:
    return Specialization(orientation=Orientation.MINUS, factors=tuple(factors))


class SpecializationPair(BaseModel):
    """phi[m] = phi^+[m] phi^-[m]"""

    model_config = ConfigDict(frozen=True)

    plus: Specialization = Field(default_factory=lambda: Specialization(orientation=Orientation.PLUS))
    minus: Specialization = Field(default_factory=lambda: Specialization(orientation=Orientation.MINUS))

    @model_validator(mode="after")
    def validate_orientations(self) -> "SpecializationPair":
        if self.plus.orientation != Orientation.PLUS or self.minus.orientation != Orientation.MINUS:
            raise ValueError("SpecializationPair needs a plus side and a minus side")
        return self

    @property
    def is_trivial(self) -> bool:
        return self.plus.is_trivial and self.minus.is_trivial

    def times(self, other: "SpecializationPair") -> "SpecializationPair":
        return SpecializationPair(plus=self.plus.times(other.plus), minus=self.minus.times(other.minus))

    def to_json(self) -> Dict[str, Any]:
        return {"plus": self.plus.to_json(), "minus": self.minus.to_json()}


TRIVIAL_PAIR = SpecializationPair()


class LogCoeffs(BaseModel):
    """
    Coefficients (log phi)_k of a one-sided specialization.

    Stored for k = 1..max_order; indexing with a signed k follows the
    orientation (k > 0 on the plus side, k < 0 on the minus side).
    """

    model_config = ConfigDict(frozen=True)

    orientation: Orientation = Field(..., description="Side the coefficients live on")
    max_order: int = Field(..., description="Truncation order K", ge=1)
    values: Tuple[float, ...] = Field(..., description="(log phi)_{+-k} for k = 1..K")

    @model_validator(mode="after")
    def validate_length(self) -> "LogCoeffs":
        if len(self.values) != self.max_order:
            raise ValueError(f"Expected {self.max_order} coefficients, got {len(self.values)}")
        return self

    def __getitem__(self, k: int) -> float:
        sign = 1 if self.orientation == Orientation.PLUS else -1
        if k * sign <= 0:
            return 0.0
        k = abs(k)
        return self.values[k - 1] if k <= self.max_order else 0.0
