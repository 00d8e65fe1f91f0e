"""
Combinatorial domain types: partitions, plane partitions, slice sequences
and the two point-field encodings.

Half-integer coordinates are stored doubled (``x2 = 2x``) so that all
comparisons are exact integer comparisons.
"""

from __future__ import annotations

from typing import Any, Dict, FrozenSet, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Partition(BaseModel):
    """Weakly decreasing finite sequence of positive integers"""

    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...] = Field(default=(), description="Parts, trailing zeros dropped")

    @model_validator(mode="before")
    @classmethod
    def accept_sequences(cls, data: Any) -> Any:
        """Allow ``Partition.model_validate([3, 1])``"""
        if isinstance(data, (list, tuple)):
            return {"parts": tuple(data)}
        return data

    @field_validator("parts")
    @classmethod
    def validate_parts(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        """Strip trailing zeros and check monotonicity"""
        parts = list(v)
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"Parts must be weakly decreasing, got {tuple(v)}")
        if any(p < 0 for p in parts):
            raise ValueError(f"Parts must be nonnegative, got {tuple(v)}")
        return tuple(parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """1-based part access, zero beyond the length"""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def to_json(self) -> List[int]:
        return list(self.parts)


EMPTY_PARTITION = Partition()


class PlanePartition(BaseModel):
    """2D array of nonnegative integers, nonincreasing along rows and columns"""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[Tuple[int, ...], ...] = Field(default=(), description="Rows pi_{i,.}, each a partition")

    @model_validator(mode="before")
    @classmethod
    def accept_arrays(cls, data: Any) -> Any:
        """Allow ``PlanePartition.model_validate([[2, 1], [1]])``"""
        if isinstance(data, (list, tuple)):
            return {"rows": tuple(tuple(r) for r in data)}
        return data

    @field_validator("rows")
    @classmethod
    def validate_rows(cls, v: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, ...], ...]:
        """Trim zeros and check both monotonicity directions"""
        rows = [Partition(parts=tuple(r)).parts for r in v]
        while rows and not rows[-1]:
            rows.pop()
        for i in range(1, len(rows)):
            upper, lower = rows[i - 1], rows[i]
            if len(lower) > len(upper) or any(lower[j] > upper[j] for j in range(len(lower))):
                raise ValueError(f"Columns must be nonincreasing (row {i + 1})")
        return tuple(rows)

    def entry(self, i: int, j: int) -> int:
        """1-based entry pi_{ij}, zero outside the support"""
        if 1 <= i <= len(self.rows) and 1 <= j <= len(self.rows[i - 1]):
            return self.rows[i - 1][j - 1]
        return 0

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def max_part(self) -> int:
        return self.rows[0][0] if self.rows else 0

    def to_json(self) -> List[List[int]]:
        return [list(r) for r in self.rows]


class SliceSequence(BaseModel):
    """Partitions indexed by integer time, empty outside a finite window"""

    model_config = ConfigDict(frozen=True)

    slices: Dict[int, Partition] = Field(default_factory=dict, description="Nonempty slices by time")

    @field_validator("slices")
    @classmethod
    def drop_empty(cls, v: Dict[int, Partition]) -> Dict[int, Partition]:
        return {t: lam for t, lam in sorted(v.items()) if lam.parts}

    @classmethod
    def from_tuples(cls, start: int, parts: Tuple[Tuple[int, ...], ...]) -> "SliceSequence":
        """Build from consecutive slices beginning at time ``start``"""
        return cls(slices={start + k: Partition(parts=p) for k, p in enumerate(parts) if p})

    def get(self, t: int) -> Partition:
        return self.slices.get(t, EMPTY_PARTITION)

    @property
    def support(self) -> Tuple[int, int]:
        """Smallest and largest time with a nonempty slice, (0, -1) if none"""
        if not self.slices:
            return 0, -1
        times = list(self.slices)
        return min(times), max(times)

    @property
    def total_size(self) -> int:
        return sum(lam.size for lam in self.slices.values())


class LatticePoint(BaseModel):
    """Point (t, x) of Z x (Z + 1/2), stored as (t, 2x)"""

    model_config = ConfigDict(frozen=True)

    t: int = Field(..., description="Integer time")
    x2: int = Field(..., description="Twice the half-integer position")

    @field_validator("x2")
    @classmethod
    def validate_half_integer(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError(f"x must be a half-integer, got x2={v}")
        return v

    @property
    def x(self) -> float:
        return self.x2 / 2

    def to_tile(self) -> "TilePoint":
        return TilePoint(t=self.t, h2=self.x2 - abs(self.t))

    def to_json(self) -> List[int]:
        return [self.t, self.x2]


class TilePoint(BaseModel):
    """Center (t, h) of a horizontal lozenge, stored as (t, 2h)"""

    model_config = ConfigDict(frozen=True)

    t: int = Field(..., description="Integer time")
    h2: int = Field(..., description="Twice the height")

    @model_validator(mode="after")
    def validate_parity(self) -> "TilePoint":
        if (self.h2 + self.t + 1) % 2 != 0:
            raise ValueError(f"h + (t+1)/2 must be an integer, got t={self.t}, h={self.h2 / 2}")
        return self

    @property
    def h(self) -> float:
        return self.h2 / 2

    def to_lattice(self) -> LatticePoint:
        return LatticePoint(t=self.t, x2=self.h2 + abs(self.t))

    def to_json(self) -> List[int]:
        return [self.t, self.h2]


class PointConfig(BaseModel):
    """
    Point configuration S({lambda(t)}) on Z x (Z + 1/2).

    ``points`` holds the explicit points above each column's tail; every
    ``x2 <= tail[t]`` is occupied as well. Columns missing from ``tail``
    are in the vacuum state with tail top at x = -1/2.
    """

    model_config = ConfigDict(frozen=True)

    points: FrozenSet[Tuple[int, int]] = Field(default_factory=frozenset, description="Explicit (t, 2x) points")
    tail: Dict[int, int] = Field(default_factory=dict, description="Doubled top of the occupied tail per column")

    def tail_top(self, t: int) -> int:
        return self.tail.get(t, -1)

    def contains(self, t: int, x2: int) -> bool:
        return x2 <= self.tail_top(t) or (t, x2) in self.points

    def to_json(self) -> Dict[str, Any]:
        return {
            "points": sorted([t, x2] for t, x2 in self.points),
            "tail": {str(t): top for t, top in sorted(self.tail.items())},
        }
