"""
Schur process parameter schemas and the brute-force ensemble container.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from .schur_schemas import SpecializationPair, TRIVIAL_PAIR


class SchurProcessParams(BaseModel):
    """
    Parameters phi[m] of a Schur process.

    ``phi`` is keyed by the doubled half-integer time ``m2 = 2m``. Slices
    lambda(t) live at integer times strictly inside ``[t_min, t_max]`` and
    are empty at and beyond the window ends.
    """

    model_config = ConfigDict(frozen=True, validate_assignment=True)

    t_min: int = Field(..., description="Left end of the time window")
    t_max: int = Field(..., description="Right end of the time window")
    phi: Dict[int, SpecializationPair] = Field(default_factory=dict, description="phi[m] keyed by 2m")
    label: str = Field("custom", description="Human-readable origin of the parameters")
    q: Optional[float] = Field(None, description="Underlying q when the parameters come from a q-family", gt=0.0, lt=1.0)

    @field_validator("phi")
    @classmethod
    def drop_trivial(cls, v: Dict[int, SpecializationPair]) -> Dict[int, SpecializationPair]:
        return {m2: pair for m2, pair in sorted(v.items()) if not pair.is_trivial}

    @model_validator(mode="after")
    def validate_window(self) -> "SchurProcessParams":
        if self.t_max <= self.t_min:
            raise ValueError(f"Empty window [{self.t_min}, {self.t_max}]")
        for m2 in self.phi:
            if m2 % 2 == 0:
                raise ValueError(f"phi keys must be doubled half-integers, got {m2}")
            if not 2 * self.t_min < m2 < 2 * self.t_max:
                raise ValueError(f"phi[{m2 / 2}] lies outside the window [{self.t_min}, {self.t_max}]")
        return self

    def pair(self, m2: int) -> SpecializationPair:
        return self.phi.get(m2, TRIVIAL_PAIR)

    @property
    def half_times(self) -> List[int]:
        """All doubled half-integer times inside the window"""
        return list(range(2 * self.t_min + 1, 2 * self.t_max, 2))

    @property
    def slice_times(self) -> List[int]:
        """Integer times that may carry a nonempty slice"""
        return list(range(self.t_min + 1, self.t_max))

    def to_json(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "window": [self.t_min, self.t_max],
            "q": self.q,
            "phi": {str(m2 / 2): pair.to_json() for m2, pair in self.phi.items()},
        }


class BoxedEnsemble(BaseModel):
    """
    Brute-force ensemble: every slice sequence with total size up to the
    cutoff, its unnormalized weight and its total size.

    Configurations are tuples of slices for consecutive times starting at
    ``first_time``; each slice is a tuple of parts.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: SchurProcessParams = Field(..., description="Process the ensemble was drawn from")
    volume_cutoff: int = Field(..., description="Largest total size enumerated", ge=0)
    first_time: int = Field(..., description="Time of the first stored slice")
    configurations: List[Tuple[Tuple[int, ...], ...]] = Field(default_factory=list, description="Slice tuples")
    weights: Any = Field(..., description="numpy array of unnormalized weights")
    volumes: Any = Field(..., description="numpy array of total sizes")
    tail_bound: float = Field(0.0, description="Estimated weight beyond the cutoff relative to the total", ge=0.0)

    _occupancy: Dict[Tuple[int, int], np.ndarray] = PrivateAttr(default_factory=dict)

    @property
    def normalization(self) -> float:
        return float(np.sum(self.weights))

    @property
    def size(self) -> int:
        return len(self.configurations)

    def counts_by_volume(self) -> List[int]:
        """Number of configurations with nonzero weight per total size"""
        nonzero = np.asarray(self.volumes)[np.asarray(self.weights) != 0]
        return np.bincount(nonzero, minlength=self.volume_cutoff + 1).tolist()

    def slice_at(self, index: int, t: int) -> Tuple[int, ...]:
        k = t - self.first_time
        config = self.configurations[index]
        return config[k] if 0 <= k < len(config) else ()

    def occupancy(self, t: int, x2: int) -> np.ndarray:
        """Boolean mask of configurations whose point field contains (t, x2/2)"""
        key = (t, x2)
        if key not in self._occupancy:
            k = t - self.first_time
            mask = np.empty(len(self.configurations), dtype=bool)
            for idx, config in enumerate(self.configurations):
                lam = config[k] if 0 <= k < len(config) else ()
                mask[idx] = slice_contains(lam, x2)
            self._occupancy[key] = mask
        return self._occupancy[key]


def slice_contains(lam: Tuple[int, ...], x2: int) -> bool:
    """Whether lambda_i - i + 1/2 = x2/2 for some i >= 1"""
    length = len(lam)
    if x2 <= -2 * length - 1:
        return True
    # 2(lambda_i - i) + 1 = x2
    for i, part in enumerate(lam, start=1):
        value = 2 * (part - i) + 1
        if value == x2:
            return True
        if value < x2:
            return False
    return False
