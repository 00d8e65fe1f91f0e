"""
Run configuration and result schemas for the command-line front end.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Subcommand(str, Enum):
    """CLI subcommands"""
    VERIFY = "verify"
    KERNEL = "kernel"
    DENSITY = "density"
    LIMIT_SHAPE = "limit-shape"
    SAMPLE = "sample"


class OutputFormat(str, Enum):
    """Enumeration for export formats"""
    JSON = "json"
    CSV = "csv"
    SVG = "svg"


class GridSpec(BaseModel):
    """Rectangular (tau, chi) grid, parsed from ``tmin:tmax:n,cmin:cmax:m``"""

    model_config = ConfigDict(frozen=True)

    tau_min: float = Field(-3.0, description="Smallest tau")
    tau_max: float = Field(3.0, description="Largest tau")
    tau_steps: int = Field(41, description="Grid points in tau", ge=2)
    chi_min: float = Field(-3.0, description="Smallest chi")
    chi_max: float = Field(3.0, description="Largest chi")
    chi_steps: int = Field(41, description="Grid points in chi", ge=2)

    @model_validator(mode="after")
    def validate_ranges(self) -> "GridSpec":
        if not (self.tau_min < self.tau_max and self.chi_min < self.chi_max):
            raise ValueError("Grid ranges must be increasing")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``tmin:tmax:n,cmin:cmax:m``"""
        try:
            tau_part, chi_part = text.split(",")
            t0, t1, tn = tau_part.split(":")
            c0, c1, cn = chi_part.split(":")
            return cls(
                tau_min=float(t0), tau_max=float(t1), tau_steps=int(tn),
                chi_min=float(c0), chi_max=float(c1), chi_steps=int(cn),
            )
        except ValueError as e:
            raise ValueError(f"Invalid grid '{text}': expected tmin:tmax:n,cmin:cmax:m ({e})") from e


class RunConfig(BaseModel):
    """Validated configuration of one CLI run"""

    model_config = ConfigDict(validate_assignment=True, use_enum_values=False)

    subcommand: Subcommand = Field(..., description="Exactly one subcommand")
    q: Optional[float] = Field(None, description="Weight parameter q in (0,1)", gt=0.0, lt=1.0)
    r: Optional[float] = Field(None, description="Alternative parametrization q = e^{-r}", gt=0.0)
    alpha: float = Field(1.0, description="Plancherel poissonization parameter", gt=0.0)
    cutoff: int = Field(12, description="Volume cutoff for brute-force ensembles", ge=0)
    box: Tuple[int, int, int] = Field((2, 2, 2), description="Sampler box a,b,c")
    steps: int = Field(1_000_000, description="Metropolis steps", ge=1)
    grid: GridSpec = Field(default_factory=GridSpec, description="Rescaled grid for density/limit-shape")
    bulk: Tuple[float, float] = Field((0.0, 0.0), description="Bulk position (tau, chi) for the bulk kernel")
    tol: float = Field(1e-8, description="Quadrature tolerance", gt=0.0)
    epsilon: Optional[float] = Field(None, description="Contour separation override", gt=0.0, lt=0.5)
    seed: int = Field(0, description="Random seed", ge=0)
    kind: str = Field("3d", description="Kernel kind: schur, 3d, plancherel, bulk")
    points: List[Tuple[int, float]] = Field(default_factory=list, description="Query points (t, h) or (t, x)")
    queries_file: Optional[Path] = Field(None, description="JSON-lines file of kernel queries")
    determinant: bool = Field(False, description="Return det over the point set instead of entries")
    out: Optional[Path] = Field(None, description="Output path")
    format: OutputFormat = Field(OutputFormat.JSON, description="Output format")
    suites: Optional[List[str]] = Field(None, description="Subset of verification suites")

    @field_validator("box")
    @classmethod
    def validate_box(cls, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
        if any(side < 1 for side in v):
            raise ValueError(f"Box sides must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def validate_q_or_r(self) -> "RunConfig":
        if self.q is not None and self.r is not None:
            raise ValueError("--q and --r are mutually exclusive")
        return self

    @property
    def effective_q(self) -> float:
        """q from either parametrization, defaulting to 0.1"""
        if self.q is not None:
            return self.q
        if self.r is not None:
            return math.exp(-self.r)
        return 0.1

    @property
    def effective_r(self) -> float:
        return -math.log(self.effective_q)

    def header(self) -> Dict[str, Any]:
        """Full configuration echoed into every output file"""
        return self.model_dump(mode="json")


class SuiteResult(BaseModel):
    """Outcome of one verification suite"""

    model_config = ConfigDict(validate_assignment=True)

    name: str = Field(..., description="Suite identifier")
    success: bool = Field(..., description="Whether every check passed")
    max_error: Optional[float] = Field(None, description="Largest observed discrepancy", ge=0.0)
    tolerance: Optional[float] = Field(None, description="Allowed discrepancy", ge=0.0)
    runtime: float = Field(0.0, description="Wall time in seconds", ge=0.0)
    checks: int = Field(0, description="Number of individual comparisons", ge=0)
    error: Optional[str] = Field(None, description="Error message if the suite failed")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Additional metadata")


class VerificationReport(BaseModel):
    """All suite results of a verify run"""

    model_config = ConfigDict(validate_assignment=True)

    results: List[SuiteResult] = Field(default_factory=list, description="Per-suite results in run order")
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="Report time, left out of dumps so reports depend only on config and seed",
        exclude=True,
    )

    @property
    def success(self) -> bool:
        return all(r.success for r in self.results)

    @property
    def first_failure(self) -> Optional[str]:
        for r in self.results:
            if not r.success:
                return r.name
        return None
