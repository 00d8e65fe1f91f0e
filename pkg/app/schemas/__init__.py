"""
Pydantic v2 schema definitions for SchurLab.
"""

from __future__ import annotations

from .combin_schemas import (
    EMPTY_PARTITION,
    LatticePoint,
    Partition,
    PlanePartition,
    PointConfig,
    SliceSequence,
    TilePoint,
)
from .schur_schemas import (
    TRIVIAL_PAIR,
    Factor,
    FactorKind,
    LogCoeffs,
    Orientation,
    Specialization,
    SpecializationPair,
    minus_side,
    plus_side,
)
from .process_schemas import BoxedEnsemble, SchurProcessParams, slice_contains
from .kernel_schemas import KernelKind, KernelQuery, KernelValue, QuadratureSpec
from .asympt_schemas import BulkPoint, Classification, CriticalData
from .run_schemas import (
    GridSpec,
    OutputFormat,
    RunConfig,
    Subcommand,
    SuiteResult,
    VerificationReport,
)

__all__ = [
    "EMPTY_PARTITION",
    "LatticePoint",
    "Partition",
    "PlanePartition",
    "PointConfig",
    "SliceSequence",
    "TilePoint",
    "TRIVIAL_PAIR",
    "Factor",
    "FactorKind",
    "LogCoeffs",
    "Orientation",
    "Specialization",
    "SpecializationPair",
    "minus_side",
    "plus_side",
    "BoxedEnsemble",
    "SchurProcessParams",
    "slice_contains",
    "KernelKind",
    "KernelQuery",
    "KernelValue",
    "QuadratureSpec",
    "BulkPoint",
    "Classification",
    "CriticalData",
    "GridSpec",
    "OutputFormat",
    "RunConfig",
    "Subcommand",
    "SuiteResult",
    "VerificationReport",
]
