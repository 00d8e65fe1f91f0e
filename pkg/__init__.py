"""
SchurLab - Schur processes, plane partitions and their correlation kernels

Exact kernels for Schur processes, brute-force oracles over small
configurations, bulk asymptotics of random plane partitions and a
Metropolis sampler for boxed plane partitions.
"""

__version__ = "1.0.0"
__author__ = "SchurLab Team"
__description__ = "Correlation kernels and limit shapes of Schur processes"

# Configuration
from core.config import config

# Schemas
from app.schemas import (
    BulkPoint,
    KernelQuery,
    KernelValue,
    PlanePartition,
    RunConfig,
    SchurProcessParams,
    Specialization,
)

# Services
from app.services import (
    AsymptService,
    CombinService,
    EnumerationService,
    KernelService,
    ProcessService,
    SamplerService,
    SchurService,
)

# Kernels
from app.kernels import KernelFactory

# Command line
from app.cli import main

__all__ = [
    # Configuration
    "config",

    # Schemas
    "BulkPoint",
    "KernelQuery",
    "KernelValue",
    "PlanePartition",
    "RunConfig",
    "SchurProcessParams",
    "Specialization",

    # Services
    "AsymptService",
    "CombinService",
    "EnumerationService",
    "KernelService",
    "ProcessService",
    "SamplerService",
    "SchurService",

    # Kernels
    "KernelFactory",
    "main",
]
