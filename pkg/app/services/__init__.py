"""
Business logic services for SchurLab.

``VerificationService`` builds on the kernel family and is imported from
``app.services.verification_service`` directly.
"""

from .combin_service import CombinService
from .schur_service import SchurService
from .process_service import ProcessService
from .enumeration_service import EnumerationService
from .sampler_service import SamplerService
from .kernel_service import KernelService
from .asympt_service import AsymptService
from .storage_service import StorageService
from .figure_service import FigureService

__all__ = [
    "CombinService",
    "SchurService",
    "ProcessService",
    "EnumerationService",
    "SamplerService",
    "KernelService",
    "AsymptService",
    "StorageService",
    "FigureService",
]
