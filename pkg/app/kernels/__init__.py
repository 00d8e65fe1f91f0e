"""
Correlation kernels behind a common interface.
"""

from .base_kernel import BaseKernel
from .bulk_kernel import BulkKernel
from .kernel_factory import KernelFactory
from .plancherel_kernel import PlancherelKernel
from .plane_kernel import PlaneKernel3D
from .schur_kernel import SchurProcessKernel

__all__ = [
    "BaseKernel",
    "BulkKernel",
    "KernelFactory",
    "PlancherelKernel",
    "PlaneKernel3D",
    "SchurProcessKernel",
]
