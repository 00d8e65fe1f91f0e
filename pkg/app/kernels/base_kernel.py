"""
Abstract base kernel: one correlation kernel of a determinantal point field.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Sequence
import logging

from pydantic import ValidationError

from app.schemas import KernelValue, QuadratureSpec
from app.services.kernel_service import KernelService
from core.exceptions import SchurLabError

logger = logging.getLogger(__name__)


class BaseKernel(ABC):
    """
    Abstract base class for correlation kernels.

    Subclasses fix the point frame (lattice points or tile centers), parse
    raw CLI points into it and evaluate single entries; determinants and
    error reporting are shared.
    """

    kind: str = "base"

    def __init__(self, quad: QuadratureSpec | None = None, service: KernelService | None = None):
        """
        Initialize base kernel.

        Args:
            quad: Contour discretization for quadrature-based kernels
            service: Kernel service doing the numerical work
        """
        self.quad = quad or QuadratureSpec()
        self.service = service or KernelService()
        self.logger = logging.getLogger(f"{self.__class__.__module__}.{self.__class__.__name__}")

        self.logger.info(f"Initialized {self.__class__.__name__} with tol {self.quad.tol:g}")

    @abstractmethod
    def parse_point(self, raw: Sequence[float]) -> Any:
        """
        Convert a raw (time, position) pair into this kernel's point type.

        Raises:
            ValueError: If the pair violates the frame's parity constraint
        """
        raise NotImplementedError("Subclasses must implement parse_point method")

    @abstractmethod
    def is_suitable_for(self, point: Any) -> bool:
        """Whether the point lies in the region the kernel describes"""
        raise NotImplementedError("Subclasses must implement is_suitable_for method")

    @abstractmethod
    def _evaluate(self, u: Any, v: Any) -> KernelValue:
        raise NotImplementedError("Subclasses must implement _evaluate method")

    def entry(self, u: Any, v: Any) -> float:
        """Kernel entry K(u, v); numerical failures propagate"""
        return self._evaluate(u, v).value

    def evaluate(self, u: Any, v: Any) -> KernelValue:
        """
        Kernel entry with diagnostics; failures are reported in the record.

        Args:
            u: Row point
            v: Column point

        Returns:
            KernelValue, with ``error`` set if evaluation failed
        """
        try:
            value = self._evaluate(u, v)
            self.logger.debug(f"K({u}, {v}) = {value.value:.12g}")
            return value
        except (SchurLabError, ValidationError, ValueError) as e:
            self.logger.error(f"Failed to evaluate kernel at {u}, {v}: {e}")
            return KernelValue(query={"first": str(u), "second": str(v)}, value=float("nan"), nodes_used=0, est_error=0.0, error=str(e))

    def determinant(self, points: Sequence[Any]) -> float:
        """Correlation function det(K(u_i, u_j)) of a point set"""
        return self.service.correlation_det(list(points), self.entry)

    def get_kernel_info(self) -> Dict[str, Any]:
        """
        Kernel information for factory listings.

        Returns:
            Kernel metadata
        """
        return {
            "name": self.__class__.__name__,
            "kind": self.kind,
            "quadrature": self.quad.model_dump(),
        }
