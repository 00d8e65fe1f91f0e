"""
Kernel factory selecting a kernel implementation by name or run configuration.
"""

from __future__ import annotations

from typing import Any, Dict, Optional
import logging

from app.schemas import BulkPoint, QuadratureSpec, RunConfig, SchurProcessParams
from app.services.process_service import ProcessService

from .base_kernel import BaseKernel
from .bulk_kernel import BulkKernel
from .plancherel_kernel import PlancherelKernel
from .plane_kernel import PlaneKernel3D
from .schur_kernel import SchurProcessKernel

logger = logging.getLogger(__name__)


class KernelFactory:
    """
    Factory for creating kernels from a kind and the parameters it needs.
    """

    def __init__(self):
        """Initialize factory with available kernels"""
        self._kernels = {
            "schur": SchurProcessKernel,
            "3d": PlaneKernel3D,
            "plancherel": PlancherelKernel,
            "bulk": BulkKernel,
        }

        logger.info("KernelFactory initialized")

    def create_kernel(
        self,
        kind: str = "auto",
        *,
        q: Optional[float] = None,
        alpha: Optional[float] = None,
        params: Optional[SchurProcessParams] = None,
        bulk: Optional[BulkPoint] = None,
        quad: Optional[QuadratureSpec] = None,
    ) -> BaseKernel:
        """
        Create a kernel.

        Args:
            kind: "schur", "3d", "plancherel", "bulk" or "auto"
            q: Weight parameter for "3d" (and "schur" without explicit params)
            alpha: Poissonization parameter for "plancherel"
            params: Explicit process parameters for "schur"
            bulk: Bulk position for "bulk"
            quad: Contour discretization

        Returns:
            Configured kernel

        Raises:
            ValueError: For unknown kinds or missing parameters
        """
        if kind == "auto":
            kind = self._infer_kind(q, alpha, params, bulk)

        if kind not in self._kernels:
            logger.error(f"Unknown kernel kind: {kind}")
            raise ValueError(f"Unknown kernel kind '{kind}', expected one of {sorted(self._kernels)}")

        if kind == "schur":
            if params is None:
                if q is None:
                    raise ValueError("schur kernel needs params or q")
                params = ProcessService().mq_params(q)
            kernel: BaseKernel = SchurProcessKernel(params, quad)
        elif kind == "3d":
            if q is None:
                raise ValueError("3d kernel needs q")
            kernel = PlaneKernel3D(q, quad)
        elif kind == "plancherel":
            if alpha is None:
                raise ValueError("plancherel kernel needs alpha")
            kernel = PlancherelKernel(alpha, quad)
        else:
            kernel = BulkKernel(bulk or BulkPoint())

        logger.info(f"Created {kernel.__class__.__name__}")
        return kernel

    def from_run_config(self, cfg: RunConfig) -> BaseKernel:
        """Kernel for the ``kernel`` subcommand"""
        quad_fields: Dict[str, Any] = {"tol": cfg.tol}
        if cfg.epsilon is not None:
            quad_fields["epsilon"] = cfg.epsilon
        quad = QuadratureSpec(**quad_fields)
        bulk = BulkPoint(tau=cfg.bulk[0], chi=cfg.bulk[1])
        return self.create_kernel(cfg.kind, q=cfg.effective_q, alpha=cfg.alpha, bulk=bulk, quad=quad)

    def get_available_kernels(self) -> Dict[str, Any]:
        """
        Information about available kernels.

        Returns:
            Dictionary of kernel descriptions
        """
        return {
            name: {"description": (cls.__doc__ or "No description").strip()}
            for name, cls in self._kernels.items()
        }

    def _infer_kind(self, q, alpha, params, bulk) -> str:
        if params is not None:
            return "schur"
        if bulk is not None:
            return "bulk"
        if alpha is not None and q is None:
            return "plancherel"
        return "3d"
