"""
Runtime configuration for SchurLab.

Values come from defaults below, then ``SCHURLAB_*`` environment variables,
then an optional ``.env`` file in the working directory.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Global numerical tolerances, limits and output locations"""

    model_config = SettingsConfigDict(
        env_prefix="SCHURLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        validate_assignment=True,
    )

    log_level: str = Field("INFO", description="Root logging level")
    export_dir: Path = Field(Path("./exports"), description="Directory for CSV/JSON/SVG outputs")

    # series truncation
    series_tail_tol: float = Field(1e-14, description="Tail bound for log-series sums", gt=0.0)
    partition_tail_tol: float = Field(1e-12, description="Tail bound for partition functions", gt=0.0)
    qdilog_tol: float = Field(1e-18, description="Stop the q-product once q^n|z| drops below this", gt=0.0)
    mq_window_tol: float = Field(1e-14, description="Window size M for M_q is chosen with q^M below this", gt=0.0)

    # contour quadrature
    default_nodes: int = Field(64, description="Initial nodes per circle", ge=64)
    default_epsilon: float = Field(0.05, description="Radial separation of the two contours", gt=0.0, lt=0.5)
    default_quad_tol: float = Field(1e-10, description="Target accuracy for kernel quadrature", gt=0.0)
    max_doublings: int = Field(8, description="Node doublings before giving up", ge=0, le=16)
    pole_guard: float = Field(0.1, description="Minimal contour distance to singular circles, in units of the free gap", gt=0.0, lt=1.0)
    arc_tol: float = Field(1e-13, description="Target accuracy for arc integrals", gt=0.0)

    # enumeration and determinants
    max_configs: int = Field(10_000_000, description="Hard limit on enumerated configurations", ge=1)
    max_det_size: int = Field(12, description="Largest correlation determinant", ge=1)

    # limit shape
    ck_nodes: int = Field(512, description="Nodes per axis for the Cerf-Kenyon double integral", ge=16)
    ck_tol: float = Field(1e-3, description="Accuracy claimed for the Cerf-Kenyon quadrature", gt=0.0)

    show_progress: bool = Field(False, description="Show tqdm progress bars in grid sweeps")


config = Settings()
