"""
Shared fixtures for the SchurLab test suite.
"""

import pytest

from app.schemas import PlanePartition
from app.services.asympt_service import AsymptService
from app.services.combin_service import CombinService
from app.services.enumeration_service import EnumerationService
from app.services.kernel_service import KernelService
from app.services.process_service import ProcessService
from app.services.schur_service import SchurService
from app.services.storage_service import StorageService
from core.config import config


@pytest.fixture
def combin():
    return CombinService()


@pytest.fixture
def schur():
    return SchurService()


@pytest.fixture
def process():
    return ProcessService()


@pytest.fixture
def enumeration():
    return EnumerationService()


@pytest.fixture
def kernels():
    return KernelService()


@pytest.fixture
def asympt():
    return AsymptService()


@pytest.fixture
def sample_pi():
    """Plane partition of volume 29 with seven nonempty diagonal slices"""
    return PlanePartition.model_validate([[5, 3, 2, 1], [4, 3, 1, 1], [3, 2, 1], [2, 1]])


@pytest.fixture
def export_dir(tmp_path, monkeypatch):
    """Redirect every export into a temporary directory"""
    monkeypatch.setattr(config, "export_dir", tmp_path)
    return tmp_path


@pytest.fixture
def storage(export_dir):
    return StorageService(export_dir)
