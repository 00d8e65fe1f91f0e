import numpy as np
import pytest

from app.schemas import LatticePoint, TilePoint
from app.services.enumeration_service import EnumerationService
from core.config import config
from core.exceptions import EnumerationOverflowError

MCMAHON = [1, 1, 3, 6, 13, 24, 48, 86, 160]


@pytest.fixture
def mq_ensemble(process, enumeration):
    p = process.mq_params(0.05, M=9)
    return p, enumeration.enumerate_configs(p, 8)


def test_counts_match_plane_partitions(mq_ensemble):
    _, ensemble = mq_ensemble
    assert ensemble.counts_by_volume() == MCMAHON


def test_weights_are_q_to_the_volume(mq_ensemble):
    _, ensemble = mq_ensemble
    np.testing.assert_allclose(ensemble.weights, 0.05 ** ensemble.volumes, rtol=1e-10)


def test_normalization_matches_partition_function(process, mq_ensemble):
    p, ensemble = mq_ensemble
    assert ensemble.tail_bound < 1e-8
    assert ensemble.normalization == pytest.approx(process.partition_function(p), rel=1e-8)


def test_ensemble_is_cached(process, enumeration, mq_ensemble):
    p, ensemble = mq_ensemble
    assert enumeration.enumerate_configs(p, 8) is ensemble


def test_empty_point_set_has_probability_one(mq_ensemble, enumeration):
    p, ensemble = mq_ensemble
    assert enumeration.correlation_bruteforce([], p, 8, ensemble) == 1.0


def test_point_inputs_are_interchangeable(mq_ensemble, enumeration):
    p, ensemble = mq_ensemble
    tile = TilePoint(t=1, h2=0)
    by_tile = enumeration.correlation_bruteforce([tile], p, 8, ensemble)
    by_lattice = enumeration.correlation_bruteforce([tile.to_lattice()], p, 8, ensemble)
    by_pair = enumeration.correlation_bruteforce([(1, 1)], p, 8, ensemble)
    assert by_tile == by_lattice == by_pair
    assert 0.0 < by_tile < 1.0


def test_deep_tail_is_always_occupied(mq_ensemble, enumeration):
    p, ensemble = mq_ensemble
    assert enumeration.correlation_bruteforce([LatticePoint(t=0, x2=-21)], p, 8, ensemble) == pytest.approx(1.0)


def test_marginal_distribution(mq_ensemble, enumeration):
    _, ensemble = mq_ensemble
    law = enumeration.marginal_distribution(ensemble, 0)
    assert sum(law.values()) == pytest.approx(1.0)
    assert law[()] > law[(1,)] > law[(2,)]


def test_expected_size_matches_closed_form(process, mq_ensemble, enumeration):
    _, ensemble = mq_ensemble
    mean, variance = enumeration.expected_size(ensemble)
    assert mean == pytest.approx(process.expected_volume(0.05), abs=1e-6)
    assert variance == pytest.approx(process.volume_variance(0.05), abs=1e-5)


def test_plancherel_ensemble(process, enumeration):
    p = process.plancherel_params(0.5)
    ensemble = enumeration.enumerate_configs(p, 14)
    assert ensemble.normalization == pytest.approx(process.partition_function(p), rel=1e-7)


def test_overflow(process, monkeypatch):
    monkeypatch.setattr(config, "max_configs", 5)
    with pytest.raises(EnumerationOverflowError):
        EnumerationService().enumerate_configs(process.mq_params(0.1, M=5), 4)


def test_boxed_distribution(enumeration):
    states, probs = enumeration.boxed_distribution(0.5, (2, 2, 2))
    assert len(states) == 20
    assert probs.sum() == pytest.approx(1.0)
    assert probs[states.index(())] == probs.max()
    # full box against the empty one
    full = states.index(((2, 2), (2, 2)))
    assert probs[full] / probs[states.index(())] == pytest.approx(0.5 ** 8)
