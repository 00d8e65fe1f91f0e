"""
Brute-force enumeration oracle: every slice sequence of a Schur process
up to a total-size cutoff, with exact weights.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.schemas import (
    BoxedEnsemble,
    LatticePoint,
    SchurProcessParams,
    SpecializationPair,
    TilePoint,
)
from app.services.combin_service import _INF, bounded_partitions, iter_plane_partitions
from app.services.schur_service import _transition_cached
from core.config import config
from core.exceptions import ConfigurationError, EnumerationOverflowError

logger = logging.getLogger(__name__)

PointLike = Union[LatticePoint, TilePoint, Tuple[int, int]]
Slices = Tuple[Tuple[int, ...], ...]


def _candidates(prev: Tuple[int, ...], pair: SpecializationPair, budget: int) -> Iterator[Tuple[int, ...]]:
    """
    Slices lam with S_pair(prev, lam) possibly nonzero and |lam| <= budget.

    One-sided pairs only grow (minus side trivial) or only shrink (plus
    side trivial) the previous slice; a pure geometric side additionally
    bounds the column lengths of the skew shape.
    """
    plus_trivial = pair.plus.is_trivial
    minus_trivial = pair.minus.is_trivial
    if plus_trivial and minus_trivial:
        if sum(prev) <= budget:
            yield prev
        return
    if minus_trivial:
        k = pair.plus.strip_bound()
        if k < 0:
            yield from bounded_partitions(prev, (), budget, budget)
            return
        # lam_{i+k} <= prev_i
        upper = [_INF] * k + list(prev)
        yield from bounded_partitions(prev, upper, budget, len(prev) + k)
        return
    if plus_trivial:
        k = pair.minus.strip_bound()
        lower = list(prev[k:]) if k >= 0 else []
        yield from bounded_partitions(lower, prev, budget, len(prev))
        return
    yield from bounded_partitions((), (), budget, budget)


def _lattice_key(point: PointLike) -> Tuple[int, int]:
    if isinstance(point, TilePoint):
        point = point.to_lattice()
    if isinstance(point, LatticePoint):
        return point.t, point.x2
    t, x2 = point
    return int(t), LatticePoint(t=int(t), x2=int(x2)).x2


class EnumerationService:
    """
    Exact finite ensembles used as the ground truth for kernels,
    partition functions, marginals and the sampler.
    """

    def __init__(self):
        """Initialize enumeration service with an empty ensemble cache"""
        self._cache: Dict[Tuple[str, int], BoxedEnsemble] = {}
        logger.info("EnumerationService initialized")

    def enumerate_configs(self, p: SchurProcessParams, volume_cutoff: int) -> BoxedEnsemble:
        """
        All slice sequences with total size at most ``volume_cutoff``.

        Args:
            p: Process parameters
            volume_cutoff: Largest total size sum_t |lambda(t)|

        Returns:
            BoxedEnsemble holding the configurations of nonzero weight

        Raises:
            EnumerationOverflowError: If more than ``config.max_configs`` configurations appear
        """
        if volume_cutoff < 0:
            raise ConfigurationError(f"volume cutoff must be nonnegative, got {volume_cutoff}")
        key = (p.model_dump_json(), volume_cutoff)
        if key in self._cache:
            return self._cache[key]

        times = p.slice_times
        n = len(times)
        # largest slice length from which the remaining transitions can still reach the empty slice
        length_cap = [_INF] * (n + 1)
        length_cap[n] = 0
        for j in range(n - 1, -1, -1):
            pair = p.pair(2 * times[j] + 1)
            k = pair.minus.strip_bound() if pair.plus.is_trivial else -1
            if k < 0 or length_cap[j + 1] >= _INF:
                length_cap[j] = _INF
            else:
                length_cap[j] = length_cap[j + 1] + k
        pairs = [p.pair(2 * t - 1) for t in times]
        closing = p.pair(2 * p.t_max - 1)

        configurations: List[Slices] = []
        weights: List[float] = []
        volumes: List[int] = []
        limit = config.max_configs

        def dfs(j: int, prev: Tuple[int, ...], used: int, weight: float, acc: Slices) -> None:
            if j == n:
                final = weight * _transition_cached(prev, (), closing)
                if final != 0.0:
                    configurations.append(acc)
                    weights.append(final)
                    volumes.append(used)
                    if len(configurations) > limit:
                        raise EnumerationOverflowError(
                            f"more than {limit} configurations below cutoff {volume_cutoff}"
                        )
                return
            for lam in _candidates(prev, pairs[j], volume_cutoff - used):
                if len(lam) > length_cap[j]:
                    continue
                w = _transition_cached(prev, lam, pairs[j])
                if w == 0.0:
                    continue
                dfs(j + 1, lam, used + sum(lam), weight * w, acc + (lam,))

        if n == 0:
            configurations.append(())
            weights.append(_transition_cached((), (), closing))
            volumes.append(0)
        else:
            dfs(0, (), 0, 1.0, ())

        w_arr = np.asarray(weights, dtype=float)
        v_arr = np.asarray(volumes, dtype=np.int64)
        tail = self._tail_bound(w_arr, v_arr, volume_cutoff)
        ensemble = BoxedEnsemble(
            params=p,
            volume_cutoff=volume_cutoff,
            first_time=times[0] if times else p.t_min + 1,
            configurations=configurations,
            weights=w_arr,
            volumes=v_arr,
            tail_bound=tail,
        )
        logger.info(
            f"Enumerated {ensemble.size} configurations of '{p.label}' up to size {volume_cutoff}, "
            f"relative tail estimate {tail:.2e}"
        )
        self._cache[key] = ensemble
        return ensemble

    def _tail_bound(self, weights: np.ndarray, volumes: np.ndarray, cutoff: int) -> float:
        """Geometric estimate of the omitted weight relative to the enumerated total"""
        total = float(weights.sum())
        if cutoff == 0 or total == 0.0:
            return 0.0
        by_volume = np.bincount(volumes, weights=weights, minlength=cutoff + 1)
        last, before = by_volume[cutoff], by_volume[cutoff - 1]
        if last == 0.0:
            return 0.0
        ratio = last / before if before > 0 else math.inf
        if ratio >= 1.0:
            logger.warning(f"Enumeration tail does not decay at cutoff {cutoff} (ratio {ratio:.3f})")
            return math.inf
        return float(last * ratio / (1.0 - ratio) / total)

    def correlation_bruteforce(
        self,
        points: Iterable[PointLike],
        p: SchurProcessParams,
        cutoff: int,
        ensemble: Optional[BoxedEnsemble] = None,
    ) -> float:
        """
        Probability that the random point field contains every point.

        Args:
            points: Lattice points, tile centers or (t, 2x) pairs
            p: Process parameters
            cutoff: Volume cutoff of the ensemble
            ensemble: Precomputed ensemble for ``p`` and ``cutoff``

        Returns:
            Weighted fraction of enumerated configurations containing all points
        """
        keys = sorted({_lattice_key(u) for u in points})
        if not keys:
            return 1.0
        ensemble = ensemble or self.enumerate_configs(p, cutoff)
        mask = np.ones(ensemble.size, dtype=bool)
        for t, x2 in keys:
            mask &= ensemble.occupancy(t, x2)
        return float(np.sum(ensemble.weights[mask]) / ensemble.normalization)

    def marginal_distribution(self, ensemble: BoxedEnsemble, t: int) -> Dict[Tuple[int, ...], float]:
        """Normalized law of lambda(t) within the ensemble"""
        law: Dict[Tuple[int, ...], float] = {}
        for idx in range(ensemble.size):
            lam = ensemble.slice_at(idx, t)
            law[lam] = law.get(lam, 0.0) + float(ensemble.weights[idx])
        total = ensemble.normalization
        return {lam: w / total for lam, w in law.items()}

    def expected_size(self, ensemble: BoxedEnsemble) -> Tuple[float, float]:
        """Mean and variance of the total size within the ensemble"""
        w = ensemble.weights / ensemble.normalization
        v = ensemble.volumes.astype(float)
        mean = float(np.sum(w * v))
        return mean, float(np.sum(w * (v - mean) ** 2))

    def boxed_distribution(
        self,
        q: float,
        box: Tuple[int, int, int],
    ) -> Tuple[List[Tuple[Tuple[int, ...], ...]], np.ndarray]:
        """
        Exact law q^{|pi|}/Z of plane partitions inside an a x b x c box.

        Args:
            q: Weight parameter
            box: Box dimensions (rows, columns, height)

        Returns:
            States as row tuples and their probabilities
        """
        a, b, c = box
        if min(box) < 1:
            raise ConfigurationError(f"box dimensions must be positive, got {box}")
        states = list(iter_plane_partitions(a * b * c, box))
        volumes = np.array([sum(sum(r) for r in s) for s in states], dtype=float)
        weights = q ** volumes
        logger.info(f"Boxed distribution over {len(states)} plane partitions in {a}x{b}x{c}")
        return states, weights / weights.sum()


enumeration_service = EnumerationService()


def enumerate_configs(p: SchurProcessParams, volume_cutoff: int) -> BoxedEnsemble:
    return enumeration_service.enumerate_configs(p, volume_cutoff)


def correlation_bruteforce(
    points: Iterable[PointLike],
    p: SchurProcessParams,
    cutoff: int,
    ensemble: Optional[BoxedEnsemble] = None,
) -> float:
    return enumeration_service.correlation_bruteforce(points, p, cutoff, ensemble)


def boxed_distribution(q: float, box: Tuple[int, int, int]):
    return enumeration_service.boxed_distribution(q, box)
