"""
Metropolis sampler for q^{|pi|} on plane partitions inside a box, and the
empirical horizontal-tile density of a sample.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from numba import njit
from tqdm import tqdm

from app.schemas import GridSpec, PlanePartition, TilePoint
from app.services.combin_service import CombinService
from app.services.enumeration_service import EnumerationService
from core.config import config
from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

CHUNK = 1_000_000


@njit(cache=True)
def _try_move(h, i, j, up, u, q, c):
    """Single add/remove proposal at cell (i, j); returns the volume change"""
    a, b = h.shape
    v = h[i, j]
    if up:
        if v + 1 > c:
            return 0
        if i > 0 and h[i - 1, j] < v + 1:
            return 0
        if j > 0 and h[i, j - 1] < v + 1:
            return 0
        if u < q:
            h[i, j] = v + 1
            return 1
        return 0
    if v == 0:
        return 0
    if i + 1 < a and h[i + 1, j] > v - 1:
        return 0
    if j + 1 < b and h[i, j + 1] > v - 1:
        return 0
    # removal always accepted: min(1, q^{-1}) = 1
    h[i, j] = v - 1
    return -1


@njit(cache=True)
def _run_chain(h, cells, dirs, uniforms, q, c):
    b = h.shape[1]
    volume = 0
    for s in range(cells.shape[0]):
        cell = cells[s]
        volume += _try_move(h, cell // b, cell % b, dirs[s] == 1, uniforms[s], q, c)
    return volume


@njit(cache=True)
def _run_chain_histogram(h, cells, dirs, uniforms, q, c, counts):
    """As ``_run_chain`` but records the base-(c+1) key of the state after each step"""
    a, b = h.shape
    base = c + 1
    key = 0
    weight = 1
    for i in range(a):
        for j in range(b):
            key += h[i, j] * weight
            weight *= base
    for s in range(cells.shape[0]):
        cell = cells[s]
        i = cell // b
        j = cell % b
        delta = _try_move(h, i, j, dirs[s] == 1, uniforms[s], q, c)
        if delta != 0:
            key += delta * base ** (i * b + j)
        counts[key] += 1
    return key


def acceptance_probability(delta: int, q: float) -> float:
    """Metropolis acceptance min(1, q^{delta}) for a volume change delta"""
    return min(1.0, q ** delta)


class SamplerService:
    """
    Single-site Metropolis chain on plane partitions in an a x b x c box.

    A step picks a cell and a direction uniformly, so every proposal has
    the same probability as its reverse; additions are accepted with
    probability q and valid removals always.
    """

    def __init__(self):
        """Initialize sampler service"""
        self.combin = CombinService()
        logger.info("SamplerService initialized")

    def _generator(self, seed: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(seed))

    def _validate(self, q: float, box: Tuple[int, int, int], steps: int) -> None:
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        if min(box) < 1 or steps < 1:
            raise ConfigurationError(f"box sides and steps must be positive, got {box}, {steps}")

    def _chunks(self, steps: int):
        sizes = [CHUNK] * (steps // CHUNK) + ([steps % CHUNK] if steps % CHUNK else [])
        return tqdm(sizes, desc="metropolis", disable=not config.show_progress)

    def mcmc_sample(self, q: float, box: Tuple[int, int, int], steps: int, seed: int) -> PlanePartition:
        """
        Run the chain from the empty diagram and return the final state.

        Args:
            q: Weight parameter in (0, 1)
            box: Box dimensions (rows, columns, height)
            steps: Number of proposals
            seed: Seed of the counter-based Philox generator

        Returns:
            Final plane partition
        """
        self._validate(q, box, steps)
        a, b, c = box
        rng = self._generator(seed)
        h = np.zeros((a, b), dtype=np.int64)
        volume = 0
        for size in self._chunks(steps):
            cells = rng.integers(0, a * b, size=size, dtype=np.int64)
            dirs = rng.integers(0, 2, size=size, dtype=np.int64)
            uniforms = rng.random(size)
            volume += _run_chain(h, cells, dirs, uniforms, q, c)
        logger.info(f"Metropolis run q={q}, box={box}, steps={steps}, seed={seed}: final volume {volume}")
        return PlanePartition(rows=tuple(tuple(int(v) for v in row) for row in h))

    def histogram(
        self,
        q: float,
        box: Tuple[int, int, int],
        steps: int,
        seed: int,
    ) -> Dict[Tuple[Tuple[int, ...], ...], float]:
        """
        Empirical distribution of the visited states.

        Args:
            q: Weight parameter in (0, 1)
            box: Box dimensions; (c+1)^{ab} keys must fit in memory
            steps: Number of proposals
            seed: Generator seed

        Returns:
            Visit frequencies keyed by the trimmed row tuples
        """
        self._validate(q, box, steps)
        a, b, c = box
        n_keys = (c + 1) ** (a * b)
        if n_keys > 10_000_000:
            raise ConfigurationError(f"box {box} has too many states for a histogram")
        rng = self._generator(seed)
        h = np.zeros((a, b), dtype=np.int64)
        counts = np.zeros(n_keys, dtype=np.int64)
        for size in self._chunks(steps):
            cells = rng.integers(0, a * b, size=size, dtype=np.int64)
            dirs = rng.integers(0, 2, size=size, dtype=np.int64)
            uniforms = rng.random(size)
            _run_chain_histogram(h, cells, dirs, uniforms, q, c, counts)

        freq: Dict[Tuple[Tuple[int, ...], ...], float] = {}
        for key in np.flatnonzero(counts):
            digits = np.zeros(a * b, dtype=np.int64)
            rest = int(key)
            for k in range(a * b):
                digits[k] = rest % (c + 1)
                rest //= c + 1
            rows = PlanePartition(rows=tuple(tuple(int(v) for v in r) for r in digits.reshape(a, b))).rows
            freq[rows] = counts[key] / steps
        return freq

    def total_variation(
        self,
        q: float,
        box: Tuple[int, int, int],
        steps: int,
        seed: int,
        enumeration: Optional[EnumerationService] = None,
    ) -> float:
        """Total-variation distance between the chain histogram and the exact boxed law"""
        enumeration = enumeration or EnumerationService()
        states, probs = enumeration.boxed_distribution(q, box)
        empirical = self.histogram(q, box, steps, seed)
        exact = {PlanePartition(rows=s).rows: float(p) for s, p in zip(states, probs)}
        keys = set(exact) | set(empirical)
        tv = 0.5 * sum(abs(exact.get(k, 0.0) - empirical.get(k, 0.0)) for k in keys)
        logger.info(f"Total variation {tv:.4f} over {len(exact)} boxed states (seed {seed})")
        return tv

    def tile_density_grid(self, pi: PlanePartition, r: float, grid: GridSpec) -> np.ndarray:
        """
        Fraction of horizontal-tile sites occupied per (tau, chi) cell.

        Sites are the lattice points (t, h) with h + (t+1)/2 integral; a
        site at (r t, r h) falls into the cell of the grid cell edges.

        Args:
            pi: Plane partition
            r: Scale, q = e^{-r}
            grid: Grid whose nodes are the cell edges

        Returns:
            Array of shape (tau_steps - 1, chi_steps - 1), NaN for cells without sites
        """
        slices = self.combin.diagonal_slices(pi)
        tau_edges = np.linspace(grid.tau_min, grid.tau_max, grid.tau_steps)
        chi_edges = np.linspace(grid.chi_min, grid.chi_max, grid.chi_steps)
        taus, chis, occupied = [], [], []
        for t in range(math.ceil(grid.tau_min / r), math.floor(grid.tau_max / r) + 1):
            # doubled heights with the right parity
            lo = math.ceil(2 * grid.chi_min / r)
            hi = math.floor(2 * grid.chi_max / r)
            for h2 in range(lo, hi + 1):
                if (h2 + t + 1) % 2:
                    continue
                taus.append(r * t)
                chis.append(r * h2 / 2)
                occupied.append(self.combin.tile_occupied(slices, TilePoint(t=t, h2=h2)))
        sites, _, _ = np.histogram2d(taus, chis, bins=[tau_edges, chi_edges])
        hits, _, _ = np.histogram2d(taus, chis, bins=[tau_edges, chi_edges], weights=np.asarray(occupied, dtype=float))
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(sites > 0, hits / sites, np.nan)


sampler_service = SamplerService()


def mcmc_sample(q: float, box: Tuple[int, int, int], steps: int, seed: int) -> PlanePartition:
    return sampler_service.mcmc_sample(q, box, steps, seed)
