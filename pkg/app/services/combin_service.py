"""
Partitions, interlacing, diagonal slices and point-field encodings.

Public operations accept the pydantic models from ``app.schemas``; the
bounded generators at the bottom work on plain tuples because the
enumeration oracle calls them millions of times.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterator, Optional, Sequence, Set, Tuple, Union

from app.schemas import (
    Partition,
    PlanePartition,
    PointConfig,
    SliceSequence,
    TilePoint,
    slice_contains,
)
from core.exceptions import InterlacingError

logger = logging.getLogger(__name__)

PartitionLike = Union[Partition, Sequence[int]]

_INF = 1 << 60


def as_parts(lam: PartitionLike) -> Tuple[int, ...]:
    """Tuple of parts for a Partition or a plain sequence"""
    if isinstance(lam, Partition):
        return lam.parts
    parts = tuple(int(p) for p in lam)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def tuple_interlaces(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> bool:
    """lam_1 >= mu_1 >= lam_2 >= mu_2 >= ... on raw tuples"""
    if len(mu) > len(lam) or len(lam) > len(mu) + 1:
        return False
    for i, m in enumerate(mu):
        if m > lam[i]:
            return False
        if i + 1 < len(lam) and lam[i + 1] > m:
            return False
    return True


def is_contained(mu: Tuple[int, ...], lam: Tuple[int, ...]) -> bool:
    """Young diagram inclusion mu inside lam"""
    return len(mu) <= len(lam) and all(m <= l for m, l in zip(mu, lam))


class CombinService:
    """
    Combinatorics of partitions and 3D Young diagrams.
    """

    def __init__(self):
        """Initialize combinatorics service"""
        logger.info("CombinService initialized")

    def interlaces(self, lam: PartitionLike, mu: PartitionLike) -> bool:
        """
        Check lam_1 >= mu_1 >= lam_2 >= mu_2 >= ...

        Args:
            lam: Larger partition of the pair
            mu: Smaller partition of the pair

        Returns:
            True iff mu interlaces with lam from below
        """
        return tuple_interlaces(as_parts(lam), as_parts(mu))

    def diagonal_slices(self, pi: PlanePartition) -> SliceSequence:
        """
        Diagonal slices lambda(t)_i = pi_{i, t+i}.

        Args:
            pi: Plane partition

        Returns:
            Slice sequence, up-then-down interlacing
        """
        slices: Dict[int, Partition] = {}
        for t in range(-pi.num_rows + 1, pi.num_cols):
            start = max(1, 1 - t)
            parts = []
            i = start
            while True:
                value = pi.entry(i, t + i)
                if value == 0:
                    break
                parts.append(value)
                i += 1
            if parts:
                slices[t] = Partition(parts=tuple(parts))
        return SliceSequence(slices=slices)

    def from_slices(self, s: SliceSequence) -> PlanePartition:
        """
        Rebuild the plane partition from its diagonal slices.

        Args:
            s: Slice sequence

        Returns:
            Plane partition with the given slices

        Raises:
            InterlacingError: If the chain breaks, with the first offending time
        """
        lo, hi = s.support
        for t in range(lo - 1, hi + 1):
            left, right = s.get(t).parts, s.get(t + 1).parts
            ok = tuple_interlaces(right, left) if t < 0 else tuple_interlaces(left, right)
            if not ok:
                relation = "<" if t < 0 else ">"
                raise InterlacingError(
                    f"Slices at t={t} and t={t + 1} violate lambda({t}) {relation} lambda({t + 1})",
                    time=t,
                )

        entries: Dict[Tuple[int, int], int] = {}
        for t, lam in s.slices.items():
            for k, part in enumerate(lam.parts, start=1):
                i, j = (k, t + k) if t >= 0 else (k - t, k)
                entries[(i, j)] = part
        if not entries:
            return PlanePartition()
        num_rows = max(i for i, _ in entries)
        rows = []
        for i in range(1, num_rows + 1):
            row = []
            j = 1
            while (i, j) in entries:
                row.append(entries[(i, j)])
                j += 1
            rows.append(tuple(row))
        return PlanePartition(rows=tuple(rows))

    def point_config(self, s: SliceSequence) -> PointConfig:
        """
        Point field {(t, lambda(t)_i - i + 1/2)}.

        Args:
            s: Slice sequence

        Returns:
            Point configuration with one occupied tail per column
        """
        points: Set[Tuple[int, int]] = set()
        tail: Dict[int, int] = {}
        for t, lam in s.slices.items():
            for i, part in enumerate(lam.parts, start=1):
                points.add((t, 2 * (part - i) + 1))
            tail[t] = -2 * lam.length - 1
        return PointConfig(points=frozenset(points), tail=tail)

    def tile_centers(self, pi: PlanePartition, extent: Optional[int] = None) -> Set[TilePoint]:
        """
        Centers (j - i, pi_ij - (i+j-1)/2) of horizontal lozenges.

        Zero entries are included, so the floor appears inside the
        rendering window 1 <= i, j <= extent. Beyond the window use
        ``tile_occupied``.

        Args:
            pi: Plane partition
            extent: Window size, default rows-or-columns plus the largest part

        Returns:
            Set of tile centers
        """
        if extent is None:
            extent = max(pi.num_rows, pi.num_cols) + pi.max_part
        extent = max(extent, 1)
        return {
            TilePoint(t=j - i, h2=2 * pi.entry(i, j) - (i + j - 1))
            for i in range(1, extent + 1)
            for j in range(1, extent + 1)
        }

    def tile_occupied(self, s: SliceSequence, tile: TilePoint) -> bool:
        """Membership of a tile center, floor included, via (t, h + |t|/2)"""
        return slice_contains(s.get(tile.t).parts, tile.h2 + abs(tile.t))

    def volume(self, pi: PlanePartition) -> int:
        """Number of unit cubes |pi|"""
        return sum(sum(row) for row in pi.rows)


def bounded_partitions(
    lower: Sequence[int],
    upper: Sequence[int],
    budget: int,
    max_len: int,
) -> Iterator[Tuple[int, ...]]:
    """
    All partitions with lower_i <= lam_i <= upper_i and |lam| <= budget.

    Positions beyond ``lower`` have lower bound 0, positions beyond
    ``upper`` are unbounded; at most ``max_len`` parts.
    """

    def low(i: int) -> int:
        return lower[i] if i < len(lower) else 0

    def high(i: int) -> int:
        return upper[i] if i < len(upper) else _INF

    if sum(lower) > budget:
        return

    def rec(i: int, prev: int, remaining: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        # parts from position i on are forced zero once a zero is chosen
        if low(i) == 0:
            yield prefix
        if i >= max_len:
            return
        # keep enough budget for the lower bounds still ahead
        reserve = sum(lower[i + 1:]) if i + 1 < len(lower) else 0
        top = min(prev, high(i), remaining - reserve)
        for part in range(max(low(i), 1), top + 1):
            yield from rec(i + 1, part, remaining - part, prefix + (part,))

    yield from rec(0, _INF, budget, ())


def sub_partitions(bound: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    """All nu with nu_i <= bound_i"""
    return bounded_partitions((), bound, sum(bound), len(bound))


def iter_plane_partitions(
    max_volume: int,
    box: Optional[Tuple[int, int, int]] = None,
) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """
    Plane partitions of volume at most ``max_volume`` as tuples of rows,
    optionally confined to an a x b x c box.
    """
    a, b, c = box if box is not None else (_INF, _INF, _INF)
    first_upper = (c,) * min(b, max_volume)

    def rec(prev: Tuple[int, ...], remaining: int, rows: Tuple[Tuple[int, ...], ...]) -> Iterator:
        yield rows
        if len(rows) >= a or remaining == 0:
            return
        for row in bounded_partitions((), prev, remaining, len(prev)):
            if row:
                yield from rec(row, remaining - sum(row), rows + (row,))

    yield from rec(first_upper, max_volume, ())


# Global service instance
combin_service = CombinService()


def interlaces(lam: PartitionLike, mu: PartitionLike) -> bool:
    return combin_service.interlaces(lam, mu)


def diagonal_slices(pi: PlanePartition) -> SliceSequence:
    return combin_service.diagonal_slices(pi)


def from_slices(s: SliceSequence) -> PlanePartition:
    return combin_service.from_slices(s)


def point_config(s: SliceSequence) -> PointConfig:
    return combin_service.point_config(s)


def tile_centers(pi: PlanePartition, extent: Optional[int] = None) -> Set[TilePoint]:
    return combin_service.tile_centers(pi, extent)


def volume(pi: PlanePartition) -> int:
    return combin_service.volume(pi)
