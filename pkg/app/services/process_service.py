"""
Schur process parameters, exact weights and partition functions.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from app.schemas import (
    Factor,
    FactorKind,
    SchurProcessParams,
    SliceSequence,
    Specialization,
    SpecializationPair,
    minus_side,
    plus_side,
)
from app.services.combin_service import PartitionLike, as_parts
from app.services.schur_service import SchurService
from core.config import config
from core.exceptions import ConfigurationError, TruncationError

logger = logging.getLogger(__name__)


class ProcessService:
    """
    Business logic for Schur process measures.
    """

    def __init__(self, schur: Optional[SchurService] = None):
        """Initialize process service on top of the Schur layer"""
        self.schur = schur or SchurService()
        logger.info("ProcessService initialized")

    # ------------------------------------------------------------------ weights

    def weight(self, s: SliceSequence, p: SchurProcessParams) -> float:
        """
        Unnormalized probability prod_m S_phi[m](lambda(m-1/2), lambda(m+1/2)).

        Args:
            s: Slice sequence, empty outside the window
            p: Process parameters

        Returns:
            Product of transition weights

        Raises:
            ConfigurationError: If a nonempty slice lies outside the window
        """
        lo, hi = s.support
        if s.slices and (lo <= p.t_min or hi >= p.t_max):
            raise ConfigurationError(f"Slices on [{lo}, {hi}] leave the window ({p.t_min}, {p.t_max})")
        total = 1.0
        for m2 in p.half_times:
            before = s.get((m2 - 1) // 2).parts
            after = s.get((m2 + 1) // 2).parts
            total *= self.schur.transition_weight(before, after, p.pair(m2))
            if total == 0.0:
                break
        return total

    def partition_function(self, p: SchurProcessParams, order: Optional[int] = None) -> float:
        """
        Z = exp(sum_{m1 < m2} sum_k k (log phi[m1])_k (log phi[m2])_{-k}).

        Args:
            p: Process parameters
            order: Common truncation order; chosen per pair when omitted

        Returns:
            Partition function of the window

        Raises:
            TruncationError: If the summed tail bound exceeds ``config.partition_tail_tol``
        """
        plus_times = [m2 for m2, pair in p.phi.items() if not pair.plus.is_trivial]
        minus_times = [m2 for m2, pair in p.phi.items() if not pair.minus.is_trivial]
        pairs = [(a, b) for a in plus_times for b in minus_times if a < b]
        if not pairs:
            return 1.0
        per_pair_tol = config.partition_tail_tol / len(pairs)
        log_z = 0.0
        tail = 0.0
        for a, b in pairs:
            value, bound = self.schur.log_commutation(p.pair(a).plus, p.pair(b).minus, order, tol=per_pair_tol)
            log_z += value
            tail += bound
        if tail > config.partition_tail_tol:
            raise TruncationError(f"partition function tail {tail:.2e} above target", tail_bound=tail)
        logger.info(f"Partition function of '{p.label}' over {len(pairs)} pairs, tail bound {tail:.2e}")
        return math.exp(log_z)

    def marginal_weight(self, lam: PartitionLike, t: int, p: SchurProcessParams) -> float:
        """
        s_lam(prod_{m<t} phi^+[m]) s_lam(prod_{m>t} phi^-[m]).

        Args:
            lam: Partition at time t
            t: Integer time
            p: Process parameters

        Returns:
            Unnormalized one-time marginal
        """
        left = Specialization()
        right = minus_side()
        for m2, pair in p.phi.items():
            if m2 < 2 * t:
                left = left.times(pair.plus)
            else:
                right = right.times(pair.minus)
        parts = as_parts(lam)
        return self.schur.skew_schur(parts, (), left) * self.schur.skew_schur(parts, (), right)

    # ------------------------------------------------------------ parameters

    def window_for(self, q: float, tol: Optional[float] = None) -> int:
        """Smallest M with q^M below ``tol``"""
        tol = config.mq_window_tol if tol is None else tol
        return max(1, math.ceil(math.log(tol) / math.log(q)))

    def mq_params(self, q: float, M: Optional[int] = None) -> SchurProcessParams:
        """
        Measure q^{|pi|} on plane partitions.

        Args:
            q: Weight parameter in (0, 1)
            M: Window half-width; chosen so that q^M < ``config.mq_window_tol`` when omitted

        Returns:
            phi[m] = (1 - q^{|m|} z)^{-1} for m < 0, (1 - q^{|m|}/z)^{-1} for m > 0
        """
        return self.anisotropic_params(q, abs, M, label="mq")

    def anisotropic_params(
        self,
        q: float,
        V: Callable[[float], float],
        M: Optional[int] = None,
        label: str = "anisotropic",
    ) -> SchurProcessParams:
        """
        As ``mq_params`` with q^{|m|} replaced by q^{V(m)}.

        Args:
            q: Weight parameter in (0, 1)
            V: Exponent profile on half-integers; +inf switches a factor off
            M: Window half-width
            label: Name recorded in the parameters

        Returns:
            Process parameters on the window [-M, M]
        """
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        if M is None:
            M = self.window_for(q)
            omitted = sum(n * q ** n for n in range(M + 1, 4 * M))
            logger.info(f"Window M={M} for q={q}; omitted factors bounded by {omitted:.2e}")
        if M < 1:
            raise ConfigurationError(f"Window half-width must be positive, got {M}")
        phi: Dict[int, SpecializationPair] = {}
        for k in range(M):
            m = k + 0.5
            for sign in (-1, 1):
                exponent = V(sign * m)
                if math.isinf(exponent):
                    continue
                factor = Factor(kind=FactorKind.GEOM_POLE, param=q ** exponent)
                if sign < 0:
                    phi[-(2 * k + 1)] = SpecializationPair(plus=plus_side(factor))
                else:
                    phi[2 * k + 1] = SpecializationPair(minus=minus_side(factor))
        return SchurProcessParams(t_min=-M, t_max=M, phi=phi, label=label, q=q)

    def plancherel_params(self, alpha: float) -> SchurProcessParams:
        """
        Poissonized Plancherel measure: e^{sqrt(alpha) z} at m = -1/2, e^{sqrt(alpha)/z} at m = 1/2.

        Args:
            alpha: Poissonization parameter

        Returns:
            Process parameters on the window [-1, 1]
        """
        if alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        factor = Factor(kind=FactorKind.EXP, param=math.sqrt(alpha))
        phi = {
            -1: SpecializationPair(plus=plus_side(factor)),
            1: SpecializationPair(minus=minus_side(factor)),
        }
        return SchurProcessParams(t_min=-1, t_max=1, phi=phi, label="plancherel")

    def restrict(self, p: SchurProcessParams, times: Sequence[int]) -> SchurProcessParams:
        """
        Restriction to the slices at ``times``.

        The k-th requested time becomes time k of the new process; the
        specialization at k - 1/2 multiplies all phi[m] with
        times[k-1] < m < times[k] (window ends at both extremes).

        Args:
            p: Process parameters
            times: Strictly increasing integer times in [t_min, t_max]

        Returns:
            Process parameters on the window [-1, len(times)]

        Raises:
            ConfigurationError: If times are not strictly increasing or leave the window
        """
        times = list(times)
        if not times:
            raise ConfigurationError("restrict needs at least one time")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigurationError(f"times must be strictly increasing, got {times}")
        if times[0] < p.t_min or times[-1] > p.t_max:
            raise ConfigurationError(f"times {times} leave the window [{p.t_min}, {p.t_max}]")

        edges = [p.t_min] + times + [p.t_max]
        phi: Dict[int, SpecializationPair] = {}
        for k in range(len(times) + 1):
            lo, hi = edges[k], edges[k + 1]
            combined = SpecializationPair()
            for m2, pair in p.phi.items():
                if 2 * lo < m2 < 2 * hi:
                    combined = combined.times(pair)
            phi[2 * k - 1] = combined
        return SchurProcessParams(
            t_min=-1,
            t_max=len(times),
            phi=phi,
            label=f"{p.label}|restricted{times}",
            q=p.q,
        )

    # --------------------------------------------------------------- volumes

    def expected_volume(self, q: float) -> float:
        """
        E|pi| = sum_n n^2 q^n / (1 - q^n) under q^{|pi|}.

        Args:
            q: Weight parameter in (0, 1)

        Returns:
            Expected volume, tail below ``config.partition_tail_tol``
        """
        n = self._series_terms(q, power=2)
        k = np.arange(1, n + 1, dtype=float)
        qk = q ** k
        return float(np.sum(k ** 2 * qk / -np.expm1(k * math.log(q))))

    def volume_variance(self, q: float) -> float:
        """
        Var|pi| = q d/dq E|pi| = sum_n n^3 q^n / (1 - q^n)^2.

        Args:
            q: Weight parameter in (0, 1)

        Returns:
            Variance of the volume
        """
        n = self._series_terms(q, power=3, squared=True)
        k = np.arange(1, n + 1, dtype=float)
        qk = q ** k
        return float(np.sum(k ** 3 * qk / np.expm1(k * math.log(q)) ** 2))

    def mcmahon_product(self, q: float, n_max: int = 60) -> float:
        """Partial product prod_{n <= n_max} (1 - q^n)^{-n}"""
        n = np.arange(1, n_max + 1, dtype=float)
        return float(np.exp(-np.sum(n * np.log1p(-(q ** n)))))

    def plane_partition_counts(self, n_max: int) -> List[int]:
        """
        Coefficients of prod_k (1 - q^k)^{-k} up to q^{n_max}.

        Args:
            n_max: Highest power

        Returns:
            Number of plane partitions of each n = 0..n_max
        """
        counts = [1] + [0] * n_max
        for k in range(1, n_max + 1):
            # multiply by (1 - q^k)^{-1} k times
            for _ in range(k):
                for n in range(k, n_max + 1):
                    counts[n] += counts[n - k]
        return counts

    def _series_terms(self, q: float, power: int, squared: bool = False) -> int:
        """Number of terms so that the remainder of sum n^power q^n/(1-q^n)^e is below tolerance"""
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        tol = config.partition_tail_tol
        denom = (1.0 - q) ** (2 if squared else 1)
        n = 1
        # remainder bounded by a geometric majorant once n^power q^n decreases
        while True:
            ratio = q * ((n + 1) / n) ** power
            term = n ** power * q ** n / denom
            if ratio < 1.0 and term * ratio / (1.0 - ratio) < tol:
                return n
            n += 1


process_service = ProcessService()


def weight(s: SliceSequence, p: SchurProcessParams) -> float:
    return process_service.weight(s, p)


def partition_function(p: SchurProcessParams, order: Optional[int] = None) -> float:
    return process_service.partition_function(p, order)


def mq_params(q: float, M: Optional[int] = None) -> SchurProcessParams:
    return process_service.mq_params(q, M)


def anisotropic_params(q: float, V: Callable[[float], float], M: Optional[int] = None) -> SchurProcessParams:
    return process_service.anisotropic_params(q, V, M)


def plancherel_params(alpha: float) -> SchurProcessParams:
    return process_service.plancherel_params(alpha)


def restrict(p: SchurProcessParams, times: Sequence[int]) -> SchurProcessParams:
    return process_service.restrict(p, times)


def marginal_weight(lam: PartitionLike, t: int, p: SchurProcessParams) -> float:
    return process_service.marginal_weight(lam, t, p)


def expected_volume(q: float) -> float:
    return process_service.expected_volume(q)


def volume_variance(q: float) -> float:
    return process_service.volume_variance(q)
