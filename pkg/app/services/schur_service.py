"""
Specializations, skew Schur functions and transition weights.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from app.schemas import (
    Factor,
    FactorKind,
    LogCoeffs,
    Orientation,
    Specialization,
    SpecializationPair,
)
from app.services.combin_service import (
    PartitionLike,
    as_parts,
    is_contained,
    sub_partitions,
)
from core.config import config
from core.exceptions import TruncationError

logger = logging.getLogger(__name__)


def _factor_series(factor: Factor, n: int) -> np.ndarray:
    """Taylor coefficients of one factor up to u^n"""
    k = np.arange(n + 1)
    if factor.kind == FactorKind.GEOM_POLE:
        return factor.param ** k
    if factor.kind == FactorKind.LIN_ZERO:
        series = np.zeros(n + 1)
        series[0] = 1.0
        if n >= 1:
            series[1] = -factor.param
        return series
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n + 1)))))
    c = factor.param
    if c == 0:
        series = np.zeros(n + 1)
        series[0] = 1.0
        return series
    return np.sign(c) ** k * np.exp(k * math.log(abs(c)) - log_fact)


@lru_cache(maxsize=4096)
def _h_cached(factors: Tuple[Factor, ...], n: int) -> Tuple[float, ...]:
    h = np.zeros(n + 1)
    h[0] = 1.0
    for factor in factors:
        h = np.convolve(h, _factor_series(factor, n))[: n + 1]
    return tuple(h.tolist())


def _fits_strip(lam: Tuple[int, ...], mu: Tuple[int, ...], k: int) -> bool:
    """Every column of lam/mu has at most k boxes, i.e. lam_{i+k} <= mu_i"""
    for i in range(len(lam) - k):
        if lam[i + k] > (mu[i] if i < len(mu) else 0):
            return False
    return True


@lru_cache(maxsize=200_000)
def _skew_cached(lam: Tuple[int, ...], mu: Tuple[int, ...], factors: Tuple[Factor, ...]) -> float:
    if not is_contained(mu, lam):
        return 0.0
    if lam == mu:
        return 1.0
    if not factors:
        return 0.0
    spec = Specialization(factors=factors)
    strip = spec.strip_bound()
    if strip > 0 and not _fits_strip(lam, mu, strip):
        return 0.0
    if strip == 1:
        # single variable: a^{|lam/mu|} on horizontal strips
        return factors[0].param ** (sum(lam) - sum(mu))

    n = len(lam)
    h = _h_cached(factors, lam[0] + n)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            mu_j = mu[j] if j < len(mu) else 0
            k = lam[i] - mu_j - i + j
            if k >= 0:
                matrix[i, j] = h[k]
    return float(np.linalg.det(matrix))


@lru_cache(maxsize=200_000)
def _transition_cached(mu: Tuple[int, ...], lam: Tuple[int, ...], pair: SpecializationPair) -> float:
    plus, minus = pair.plus.factors, pair.minus.factors
    if not minus:
        return _skew_cached(lam, mu, plus)
    if not plus:
        return _skew_cached(mu, lam, minus)
    bound = tuple(min(a, b) for a, b in zip(mu, lam))
    total = 0.0
    for nu in sub_partitions(bound):
        left = _skew_cached(mu, nu, minus)
        if left == 0.0:
            continue
        total += left * _skew_cached(lam, nu, plus)
    return total


class SchurService:
    """
    Symmetric-function layer: h_k streams, Jacobi-Trudi determinants and
    the transition weights of the Schur process.
    """

    def __init__(self):
        """Initialize Schur service"""
        logger.info("SchurService initialized")

    def h_coeffs(self, s: Specialization, n: int) -> np.ndarray:
        """
        Complete homogeneous values h_0..h_n, the Taylor coefficients of the
        factor product.

        Args:
            s: Specialization
            n: Highest order

        Returns:
            Array of length n + 1 with h_0 = 1
        """
        if n < 0:
            raise ValueError(f"n must be nonnegative, got {n}")
        return np.array(_h_cached(s.factors, n))

    def skew_schur(self, lam: PartitionLike, mu: PartitionLike, s: Specialization) -> float:
        """
        Jacobi-Trudi determinant det(h_{lam_i - mu_j - i + j}).

        Args:
            lam: Outer shape
            mu: Inner shape
            s: Specialization

        Returns:
            s_{lam/mu}(s), zero when mu is not inside lam
        """
        return _skew_cached(as_parts(lam), as_parts(mu), s.factors)

    def transition_weight(self, mu: PartitionLike, lam: PartitionLike, phi: SpecializationPair) -> float:
        """
        S_phi(mu, lam) = sum_nu s_{mu/nu}(phi^-) s_{lam/nu}(phi^+).

        Args:
            mu: Slice before the transition
            lam: Slice after the transition
            phi: Specialization pair at the half-integer time in between

        Returns:
            Unnormalized transition weight
        """
        return _transition_cached(as_parts(mu), as_parts(lam), phi)

    def log_coeffs(self, s: Specialization, order: int) -> LogCoeffs:
        """
        Coefficients (log phi)_k for 1 <= |k| <= order.

        Args:
            s: Specialization
            order: Truncation order K

        Returns:
            LogCoeffs on the side of ``s``
        """
        if order < 1:
            raise ValueError(f"order must be at least 1, got {order}")
        k = np.arange(1, order + 1)
        values = np.zeros(order)
        for factor in s.factors:
            if factor.kind == FactorKind.GEOM_POLE:
                values += factor.param ** k / k
            elif factor.kind == FactorKind.LIN_ZERO:
                values -= factor.param ** k / k
            else:
                values[0] += factor.param
        return LogCoeffs(orientation=s.orientation, max_order=order, values=tuple(values.tolist()))

    def log_commutation(
        self,
        phi: Specialization,
        psi: Specialization,
        order: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> Tuple[float, float]:
        """
        Logarithm of the commutation constant and its tail bound.

        Args:
            phi: Plus-side specialization
            psi: Minus-side specialization
            order: Truncation order, chosen from ``tol`` when omitted
            tol: Tail bound target, ``config.series_tail_tol`` by default

        Returns:
            (sum_{k<=K} k (log phi)_k (log psi)_{-k}, bound on the omitted terms)

        Raises:
            TruncationError: If the requested order misses the tail bound
        """
        tol = config.series_tail_tol if tol is None else tol
        if phi.orientation != Orientation.PLUS or psi.orientation != Orientation.MINUS:
            raise ValueError("commutation constant needs a plus-side phi and a minus-side psi")
        if phi.is_trivial or psi.is_trivial:
            return 0.0, 0.0

        geo_phi = [f.radius for f in phi.factors if f.kind != FactorKind.EXP]
        geo_psi = [f.radius for f in psi.factors if f.kind != FactorKind.EXP]
        ratio = (max(geo_phi) if geo_phi else 0.0) * (max(geo_psi) if geo_psi else 0.0)
        count = len(geo_phi) * len(geo_psi)

        def tail(K: int) -> float:
            if count == 0 or ratio == 0.0:
                return 0.0
            return count * ratio ** (K + 1) / ((K + 1) * (1.0 - ratio))

        if ratio >= 1.0:
            raise TruncationError(f"log series diverges: |a b| = {ratio} >= 1")
        if order is None:
            order = 1
            while tail(order) > tol and order < 1_000_000:
                order *= 2
        bound = tail(order)
        if bound > tol:
            raise TruncationError(f"order {order} leaves tail {bound:.3e} above {tol:.1e}", tail_bound=bound)

        lp = np.array(self.log_coeffs(phi, order).values)
        lm = np.array(self.log_coeffs(psi, order).values)
        k = np.arange(1, order + 1)
        return float(np.sum(k * lp * lm)), bound

    def commutation_constant(
        self,
        phi: Specialization,
        psi: Specialization,
        order: Optional[int] = None,
    ) -> float:
        """
        exp(sum_k k (log phi)_k (log psi)_{-k}).

        Args:
            phi: Plus-side specialization
            psi: Minus-side specialization
            order: Truncation order K; chosen automatically when omitted

        Returns:
            Commutation constant

        Raises:
            TruncationError: If the remainder exceeds ``config.series_tail_tol``
        """
        value, bound = self.log_commutation(phi, psi, order)
        logger.debug(f"commutation constant truncated with tail bound {bound:.2e}")
        return math.exp(value)


schur_service = SchurService()


def h_coeffs(s: Specialization, n: int) -> np.ndarray:
    return schur_service.h_coeffs(s, n)


def skew_schur(lam: PartitionLike, mu: PartitionLike, s: Specialization) -> float:
    return schur_service.skew_schur(lam, mu, s)


def transition_weight(mu: PartitionLike, lam: PartitionLike, phi: SpecializationPair) -> float:
    return schur_service.transition_weight(mu, lam, phi)


def log_coeffs(s: Specialization, order: int) -> LogCoeffs:
    return schur_service.log_coeffs(s, order)


def commutation_constant(phi: Specialization, psi: Specialization, order: Optional[int] = None) -> float:
    return schur_service.commutation_constant(phi, psi, order)
