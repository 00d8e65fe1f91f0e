"""
Correlation kernels of Schur processes by contour quadrature.

Both contours are circles discretized with the periodic trapezoid rule;
half-integer positions are folded into integer powers so no branch of
sqrt(zw) is ever evaluated.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.schemas import (
    FactorKind,
    KernelQuery,
    KernelValue,
    QuadratureSpec,
    SchurProcessParams,
    Specialization,
    TilePoint,
)
from core.config import config
from core.exceptions import (
    ConfigurationError,
    PoleProximityError,
    QuadratureConvergenceError,
)

logger = logging.getLogger(__name__)

LogPhi = Callable[[np.ndarray], np.ndarray]

# entries of the Cauchy matrix evaluated per block
_BLOCK = 1 << 22
_POLE_TOL = 1e-12


def _log_side(s: Specialization, u: np.ndarray, invert: bool) -> np.ndarray:
    """Sum of log factor values of ``s`` at ``u``, negated when ``invert``"""
    total = np.zeros_like(u, dtype=complex)
    for f in s.factors:
        if f.kind == FactorKind.EXP:
            total += f.param * u
            continue
        base = 1.0 - f.param * u
        if np.min(np.abs(base)) < _POLE_TOL:
            raise PoleProximityError(f"evaluation within {_POLE_TOL} of a singular point of {f.kind.value}({f.param})")
        value = np.log(base)
        total += -value if f.kind == FactorKind.GEOM_POLE else value
    return -total if invert else total


def _annulus(specs: Iterable[Tuple[Specialization, bool]]) -> Tuple[float, float]:
    """
    Radii (inner, outer) between which every log Phi used is analytic.

    Plus-side factors are evaluated at 1/z and are singular on |z| = |a|;
    minus-side factors at z and singular on |z| = 1/|a|.
    """
    inner, outer = 0.0, math.inf
    for s, is_plus in specs:
        for f in s.factors:
            if f.kind == FactorKind.EXP or f.param == 0.0:
                continue
            if is_plus:
                inner = max(inner, abs(f.param))
            else:
                outer = min(outer, 1.0 / abs(f.param))
    return inner, outer


class KernelService:
    """
    Exact kernels: generic Schur-process kernel, the plane-partition
    kernel through quantum dilogarithms, and the Plancherel kernel.
    """

    def __init__(self):
        """Initialize kernel service"""
        logger.info("KernelService initialized")

    # ------------------------------------------------------------ Phi functions

    def log_phi_big(self, p: SchurProcessParams, t: int, z: np.ndarray) -> np.ndarray:
        """log of prod_{m>t} phi^-[m](z) / prod_{m<t} phi^+[m](1/z)"""
        z = np.asarray(z, dtype=complex)
        total = np.zeros_like(z)
        for m2, pair in p.phi.items():
            if m2 > 2 * t:
                total += _log_side(pair.minus, z, invert=False)
            else:
                total += _log_side(pair.plus, 1.0 / z, invert=True)
        return total

    def phi_big(self, p: SchurProcessParams, t: int, z: complex) -> complex:
        """
        Phi(t, z) over the finite window.

        Args:
            p: Process parameters
            t: Integer time
            z: Evaluation point away from factor singularities

        Returns:
            Value of Phi(t, z)

        Raises:
            PoleProximityError: If z is within 1e-12 of a zero or pole
        """
        return complex(np.exp(self.log_phi_big(p, t, np.array([z]))[0]))

    def log_qdilog(self, z: np.ndarray, q: float) -> np.ndarray:
        """sum_n log(1 - q^n z) truncated once q^n |z| < ``config.qdilog_tol``"""
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        z = np.asarray(z, dtype=complex)
        zmax = float(np.max(np.abs(z))) if z.size else 0.0
        total = np.zeros_like(z)
        if zmax == 0.0:
            return total
        terms = max(1, math.ceil(math.log(config.qdilog_tol / zmax) / math.log(q)) + 1)
        qn = 1.0
        for _ in range(terms):
            total += np.log(1.0 - qn * z)
            qn *= q
        return total

    def qdilog(self, z: complex, q: float) -> complex:
        """
        Quantum dilogarithm (z; q)_inf = prod_{n>=0} (1 - q^n z).

        Args:
            z: Argument
            q: Base in (0, 1)

        Returns:
            Truncated product; exactly 0 at z = q^{-n}
        """
        if not 0.0 < q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {q}")
        if z == 0:
            return 1.0 + 0.0j
        # z = q^{-n} is a zero of the product
        n = round(-math.log(abs(z)) / math.log(q))
        if n >= 0 and abs(z * q ** n - 1.0) < 1e-14:
            logger.warning(f"qdilog evaluated at its zero z = q^-{n}")
            return 0.0 + 0.0j
        return complex(np.exp(self.log_qdilog(np.array([z]), q)[0]))

    def log_phi_3d(self, t: int, z: np.ndarray, q: float) -> np.ndarray:
        """log Phi_3D(t, z) through quantum dilogarithms"""
        z = np.asarray(z, dtype=complex)
        half = math.sqrt(q)
        if t >= 0:
            num, den = half / z, half * q ** t * z
        else:
            num, den = half * q ** (-t) / z, half * z
        for arg in (num, den):
            if np.any(np.abs(arg) >= 1.0):
                far = np.abs(arg) >= 1.0
                # zeros of (arg; q) lie at q^{-n}
                n = np.log(np.abs(arg[far])) / -math.log(q)
                if np.any(np.abs(arg[far] - q ** -np.round(n)) < _POLE_TOL):
                    raise PoleProximityError(f"Phi_3D({t}, z) evaluated at a zero or pole")
        return self.log_qdilog(num, q) - self.log_qdilog(den, q)

    def phi_3d(self, t: int, z: complex, q: float) -> complex:
        """
        Phi_3D(t, z): (q^{1/2}/z; q)/(q^{1/2+t} z; q) for t >= 0 and
        (q^{1/2-t}/z; q)/(q^{1/2} z; q) for t <= 0.

        Args:
            t: Integer time
            z: Evaluation point
            q: Weight parameter

        Returns:
            Value of Phi_3D(t, z)
        """
        return complex(np.exp(self.log_phi_3d(t, np.array([z]), q)[0]))

    # ------------------------------------------------------------ quadrature

    def _adjust_epsilon(self, quad: QuadratureSpec, inner: float, outer: float) -> float:
        gap = min(outer - 1.0, 1.0 - inner)
        if gap <= 0.0:
            raise PoleProximityError(f"no analytic annulus around the unit circle: ({inner}, {outer})")
        eps = quad.epsilon
        if eps > (1.0 - config.pole_guard) * gap:
            eps = 0.5 * gap
            logger.warning(f"Contour separation reduced from {quad.epsilon} to {eps:.4g} (singular circles at {inner:.4g}, {outer:.4g})")
        return eps

    def _initial_nodes(self, quad: QuadratureSpec, eps: float, inner: float, outer: float) -> int:
        gaps = [math.log((1.0 + eps) / (1.0 - eps))]
        if math.isfinite(outer):
            gaps.append(math.log(outer / (1.0 + eps)))
        if inner > 0.0:
            gaps.append(math.log((1.0 - eps) / inner))
        wanted = math.log(1.0 / quad.tol) / min(gaps)
        n = quad.nodes
        cap = quad.nodes << quad.max_doublings
        while n < wanted and n < cap // 2:
            n *= 2
        return n

    def _cauchy_mean(self, z: np.ndarray, w: np.ndarray, f: np.ndarray, g: np.ndarray) -> complex:
        """mean_{j,k} f_j g_k / (z_j - w_k), summed in fixed block order"""
        n = len(z)
        block = max(1, _BLOCK // max(len(w), 1))
        total = 0.0 + 0.0j
        for start in range(0, n, block):
            stop = min(n, start + block)
            cauchy = 1.0 / (z[start:stop, None] - w[None, :])
            total += complex(f[start:stop] @ (cauchy @ g))
        return total / (len(z) * len(w))

    def _contour(
        self,
        log_phi1: LogPhi,
        log_phi2: LogPhi,
        x1_2: int,
        x2_2: int,
        ordered: bool,
        annulus: Tuple[float, float],
        quad: QuadratureSpec,
    ) -> Tuple[complex, int, float]:
        """
        (2 pi i)^{-2} oint oint z^{-x1+1/2} w^{x2+1/2} Phi1(z)/Phi2(w)/(z-w) dz/z dw/w.

        ``ordered`` puts the z circle outside the w circle.
        """
        inner, outer = annulus
        eps = self._adjust_epsilon(quad, inner, outer)
        rz, rw = (1.0 + eps, 1.0 - eps) if ordered else (1.0 - eps, 1.0 + eps)
        # integer exponents: -x1 + 1/2 and x2 + 1/2
        ez = (1 - x1_2) // 2
        ew = (x2_2 + 1) // 2

        def integral(n: int) -> complex:
            theta = 2.0 * math.pi * np.arange(n) / n
            z = rz * np.exp(1j * theta)
            w = rw * np.exp(1j * theta)
            f = np.exp(log_phi1(z) + ez * (math.log(rz) + 1j * theta))
            g = np.exp(-log_phi2(w) + ew * (math.log(rw) + 1j * theta))
            return self._cauchy_mean(z, w, f, g)

        n = self._initial_nodes(quad, eps, inner, outer)
        cap = quad.nodes << quad.max_doublings
        previous = integral(n)
        err = math.inf
        while n < cap:
            n *= 2
            current = integral(n)
            err = abs(current - previous)
            previous = current
            if err < quad.tol:
                return current, n, err
        raise QuadratureConvergenceError(
            f"kernel quadrature did not converge: last change {err:.2e} at {n} nodes",
            est_error=err,
            nodes=n,
        )

    def _finish(self, query: KernelQuery, result: Tuple[complex, int, float], quad: QuadratureSpec) -> KernelValue:
        value, nodes, err = result
        if abs(value.imag) > quad.tol:
            logger.warning(f"Kernel entry {query.to_json()} has imaginary part {value.imag:.2e}")
        return KernelValue(
            query=query.to_json(),
            value=value.real,
            nodes_used=nodes,
            est_error=err,
            imag_part=value.imag,
        )

    # ---------------------------------------------------------------- kernels

    def evaluate_entry(
        self,
        p: SchurProcessParams,
        query: KernelQuery,
        quad: Optional[QuadratureSpec] = None,
        ordered: Optional[bool] = None,
    ) -> KernelValue:
        """
        Kernel entry of a general Schur process with diagnostics.

        ``ordered`` puts the z circle outside the w circle; it defaults to
        t1 >= t2. At equal times both choices differ by the residue at
        z = w, which vanishes unless x1 = x2.
        """
        quad = quad or QuadratureSpec()
        t1, t2 = query.first.t, query.second.t
        if ordered is None:
            ordered = t1 >= t2
        specs = []
        for m2, pair in p.phi.items():
            specs.append((pair.plus, True))
            specs.append((pair.minus, False))
        result = self._contour(
            lambda z: self.log_phi_big(p, t1, z),
            lambda w: self.log_phi_big(p, t2, w),
            query.first.x2,
            query.second.x2,
            ordered,
            _annulus(specs),
            quad,
        )
        return self._finish(query, result, quad)

    def kernel_entry(
        self,
        p: SchurProcessParams,
        query: KernelQuery,
        quad: Optional[QuadratureSpec] = None,
        ordered: Optional[bool] = None,
    ) -> float:
        """
        K(t1, x1; t2, x2) by double contour quadrature.

        Args:
            p: Process parameters
            query: Pair of lattice points
            quad: Discretization; defaults from configuration
            ordered: Radius assignment override, see ``evaluate_entry``

        Returns:
            Real part of the kernel entry

        Raises:
            QuadratureConvergenceError: If node doubling does not reach ``quad.tol``
        """
        return self.evaluate_entry(p, query, quad, ordered).value

    def evaluate_3d(self, q1: TilePoint, q2: TilePoint, q: float, quad: Optional[QuadratureSpec] = None) -> KernelValue:
        """Plane-partition kernel entry with diagnostics"""
        quad = quad or QuadratureSpec()
        query = KernelQuery.from_tiles(q1, q2)
        root = math.sqrt(q)
        result = self._contour(
            lambda z: self.log_phi_3d(q1.t, z, q),
            lambda w: self.log_phi_3d(q2.t, w, q),
            query.first.x2,
            query.second.x2,
            q1.t >= q2.t,
            (root, 1.0 / root),
            quad,
        )
        return self._finish(query, result, quad)

    def kernel_3d(self, q1: TilePoint, q2: TilePoint, q: float, quad: Optional[QuadratureSpec] = None) -> float:
        """
        Correlation kernel of horizontal tiles for q^{|pi|}.

        Args:
            q1: Row tile center
            q2: Column tile center
            q: Weight parameter in (0, 1)
            quad: Discretization

        Returns:
            K_3D(q1, q2)
        """
        return self.evaluate_3d(q1, q2, q, quad).value

    def evaluate_planch(self, x2: int, y2: int, alpha: float, quad: Optional[QuadratureSpec] = None) -> KernelValue:
        """Plancherel kernel entry with diagnostics; positions doubled"""
        if alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        quad = quad or QuadratureSpec()
        query = KernelQuery(first={"t": 0, "x2": x2}, second={"t": 0, "x2": y2})
        c = math.sqrt(alpha)

        def log_phi(z: np.ndarray) -> np.ndarray:
            return c * (z - 1.0 / z)

        result = self._contour(log_phi, log_phi, x2, y2, True, (0.0, math.inf), quad)
        return self._finish(query, result, quad)

    def kernel_planch(self, x: float, y: float, alpha: float, quad: Optional[QuadratureSpec] = None) -> float:
        """
        Discrete Bessel-type kernel of the poissonized Plancherel measure at t = 0.

        Args:
            x: Half-integer row position
            y: Half-integer column position
            alpha: Poissonization parameter
            quad: Discretization

        Returns:
            K_Planch(x, y)
        """
        query = KernelQuery.from_halves(0, x, 0, y)
        return self.evaluate_planch(query.first.x2, query.second.x2, alpha, quad).value

    def correlation_det(self, points: Sequence, kernel: Callable) -> float:
        """
        det(K(u_i, u_j)) over a point set.

        Args:
            points: Points understood by ``kernel``
            kernel: Two-argument kernel function

        Returns:
            Correlation function of the set, 1 for the empty set
        """
        n = len(points)
        if n == 0:
            return 1.0
        if n > config.max_det_size:
            raise ConfigurationError(f"correlation determinant limited to {config.max_det_size} points, got {n}")
        matrix = np.array([[kernel(u, v) for v in points] for u in points], dtype=float)
        return float(np.linalg.det(matrix))

    # ------------------------------------------------------- sum representation

    def laurent_coeffs(
        self,
        log_f: LogPhi,
        radius: float,
        nodes: int,
        ks: Sequence[int],
        tol: Optional[float] = None,
    ) -> np.ndarray:
        """
        Laurent coefficients [z^k] exp(log_f) by FFT on |z| = radius.

        Args:
            log_f: Vectorized logarithm of the function
            radius: Circle inside the annulus of convergence
            nodes: Initial FFT size, doubled until the coefficients settle
            ks: Requested indices
            tol: Agreement required between successive sizes

        Returns:
            Coefficients at ``ks``
        """
        tol = config.default_quad_tol if tol is None else tol
        ks = np.asarray(ks, dtype=np.int64)
        n = max(nodes, 1 << int(np.ceil(np.log2(4 * (np.max(np.abs(ks)) + 1)))))
        previous = None
        for _ in range(config.max_doublings + 1):
            theta = 2.0 * math.pi * np.arange(n) / n
            values = np.exp(log_f(radius * np.exp(1j * theta)))
            coeffs = np.fft.fft(values) / n
            current = coeffs[ks % n] * radius ** (-ks.astype(float))
            if previous is not None and np.max(np.abs(current - previous)) < tol:
                return current
            previous = current
            n *= 2
        raise QuadratureConvergenceError(f"Laurent coefficients did not settle at {n // 2} nodes", nodes=n // 2)

    def kernel_sum_repr(self, p: SchurProcessParams, query: KernelQuery, M: int) -> float:
        """
        Finite-sum form of the kernel through Laurent coefficients of Phi and 1/Phi.

        Args:
            p: Process parameters
            query: Pair of lattice points
            M: Number of terms, m = 1/2, ..., M - 1/2

        Returns:
            Truncated sum, real part
        """
        t1, x1_2 = query.first.t, query.first.x2
        t2, x2_2 = query.second.t, query.second.x2
        m = np.arange(M)  # m - 1/2
        if t1 >= t2:
            a_idx = (x1_2 + 1) // 2 + m
            b_idx = -(x2_2 + 1) // 2 - m
            sign = 1.0
        else:
            a_idx = (x1_2 - 1) // 2 - m
            b_idx = -(x2_2 - 1) // 2 + m
            sign = -1.0
        a = self.laurent_coeffs(lambda z: self.log_phi_big(p, t1, z), 1.0, 256, a_idx)
        b = self.laurent_coeffs(lambda w: -self.log_phi_big(p, t2, w), 1.0, 256, b_idx)
        terms = a * b
        last = abs(terms[-1]) if len(terms) else 0.0
        if last > config.default_quad_tol:
            logger.warning(f"kernel sum not decayed at M={M}: last term {last:.2e}")
        else:
            logger.debug(f"kernel sum tail {last:.2e} at M={M}")
        return float(sign * np.sum(terms).real)

    # ---------------------------------------------------------------- occupancy

    def column_occupancy(
        self,
        t: int,
        h2_values: Iterable[int],
        q: float,
        quad: Optional[QuadratureSpec] = None,
    ) -> float:
        """Expected number of horizontal tiles among the given sites of column t"""
        return float(sum(self.kernel_3d(TilePoint(t=t, h2=h2), TilePoint(t=t, h2=h2), q, quad) for h2 in h2_values))

    def expected_slice_size(
        self,
        p: SchurProcessParams,
        t: int,
        window: int,
        quad: Optional[QuadratureSpec] = None,
    ) -> float:
        """
        E|lambda(t)| = sum_{x>0} x rho(x) + sum_{x<0} |x| (1 - rho(x)) over |x| < window.

        Args:
            p: Process parameters
            t: Integer time
            window: Positions x = +-1/2, ..., +-(window - 1/2)
            quad: Discretization

        Returns:
            Truncated expectation
        """
        total = 0.0
        for k in range(window):
            for x2 in (2 * k + 1, -(2 * k + 1)):
                rho = self.kernel_entry(p, KernelQuery(first={"t": t, "x2": x2}, second={"t": t, "x2": x2}), quad)
                total += (x2 / 2) * rho if x2 > 0 else (-x2 / 2) * (1.0 - rho)
        return total


kernel_service = KernelService()


def phi_big(p: SchurProcessParams, t: int, z: complex) -> complex:
    return kernel_service.phi_big(p, t, z)


def qdilog(z: complex, q: float) -> complex:
    return kernel_service.qdilog(z, q)


def phi_3d(t: int, z: complex, q: float) -> complex:
    return kernel_service.phi_3d(t, z, q)


def kernel_entry(p: SchurProcessParams, query: KernelQuery, quad: Optional[QuadratureSpec] = None) -> float:
    return kernel_service.kernel_entry(p, query, quad)


def kernel_3d(q1: TilePoint, q2: TilePoint, q: float, quad: Optional[QuadratureSpec] = None) -> float:
    return kernel_service.kernel_3d(q1, q2, q, quad)


def kernel_planch(x: float, y: float, alpha: float, quad: Optional[QuadratureSpec] = None) -> float:
    return kernel_service.kernel_planch(x, y, alpha, quad)


def correlation_det(points: Sequence, kernel: Callable) -> float:
    return kernel_service.correlation_det(points, kernel)


def kernel_sum_repr(p: SchurProcessParams, query: KernelQuery, M: int) -> float:
    return kernel_service.kernel_sum_repr(p, query, M)
