"""
Bulk asymptotics of the q^{|pi|} measure as q = e^{-r} -> 1.

Everything is computed for tau >= 0; negative tau is mapped by the
reflection symmetry of the measure.
"""

from __future__ import annotations

import cmath
import logging
import math
from typing import List, Literal, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from app.schemas import BulkPoint, Classification, CriticalData, TilePoint
from core.config import config
from core.exceptions import QuadratureConvergenceError, SingularEndpointError

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]


def _as_point(b) -> BulkPoint:
    if isinstance(b, BulkPoint):
        return b
    tau, chi = b
    return BulkPoint(tau=tau, chi=chi)


class AsymptService:
    """
    Action, critical points, local bulk kernels and the limit shape.
    """

    def __init__(self):
        """Initialize asymptotics service"""
        logger.info("AsymptService initialized")

    # ------------------------------------------------------------- dilogarithm

    def dilog(self, z: complex) -> complex:
        """
        Li_2(z) = sum z^n / n^2, continued with a cut along (1, +inf).

        Args:
            z: Argument

        Returns:
            Principal branch value from mpmath
        """
        z = complex(z)
        if z.imag == 0.0 and z.real > 1.0:
            logger.warning(f"dilog evaluated on its branch cut at z={z.real}")
        return complex(mpmath.polylog(2, z))

    def action(self, z: complex, b: BulkPoint) -> complex:
        """
        S(z; tau, chi) = -(tau/2 + chi) ln z - Li_2(1/z) + Li_2(e^{-tau} z).

        Args:
            z: Point off the cuts (0, 1) and (e^tau, inf)
            b: Bulk position

        Returns:
            Action value
        """
        b = _as_point(b).reflected()
        z = complex(z)
        return -(b.tau / 2 + b.chi) * cmath.log(z) - self.dilog(1.0 / z) + self.dilog(math.exp(-b.tau) * z)

    def action_derivative(self, z: complex, b: BulkPoint) -> complex:
        """z S'(z) = -(tau/2 + chi) - ln(1 - 1/z) - ln(1 - e^{-tau} z)"""
        b = _as_point(b).reflected()
        z = complex(z)
        return -(b.tau / 2 + b.chi) - cmath.log(1.0 - 1.0 / z) - cmath.log(1.0 - math.exp(-b.tau) * z)

    # ---------------------------------------------------------- critical points

    def bulk_boundaries(self, tau: float) -> Tuple[float, float]:
        """
        (chi_lower, chi_upper) = (-2 ln(2 cosh(tau/4)), -2 ln(2 sinh(tau/4))).

        The upper boundary is +inf at tau = 0.
        """
        tau = abs(tau)
        lower = -2.0 * math.log(2.0 * math.cosh(tau / 4))
        upper = math.inf if tau == 0.0 else -2.0 * math.log(2.0 * math.sinh(tau / 4))
        return lower, upper

    def classify(self, b: BulkPoint) -> Classification:
        lower, upper = self.bulk_boundaries(b.tau)
        if b.chi <= lower:
            return Classification.BELOW
        if b.chi >= upper:
            return Classification.ABOVE
        return Classification.BULK

    def critical_points(self, b: BulkPoint) -> CriticalData:
        """
        Roots of (1 - 1/z)(1 - e^{-tau} z) = e^{-tau/2 - chi}.

        With z = e^{tau/2} zeta the equation reads zeta + 1/zeta = B,
        B = 2 cosh(tau/2) - e^{-chi}; in the bulk zeta = e^{i theta*}.

        Args:
            b: Bulk position

        Returns:
            Critical point, z_star, theta_star and the classification
        """
        original = _as_point(b)
        b = original.reflected()
        kind = self.classify(b)
        big = 2.0 * math.cosh(b.tau / 2) - math.exp(-b.chi)
        if kind == Classification.BULK:
            theta = math.acos(max(-1.0, min(1.0, big / 2)))
            zeta = cmath.exp(1j * theta)
        else:
            theta = math.pi if kind == Classification.BELOW else 0.0
            # real root of larger modulus
            disc = math.sqrt(max(big * big - 4.0, 0.0))
            zeta = complex((big + math.copysign(disc, big)) / 2)
        z_c = math.exp(b.tau / 2) * zeta
        if kind == Classification.BULK:
            z_star = math.exp(-b.tau) * z_c
        else:
            z_star = complex(math.exp(-b.tau / 2) * (-1.0 if kind == Classification.BELOW else 1.0))
        return CriticalData(point=original, z_c=z_c, z_star=z_star, theta_star=theta, classification=kind)

    def theta_density(self, b: BulkPoint) -> Tuple[float, float]:
        """
        theta* = arccos(cosh(tau/2) - e^{-chi}/2) clamped to [0, pi], and rho = theta*/pi.

        Args:
            b: Bulk position

        Returns:
            (theta_star, rho)
        """
        data = self.critical_points(_as_point(b))
        return data.theta_star, data.rho

    def level_curve(self, k: int, taus: Sequence[float]) -> np.ndarray:
        """
        chi on the level set theta* = k pi / 8, chi = -ln(2 cosh(tau/2) - 2 cos(k pi/8)).

        Args:
            k: Level index 0..8; 0 is the upper and 8 the lower bulk boundary
            taus: Times at which to evaluate

        Returns:
            chi values, +inf where the level set escapes to infinity
        """
        if not 0 <= k <= 8:
            raise ValueError(f"level index must lie in 0..8, got {k}")
        taus = np.abs(np.asarray(taus, dtype=float))
        arg = 2.0 * np.cosh(taus / 2) - 2.0 * math.cos(k * math.pi / 8)
        with np.errstate(divide="ignore"):
            return np.where(arg > 0, -np.log(np.where(arg > 0, arg, 1.0)), np.inf)

    def lattice_point(self, b: BulkPoint, r: float) -> TilePoint:
        """Tile center nearest to (tau/r, chi/r)"""
        b = _as_point(b)
        t = int(round(b.tau / r))
        h2 = int(round(2 * b.chi / r))
        if (h2 + t + 1) % 2:
            h2 += 1 if 2 * b.chi / r > h2 else -1
        return TilePoint(t=t, h2=h2)

    # ------------------------------------------------------ incomplete beta

    def _arc_integral(self, k: int, l: int, radius: float, lo: float, hi: float) -> float:
        """(1/2 pi) int_lo^hi Re[(1 - R e^{i phi})^k R^{-l} e^{-i l phi}] dphi with Gauss-Legendre doubling"""
        if hi <= lo:
            return 0.0

        def estimate(n: int) -> float:
            x, wts = roots_legendre(n)
            phi = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
            w = radius * np.exp(1j * phi)
            vals = ((1.0 - w) ** k * radius ** (-l) * np.exp(-1j * l * phi)).real
            return 0.5 * (hi - lo) * float(np.dot(wts, vals)) / (2.0 * math.pi)

        n = 32
        previous = estimate(n)
        for _ in range(10):
            n *= 2
            current = estimate(n)
            if abs(current - previous) < config.arc_tol:
                return current
            previous = current
        raise QuadratureConvergenceError(f"arc integral k={k}, l={l} did not settle at {n} nodes", nodes=n)

    def incomplete_beta(self, k: int, l: int, z_star: complex, sign: Sign) -> float:
        """
        B_+-(k, l; z*) = (2 pi i)^{-1} int (1 - w)^k w^{-l-1} dw from conj(z*) to z*.

        The path is the arc |w| = |z*| through +|z*| for the plus sign and
        through -|z*| for the minus sign.

        Args:
            k: Time offset
            l: Height offset h + k/2
            z_star: Endpoint in the closed upper half plane
            sign: "+" or "-"

        Returns:
            Real kernel value

        Raises:
            SingularEndpointError: If k < 0 and the plus arc passes through w = 1
        """
        radius = abs(z_star)
        theta = abs(cmath.phase(z_star))
        if sign == "+":
            if k < 0 and abs(radius - 1.0) < 1e-15 and theta > 0.0:
                raise SingularEndpointError(f"plus arc through w = 1 with k={k} < 0")
            return self._arc_integral(k, l, radius, -theta, theta)
        if sign == "-":
            return -self._arc_integral(k, l, radius, theta, 2.0 * math.pi - theta)
        raise ValueError(f"sign must be '+' or '-', got {sign}")

    def bulk_correlation(self, offsets: Sequence[Tuple[int, float]], b: BulkPoint) -> float:
        """
        det[B_+-(dt_ij, dh_ij + dt_ij/2; z*)] over a finite set of tiles.

        Args:
            offsets: Tile positions (t_i, h_i) in lattice units
            b: Bulk position supplying z*

        Returns:
            Limiting correlation function
        """
        n = len(offsets)
        if n == 0:
            return 1.0
        z_star = self.critical_points(_as_point(b)).z_star
        matrix = np.empty((n, n))
        for i, (ti, hi) in enumerate(offsets):
            for j, (tj, hj) in enumerate(offsets):
                dt = ti - tj
                l = (hi - hj) + dt / 2
                if abs(l - round(l)) > 1e-9:
                    raise ValueError(f"offsets {offsets[i]}, {offsets[j]} violate the tile parity")
                matrix[i, j] = self.incomplete_beta(dt, int(round(l)), z_star, "+" if dt >= 0 else "-")
        return float(np.linalg.det(matrix))

    def sine_kernel(self, delta: float, theta: float) -> float:
        """sin(theta delta)/(pi delta), theta/pi on the diagonal"""
        if delta == 0:
            return theta / math.pi
        return math.sin(theta * delta) / (math.pi * delta)

    def beta_double_integral(
        self,
        k: int,
        l: int,
        b: BulkPoint,
        method: Literal["residue", "torus"] = "residue",
        nodes: int = 256,
    ) -> float:
        """
        (2 pi i)^{-2} oint oint z^{-k-1} w^{-l-1} (1 - z + z w)^{-1} dz dw
        over |w| = e^{-tau/2}, |z| = e^{tau/4 + chi/2}.

        ``residue`` integrates z in closed form, leaving a one-dimensional
        integral split where |z(1 - w)| = 1; ``torus`` is a tensor trapezoid
        on both circles and is only accurate to a few digits.

        Args:
            k: Time offset
            l: Height offset
            b: Bulk position
            method: "residue" or "torus"
            nodes: Nodes per circle for the torus method

        Returns:
            Real value of the double integral
        """
        b = _as_point(b).reflected()
        R = math.exp(-b.tau / 2)
        alpha = math.exp(b.tau / 4 + b.chi / 2)
        if method == "torus":
            theta = 2.0 * math.pi * (np.arange(nodes) + 0.5) / nodes
            z = alpha * np.exp(1j * theta)[:, None]
            w = R * np.exp(1j * theta)[None, :]
            vals = z ** (-k) * w ** (-l) / (1.0 - z + z * w)
            return float(np.mean(vals).real)
        if method != "residue":
            raise ValueError(f"unknown method {method}")

        # |alpha (1 - R e^{i phi})| < 1  <=>  cos(phi) > c
        c = (1.0 + R * R - alpha ** -2) / (2.0 * R)
        phi0 = math.acos(max(-1.0, min(1.0, c)))

        def integrand(phi: float) -> float:
            beta = 1.0 - R * cmath.exp(1j * phi)
            return (beta ** k * R ** (-l) * cmath.exp(-1j * l * phi)).real

        if k >= 0:
            lo, hi, sign = -phi0, phi0, 1.0
        else:
            lo, hi, sign = phi0, 2.0 * math.pi - phi0, -1.0
        if hi <= lo:
            return 0.0
        value, err = integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
        if err > 1e-9:
            logger.warning(f"beta double integral k={k}, l={l} quadrature error {err:.1e}")
        return sign * value / (2.0 * math.pi)

    # ------------------------------------------------------------ limit shape

    def limit_shape(self, b: BulkPoint) -> Tuple[float, float, float]:
        """
        Point (x, y, z) of the limit shape over (tau, chi).

        z = pi^{-1} int_0^{pi - theta*} s sin s / (cos s + cosh(tau/2)) ds,
        x = z - chi - tau/2, y = z - chi + tau/2.

        Args:
            b: Bulk position

        Returns:
            (x, y, z)
        """
        b = _as_point(b)
        theta, _ = self.theta_density(b)
        ch = math.cosh(abs(b.tau) / 2)
        upper = math.pi - theta
        if upper <= 0.0:
            z = 0.0
        else:
            z, _ = integrate.quad(lambda s: s * math.sin(s) / (math.cos(s) + ch), 0.0, upper, epsabs=1e-12, limit=200)
            z /= math.pi
        return z - b.chi - b.tau / 2, z - b.chi + b.tau / 2, z

    def height_from_density(self, b: BulkPoint) -> float:
        """
        int_{chi_lower}^{chi} (1 - rho*(tau, s)) ds, the height of the limit
        shape obtained by integrating the tile density.
        """
        b = _as_point(b)
        lower, _ = self.bulk_boundaries(b.tau)
        if b.chi <= lower:
            return 0.0
        value, _ = integrate.quad(
            lambda s: 1.0 - self.theta_density(BulkPoint(tau=b.tau, chi=s))[1],
            lower,
            b.chi,
            epsabs=1e-12,
            limit=200,
        )
        return value

    def ck_parametrization(self, A: float, B: float, C: float, nodes: Optional[int] = None) -> Tuple[float, float, float]:
        """
        (f - 2 ln A, f - 2 ln B, f - 2 ln C) with
        f = (2 pi^2)^{-1} int int_0^{2 pi} ln|A + B e^{iu} + C e^{iv}| du dv.

        Args:
            A: Positive weight
            B: Nonnegative weight
            C: Nonnegative weight
            nodes: Midpoint nodes per axis, ``config.ck_nodes`` by default

        Returns:
            Limit-shape coordinates, accurate to about ``config.ck_tol``
        """
        if min(A, B, C) < 0 or max(A, B, C) <= 0:
            raise ValueError(f"weights must be nonnegative and not all zero, got {(A, B, C)}")
        n = nodes or config.ck_nodes
        total = A + B + C
        slack = min(abs(A - B - C), abs(B - A - C), abs(C - A - B)) / total
        if slack < 1e-3 and min(A, B, C) > 0:
            logger.warning(f"Cerf-Kenyon weights {(A, B, C)} close to the degenerate triangle locus")
        u = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        # offset grid in v avoids sampling the logarithmic zero on the diagonal
        v = 2.0 * math.pi * (np.arange(n) + 0.25) / n
        values = np.log(np.abs(A + B * np.exp(1j * u)[:, None] + C * np.exp(1j * v)[None, :]))
        f = 2.0 * float(np.mean(values))
        return tuple(f - 2.0 * math.log(w) if w > 0 else math.inf for w in (A, B, C))

    def ck_weights(self, b: BulkPoint) -> Tuple[float, float, float]:
        """Weights (e^{chi/2 + tau/4}, e^{chi/2 - tau/4}, 1) giving (x, y, z) in order"""
        b = _as_point(b)
        return math.exp(b.chi / 2 + b.tau / 4), math.exp(b.chi / 2 - b.tau / 4), 1.0

    def permuted_bulk_point(self, b: BulkPoint) -> BulkPoint:
        """(tau', chi') whose limit-shape point is (y, z, x) of the point at (tau, chi)"""
        b = _as_point(b)
        return BulkPoint(tau=b.chi - b.tau / 2, chi=-b.chi / 2 - 3 * b.tau / 4)

    def symmetry_defect(self, b: BulkPoint) -> float:
        """max |shape(permuted point) - (y, z, x)| for the three-fold symmetry of the surface"""
        x, y, z = self.limit_shape(b)
        permuted = self.limit_shape(self.permuted_bulk_point(b))
        return max(abs(a - e) for a, e in zip(permuted, (y, z, x)))

    def sample_bulk_points(
        self,
        n: int,
        seed: int,
        tau_max: float = 2.0,
        chi_max: float = 2.0,
        margin: float = 0.05,
    ) -> List[BulkPoint]:
        """
        Uniform bulk points with |tau| <= tau_max, chi <= chi_max, kept
        ``margin`` away from both bulk boundaries.

        Args:
            n: Number of points
            seed: Seed of the generator
            tau_max: Largest |tau|
            chi_max: Cap on chi where the upper boundary is far away
            margin: Distance from the boundaries

        Returns:
            Points classified as bulk
        """
        rng = np.random.default_rng(seed)
        points: List[BulkPoint] = []
        while len(points) < n:
            tau = float(rng.uniform(-tau_max, tau_max))
            lower, upper = self.bulk_boundaries(tau)
            lo, hi = lower + margin, min(upper, chi_max) - margin
            if hi <= lo:
                continue
            b = BulkPoint(tau=tau, chi=float(rng.uniform(lo, hi)))
            if self.classify(b) == Classification.BULK:
                points.append(b)
        return points

    # ----------------------------------------------------------- Plancherel

    def planch_theta(self, xi: float) -> float:
        """theta = arccos(xi/2) for xi in [-2, 2]"""
        if not -2.0 <= xi <= 2.0:
            raise ValueError(f"xi must lie in [-2, 2], got {xi}")
        return math.acos(xi / 2)

    def planch_kernel_limit(self, delta: float, xi: float) -> float:
        """Sine-kernel prediction for the Plancherel kernel near x = xi sqrt(alpha)"""
        return self.sine_kernel(delta, self.planch_theta(xi))


asympt_service = AsymptService()


def dilog(z: complex) -> complex:
    return asympt_service.dilog(z)


def action(z: complex, b: BulkPoint) -> complex:
    return asympt_service.action(z, b)


def critical_points(b: BulkPoint) -> CriticalData:
    return asympt_service.critical_points(b)


def theta_density(b: BulkPoint) -> Tuple[float, float]:
    return asympt_service.theta_density(b)


def incomplete_beta(k: int, l: int, z_star: complex, sign: Sign) -> float:
    return asympt_service.incomplete_beta(k, l, z_star, sign)


def bulk_correlation(offsets: Sequence[Tuple[int, float]], b: BulkPoint) -> float:
    return asympt_service.bulk_correlation(offsets, b)


def beta_double_integral(k: int, l: int, b: BulkPoint, method: str = "residue") -> float:
    return asympt_service.beta_double_integral(k, l, b, method)


def limit_shape(b: BulkPoint) -> Tuple[float, float, float]:
    return asympt_service.limit_shape(b)


def ck_parametrization(A: float, B: float, C: float) -> Tuple[float, float, float]:
    return asympt_service.ck_parametrization(A, B, C)


def planch_theta(xi: float) -> float:
    return asympt_service.planch_theta(xi)
