"""
Oracle suites comparing the exact formulas against brute force, closed
forms and independent quadratures.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Tuple

from scipy.special import zeta

from app.kernels import KernelFactory
from app.schemas import (
    BulkPoint,
    KernelQuery,
    QuadratureSpec,
    RunConfig,
    SuiteResult,
    TilePoint,
    VerificationReport,
)
from app.services.asympt_service import AsymptService
from app.services.enumeration_service import EnumerationService
from app.services.kernel_service import KernelService
from app.services.process_service import ProcessService
from app.services.sampler_service import SamplerService
from core.config import config

logger = logging.getLogger(__name__)

DEFAULT_SUITES = ("mcmahon", "kernel_bruteforce", "beta_identity", "restriction", "sampler_tv")
OPTIONAL_SUITES = ("plancherel", "volume_law", "limit_shape")

BETA_POINTS = ((0.0, 0.0), (1.0, -1.0), (0.5, 0.2))
LARGE_ALPHA = 400.0


def _q_or(cfg: RunConfig, default: float) -> float:
    """q from the flags if one was given, else the suite's own default"""
    return cfg.effective_q if (cfg.q is not None or cfg.r is not None) else default


class VerificationService:
    """
    Runs verification suites; a failing suite is reported and the rest
    still run.
    """

    def __init__(self):
        """Initialize verification service"""
        self.process = ProcessService()
        self.enumeration = EnumerationService()
        self.kernels = KernelService()
        self.asympt = AsymptService()
        self.sampler = SamplerService()
        self.factory = KernelFactory()
        self._suites: Dict[str, Callable[[RunConfig], SuiteResult]] = {
            "mcmahon": self.suite_mcmahon,
            "kernel_bruteforce": self.suite_kernel_bruteforce,
            "beta_identity": self.suite_beta_identity,
            "restriction": self.suite_restriction,
            "sampler_tv": self.suite_sampler_tv,
            "plancherel": self.suite_plancherel,
            "volume_law": self.suite_volume_law,
            "limit_shape": self.suite_limit_shape,
        }
        logger.info("VerificationService initialized")

    @property
    def available(self) -> List[str]:
        return list(self._suites)

    def run(self, cfg: RunConfig, names: Optional[List[str]] = None) -> VerificationReport:
        """
        Execute the requested suites in order.

        Args:
            cfg: Run configuration
            names: Suite names, the default suites when omitted

        Returns:
            Report with one SuiteResult per suite

        Raises:
            ValueError: For unknown suite names
        """
        names = list(names or cfg.suites or DEFAULT_SUITES)
        unknown = [n for n in names if n not in self._suites]
        if unknown:
            raise ValueError(f"Unknown suites {unknown}, available: {self.available}")

        report = VerificationReport()
        for name in names:
            logger.info(f"Running suite {name}")
            start = time.perf_counter()
            try:
                result = self._suites[name](cfg)
            except Exception as e:
                logger.error(f"Suite {name} failed: {e}")
                result = SuiteResult(name=name, success=False, error=str(e))
            result.runtime = time.perf_counter() - start
            level = logging.INFO if result.success else logging.ERROR
            logger.log(level, f"Suite {name}: {'pass' if result.success else 'FAIL'} (max error {result.max_error})")
            report.results.append(result)
        return report

    @staticmethod
    def _require(result: SuiteResult, ok: bool, message: str) -> None:
        """Fail the suite on an extra check, keeping the first error message"""
        if not ok:
            result.success = False
            result.error = result.error or message

    def _result(self, name: str, errors: List[float], tol: float, **metadata) -> SuiteResult:
        worst = max(errors) if errors else 0.0
        return SuiteResult(
            name=name,
            success=worst <= tol,
            max_error=worst,
            tolerance=tol,
            checks=len(errors),
            error=None if worst <= tol else f"max error {worst:.3e} above {tol:.1e}",
            metadata=metadata,
        )

    # ------------------------------------------------------------------ suites

    def suite_mcmahon(self, cfg: RunConfig) -> SuiteResult:
        """Enumerated counts by volume, Z against the enumeration and against the product"""
        q = cfg.effective_q
        cutoff = min(cfg.cutoff, 10)
        window = self.process.mq_params(q, M=cfg.cutoff + 1)
        ensemble = self.enumeration.enumerate_configs(window, cfg.cutoff)
        counts = ensemble.counts_by_volume()[: cutoff + 1]
        expected = self.process.plane_partition_counts(cutoff)
        errors = [float(abs(a - b)) for a, b in zip(counts, expected)]

        z_window = self.process.partition_function(window)
        if ensemble.tail_bound > 1e-8:
            logger.warning(f"Enumeration tail bound {ensemble.tail_bound:.2e} at q={q}, cutoff {cfg.cutoff}")
        allowed = 1e-8 + 2.0 * ensemble.tail_bound
        errors.append(max(0.0, abs(z_window - ensemble.normalization) / z_window - allowed))

        full = self.process.mq_params(q)
        z_full = self.process.partition_function(full)
        product = self.process.mcmahon_product(q, max(60, full.t_max))
        errors.append(max(0.0, abs(z_full - product) - 1e-10))
        return self._result(
            "mcmahon",
            errors,
            0.0,
            counts=counts,
            expected=expected,
            partition_function=z_full,
            tail_bound=ensemble.tail_bound,
        )

    def suite_kernel_bruteforce(self, cfg: RunConfig) -> SuiteResult:
        """1- and 2-point determinants of K_3D against enumeration"""
        q = cfg.effective_q
        params = self.process.mq_params(q)
        ensemble = self.enumeration.enumerate_configs(params, cfg.cutoff)
        kernel = self.factory.create_kernel("3d", q=q, quad=QuadratureSpec(tol=min(cfg.tol, 1e-10)))
        sites = [TilePoint(t=t, h2=h2) for t in range(-2, 3) for h2 in range(-6, 7) if (h2 + t + 1) % 2 == 0]
        cache: Dict[Tuple[TilePoint, TilePoint], float] = {}

        def entry(u: TilePoint, v: TilePoint) -> float:
            if (u, v) not in cache:
                cache[(u, v)] = kernel.entry(u, v)
            return cache[(u, v)]

        tol = 1e-6 + ensemble.tail_bound
        errors = []
        for size in (1, 2):
            for subset in itertools.combinations(sites, size):
                exact = self.kernels.correlation_det(list(subset), entry)
                brute = self.enumeration.correlation_bruteforce(subset, params, cfg.cutoff, ensemble)
                errors.append(abs(exact - brute))
        return self._result("kernel_bruteforce", errors, tol, q=q, cutoff=cfg.cutoff, sites=len(sites))

    def suite_beta_identity(self, cfg: RunConfig) -> SuiteResult:
        """Arc integral against the double contour integral, and the kernel sum form"""
        errors = []
        for tau, chi in BETA_POINTS:
            b = BulkPoint(tau=tau, chi=chi)
            z_star = self.asympt.critical_points(b).z_star
            for k in range(-5, 6):
                for l in range(-5, 6):
                    arc = self.asympt.incomplete_beta(k, l, z_star, "+" if k >= 0 else "-")
                    double = self.asympt.beta_double_integral(k, l, b)
                    errors.append(abs(arc - double))

        p = self.process.mq_params(0.3)
        quad = QuadratureSpec(tol=1e-11)
        for t1, x1, t2, x2 in ((0, 0.5, 0, 0.5), (1, -0.5, 0, 1.5), (-1, 1.5, 1, -0.5), (2, 0.5, -1, 0.5)):
            query = KernelQuery.from_halves(t1, x1, t2, x2)
            errors.append(abs(self.kernels.kernel_sum_repr(p, query, 60) - self.kernels.kernel_entry(p, query, quad)))
        return self._result("beta_identity", errors, 1e-8, bulk_points=[list(b) for b in BETA_POINTS])

    def suite_restriction(self, cfg: RunConfig) -> SuiteResult:
        """Correlations of the full process and of its restriction to a time subset"""
        q = _q_or(cfg, 0.05)
        cutoff = cfg.cutoff
        p = self.process.mq_params(q)
        times = [-2, 0, 1]
        restricted = self.process.restrict(p, times)
        full = self.enumeration.enumerate_configs(p, cutoff)
        small = self.enumeration.enumerate_configs(restricted, cutoff)
        sites = [(k, t, x2) for k, t in enumerate(times) for x2 in (-3, -1, 1, 3)]
        errors = []
        for size in (1, 2):
            for subset in itertools.combinations(sites, size):
                a = self.enumeration.correlation_bruteforce([(t, x2) for _, t, x2 in subset], p, cutoff, full)
                b = self.enumeration.correlation_bruteforce([(k, x2) for k, _, x2 in subset], restricted, cutoff, small)
                errors.append(abs(a - b))
        for k, t in enumerate(times):
            law = self.enumeration.marginal_distribution(full, t)
            small_law = self.enumeration.marginal_distribution(small, k)
            errors.extend(abs(law.get(lam, 0.0) - small_law.get(lam, 0.0)) for lam in set(law) | set(small_law))
        return self._result("restriction", errors, 1e-10, q=q, times=times)

    def suite_sampler_tv(self, cfg: RunConfig) -> SuiteResult:
        """Total variation of the Metropolis histogram on a small box, majority of three seeds"""
        q = _q_or(cfg, 0.5)
        box = tuple(cfg.box)
        tvs = [self.sampler.total_variation(q, box, cfg.steps, cfg.seed + k, self.enumeration) for k in range(3)]
        passed = sum(tv <= 0.01 for tv in tvs)
        result = self._result("sampler_tv", [sorted(tvs)[1]], 0.01, q=q, box=list(box), tvs=tvs)
        result.success = passed >= 2
        return result

    def suite_plancherel(self, cfg: RunConfig) -> SuiteResult:
        """Plancherel kernel diagonal against partitions of size at most 20"""
        alpha = cfg.alpha
        p = self.process.plancherel_params(alpha)
        ensemble = self.enumeration.enumerate_configs(p, 20)
        kernel = self.factory.create_kernel("plancherel", alpha=alpha, quad=QuadratureSpec(tol=1e-11))
        errors = []
        for k in range(-5, 5):
            x = k + 0.5
            point = kernel.parse_point((0, x))
            exact = kernel.entry(point, point)
            brute = self.enumeration.correlation_bruteforce([point], p, 20, ensemble)
            errors.append(abs(exact - brute))
        result = self._result("plancherel", errors, 1e-8 + ensemble.tail_bound, alpha=alpha)

        size = self.kernels.expected_slice_size(p, 0, 20, QuadratureSpec(tol=1e-11))
        result.metadata["expected_size"] = size
        self._require(result, abs(size - alpha) <= 1e-6 * alpha, f"E|lambda| = {size:.8f} differs from alpha = {alpha}")

        # density at x = 1/2 for large alpha against theta/pi at xi = 0
        large = self.kernels.kernel_planch(0.5, 0.5, LARGE_ALPHA)
        result.metadata["large_alpha_diagonal"] = large
        limit = self.asympt.planch_kernel_limit(0, 0.0)
        self._require(
            result,
            abs(large - limit) <= 0.05,
            f"diagonal {large:.4f} at alpha={LARGE_ALPHA} is more than 0.05 from the sine-kernel limit {limit:.4f}",
        )
        return result

    def suite_limit_shape(self, cfg: RunConfig) -> SuiteResult:
        """Limit shape against the Cerf-Kenyon form, the integrated density and its three-fold symmetry"""
        points = self.asympt.sample_bulk_points(10, cfg.seed)
        errors, height_errors = [], []
        for b in points:
            shape = self.asympt.limit_shape(b)
            ck = self.asympt.ck_parametrization(*self.asympt.ck_weights(b))
            errors.append(max(abs(a - e) for a, e in zip(shape, ck)))
            errors.append(self.asympt.symmetry_defect(b))
            height_errors.append(abs(shape[2] - self.asympt.height_from_density(b)))
        result = self._result("limit_shape", errors, config.ck_tol, points=[[b.tau, b.chi] for b in points])
        worst = max(height_errors)
        result.metadata["max_height_error"] = worst
        self._require(result, worst <= 1e-8, f"height differs from the integrated density by {worst:.2e}")
        return result

    def suite_volume_law(self, cfg: RunConfig) -> SuiteResult:
        """r^3 E|pi| -> 2 zeta(3) and r^4 Var|pi| -> 6 zeta(3), errors shrinking as r halves"""
        z3 = float(zeta(3))
        rs = (0.05, 0.025)
        mean_err = [abs(r ** 3 * self.process.expected_volume(math.exp(-r)) / (2 * z3) - 1.0) for r in rs]
        var_err = [abs(r ** 4 * self.process.volume_variance(math.exp(-r)) / (6 * z3) - 1.0) for r in rs]
        errors = [mean_err[0], var_err[0]]
        result = self._result("volume_law", errors, 0.05, mean_errors=mean_err, variance_errors=var_err)
        if mean_err[1] >= mean_err[0] or var_err[1] >= var_err[0]:
            result.success = False
            result.error = "relative error does not decrease as r halves"
        return result
