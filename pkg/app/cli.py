"""
Command-line front end: verify, kernel, density, limit-shape and sample.

Output CSV columns:
  density      tau, chi, theta, rho
  limit-shape  tau, chi, x, y, z
  sample       tau_lo, tau_hi, chi_lo, chi_hi, empirical, predicted
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from tqdm import tqdm

from app.kernels import BaseKernel, KernelFactory
from app.schemas import BulkPoint, Classification, GridSpec, OutputFormat, RunConfig, Subcommand
from app.services.asympt_service import AsymptService
from app.services.figure_service import FigureService
from app.services.sampler_service import SamplerService
from app.services.storage_service import StorageService
from app.services.verification_service import DEFAULT_SUITES, OPTIONAL_SUITES, VerificationService
from core.config import config
from core.exceptions import SchurLabError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _pair(text: str) -> List[float]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got '{text}'")
    return [float(p) for p in parts]


def _box(text: str) -> List[int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'a,b,c', got '{text}'")
    return [int(p) for p in parts]


def _points(text: str) -> List[List[float]]:
    return [_pair(chunk) for chunk in text.split(";") if chunk.strip()]


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand"""
    common = argparse.ArgumentParser(add_help=False)
    weight = common.add_mutually_exclusive_group()
    weight.add_argument("--q", type=float, default=None, help="weight parameter q in (0,1)")
    weight.add_argument("--r", type=float, default=None, help="alternative parameter, q = exp(-r)")
    common.add_argument("--alpha", type=float, default=None, help="Plancherel parameter")
    common.add_argument("--cutoff", type=int, default=None, help="volume cutoff of brute-force ensembles")
    common.add_argument("--box", type=_box, default=None, help="sampler box a,b,c")
    common.add_argument("--grid", type=str, default=None, help="tmin:tmax:n,cmin:cmax:m")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    common.add_argument("--epsilon", type=float, default=None, help="contour separation")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--out", type=Path, default=None, help="output path")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--config", type=Path, default=None, help="JSON run configuration, overridden by flags")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(prog="schurlab", description="Schur process kernels, oracles and limit shapes")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    verify.add_argument("--steps", type=int, default=None, help="Metropolis steps for the sampler suite")
    verify.add_argument(
        "--suites",
        type=lambda s: s.split(","),
        default=None,
        help=f"comma-separated subset of {', '.join(DEFAULT_SUITES + OPTIONAL_SUITES)}",
    )

    kernel = sub.add_parser("kernel", parents=[common], help="evaluate kernel entries or determinants")
    kernel.add_argument("--kind", choices=sorted(KernelFactory().get_available_kernels()), default=None)
    kernel.add_argument("--points", type=_points, default=None, help="'t,pos;t,pos;...' (pos = h for 3d/bulk, x otherwise)")
    kernel.add_argument("--queries-file", type=Path, default=None, help="JSON lines with first/second or points")
    kernel.add_argument("--determinant", action="store_true", default=None, help="det over the point set")
    kernel.add_argument("--bulk", type=_pair, default=None, help="bulk position tau,chi for --kind bulk")

    sub.add_parser("density", parents=[common], help="density grid CSV and level-set SVG")
    sub.add_parser("limit-shape", parents=[common], help="limit-shape mesh CSV")

    sample = sub.add_parser("sample", parents=[common], help="Metropolis sample, tiling SVG and density CSV")
    sample.add_argument("--steps", type=int, default=None, help="Metropolis steps")
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """
    JSON config file first, then every flag that was given.

    Raises:
        ValidationError: If the merged configuration is invalid
    """
    data: Dict[str, Any] = {}
    if args.config is not None:
        data.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "verbose", "quiet")}
    if "grid" in flags:
        flags["grid"] = GridSpec.parse(flags["grid"])
    if "queries_file" in flags:
        flags["queries_file"] = str(flags["queries_file"])
    if "q" in flags or "r" in flags:
        data.pop("q", None)
        data.pop("r", None)
    data.update(flags)
    return RunConfig.model_validate(data)


class SchurLabCLI:
    """Runs one subcommand for a validated configuration"""

    def __init__(self, cfg: RunConfig, storage: Optional[StorageService] = None):
        self.cfg = cfg
        self.storage = storage or StorageService()
        self.asympt = AsymptService()

    def run(self) -> int:
        handlers = {
            Subcommand.VERIFY: self.cmd_verify,
            Subcommand.KERNEL: self.cmd_kernel,
            Subcommand.DENSITY: self.cmd_density,
            Subcommand.LIMIT_SHAPE: self.cmd_limit_shape,
            Subcommand.SAMPLE: self.cmd_sample,
        }
        return handlers[self.cfg.subcommand]()

    def _out(self, stem: str, suffix: str) -> Path:
        """--out with its suffix replaced, or the stem in the export directory"""
        path = self.cfg.out or Path(stem)
        return path.with_suffix(suffix)

    @staticmethod
    def _stored(*paths: Optional[str]) -> int:
        return EXIT_OK if all(paths) else EXIT_FAILURE

    def _grid_nodes(self) -> List[BulkPoint]:
        g = self.cfg.grid
        taus = np.linspace(g.tau_min, g.tau_max, g.tau_steps)
        chis = np.linspace(g.chi_min, g.chi_max, g.chi_steps)
        return [BulkPoint(tau=float(t), chi=float(c)) for t in taus for c in chis]

    # -------------------------------------------------------------- verify

    def cmd_verify(self) -> int:
        """Run the suites, print a pass/fail table; exit 0 iff all pass"""
        service = VerificationService()
        report = service.run(self.cfg, self.cfg.suites)
        print(f"{'suite':<20} {'result':<6} {'max error':>12} {'tolerance':>12} {'time [s]':>9}")
        for r in report.results:
            max_error = f"{r.max_error:.3e}" if r.max_error is not None else "-"
            tolerance = f"{r.tolerance:.1e}" if r.tolerance is not None else "-"
            print(f"{r.name:<20} {'pass' if r.success else 'FAIL':<6} {max_error:>12} {tolerance:>12} {r.runtime:>9.2f}")
        if self.cfg.out is not None:
            self.storage.store_json(report.model_dump(mode="json"), self._out("verify", ".json"), self.cfg.header())
        if not report.success:
            failed = next(r for r in report.results if not r.success)
            print(f"first failing suite: {failed.name}: {failed.error}", file=sys.stderr)
            return EXIT_FAILURE
        return EXIT_OK

    # -------------------------------------------------------------- kernel

    def _kernel_records(self, kernel: BaseKernel) -> List[Dict[str, Any]]:
        records: List[Dict[str, Any]] = []
        if self.cfg.queries_file is not None:
            lines = self.storage.read_jsonl(self.cfg.queries_file)
        elif self.cfg.determinant:
            lines = [{"points": [list(p) for p in self.cfg.points]}]
        else:
            lines = [{"first": list(p), "second": list(p)} for p in self.cfg.points]

        for line in lines:
            try:
                if "points" in line or self.cfg.determinant:
                    raw = line.get("points") or [line["first"], line["second"]]
                    points = [kernel.parse_point(p) for p in raw]
                    records.append({"points": raw, "probability": kernel.determinant(points)})
                else:
                    u = kernel.parse_point(line["first"])
                    v = kernel.parse_point(line["second"])
                    record = kernel.evaluate(u, v).model_dump()
                    record["N_used"] = record.pop("nodes_used")
                    records.append(record)
            except (SchurLabError, ValidationError, ValueError, KeyError) as e:
                logger.error(f"Failed kernel query {line}: {e}")
                records.append({"query": line, "error": str(e)})
        return records

    def cmd_kernel(self) -> int:
        """Kernel entries (one JSON record per query) or a determinant"""
        kernel = KernelFactory().from_run_config(self.cfg)
        records = self._kernel_records(kernel)
        if self.cfg.out is not None:
            if not self.storage.store_jsonl(records, self.cfg.out, self.cfg.header()):
                return EXIT_FAILURE
        else:
            for record in records:
                print(json.dumps(record, sort_keys=True, default=str))
        return EXIT_FAILURE if any(r.get("error") for r in records) else EXIT_OK

    # ------------------------------------------------------------- density

    def cmd_density(self) -> int:
        """Grid of theta*, rho* and the level-set figure"""
        rows = []
        for b in tqdm(self._grid_nodes(), desc="density", disable=not config.show_progress):
            theta, rho = self.asympt.theta_density(b)
            rows.append({"tau": b.tau, "chi": b.chi, "theta": theta, "rho": rho})
        paths = [self.storage.store_csv(rows, self._out("density", ".csv"), self.cfg.header())]
        if self.cfg.format == OutputFormat.SVG:
            svg = FigureService(self.asympt).density_levels(self.cfg.grid)
            paths.append(self.storage.store_svg(svg, self._out("density", ".svg"), self.cfg.header()))
        return self._stored(*paths)

    # --------------------------------------------------------- limit shape

    def cmd_limit_shape(self) -> int:
        """(tau, chi) -> (x, y, z) mesh"""
        rows = []
        for b in tqdm(self._grid_nodes(), desc="limit shape", disable=not config.show_progress):
            x, y, z = self.asympt.limit_shape(b)
            rows.append({"tau": b.tau, "chi": b.chi, "x": x, "y": y, "z": z})
        self._check_symmetry()
        paths =[self.storage.store_csv(rows, self._out("limit_shape", ".csv"), self.cfg.header())]
        if self.cfg.format == OutputFormat.SVG:
            svg = FigureService(self.asympt).limit_shape_mesh(rows, self.cfg.grid)
            paths.append(self.storage.store_svg(svg, self._out("limit_shape", ".svg"), self.cfg.header()))
        return self._stored(*paths)

    def _check_symmetry(self) -> float:
        """Largest three-fold symmetry defect over the bulk nodes of the grid"""
        bulk = [b for b in self._grid_nodes() if self.asympt.classify(b) == Classification.BULK]
        defect = max((self.asympt.symmetry_defect(b) for b in bulk), default=0.0)
        if defect > config.ck_tol:
            logger.warning(f"Limit-shape mesh symmetry defect {defect:.2e} above {config.ck_tol:.1e}")
        else:
            logger.info(f"Limit-shape mesh symmetry defect {defect:.2e} over {len(bulk)} bulk nodes")
        return defect

    # -------------------------------------------------------------- sample

    def cmd_sample(self) -> int:
        """Metropolis sample as JSON, its tiling as SVG and the empirical density as CSV"""
        cfg = self.cfg
        sampler = SamplerService()
        pi = sampler.mcmc_sample(cfg.effective_q, cfg.box, cfg.steps, cfg.seed)
        header = cfg.header()
        payload = {"plane_partition": pi.to_json(), "volume": sampler.combin.volume(pi)}
        paths = [self.storage.store_json(payload, self._out("sample", ".json"), header)]
        svg = FigureService(self.asympt).tiling(pi, cfg.box)
        paths.append(self.storage.store_svg(svg, self._out("sample", ".svg"), header))

        g = cfg.grid
        density = sampler.tile_density_grid(pi, cfg.effective_r, g)
        tau_edges = np.linspace(g.tau_min, g.tau_max, g.tau_steps)
        chi_edges = np.linspace(g.chi_min, g.chi_max, g.chi_steps)
        rows = []
        for i in range(len(tau_edges) - 1):
            for j in range(len(chi_edges) - 1):
                center = BulkPoint(tau=(tau_edges[i] + tau_edges[i + 1]) / 2, chi=(chi_edges[j] + chi_edges[j + 1]) / 2)
                empirical = float(density[i, j])
                rows.append({
                    "tau_lo": tau_edges[i],
                    "tau_hi": tau_edges[i + 1],
                    "chi_lo": chi_edges[j],
                    "chi_hi": chi_edges[j + 1],
                    "empirical": "" if math.isnan(empirical) else empirical,
                    "predicted": self.asympt.theta_density(center)[1],
                })
        paths.append(self.storage.store_csv(rows, self._out("sample", ".density.csv"), header))
        return self._stored(*paths)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, configure logging and run one subcommand.

    Returns:
        0 on success, 1 on suite or computation failure, 2 on usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = getattr(logging, config.log_level.upper(), logging.INFO)
    logging.getLogger().setLevel(level)

    try:
        cfg = load_run_config(args)
    except (ValidationError, ValueError, OSError) as e:
        print(f"schurlab: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return SchurLabCLI(cfg).run()
    except SchurLabError as e:
        logger.error(f"{cfg.subcommand.value} failed: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        print(f"schurlab: {e}", file=sys.stderr)
        return EXIT_USAGE
