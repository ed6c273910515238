"""
Rank Runner - exact rank of the bidisc product projection and rank growth on the tridisc
"""
import logging

import numpy as np

from core.operators import max_residual
from core.polydisc import (
    MultiBasis,
    SeparatedSymbolPair,
    defect_operator,
    product_of_inner_projections,
    require_separable,
    tridisc_growth,
)
from core.scenario_pool import standard_product
from core.spectral import compactness_verdict
from experiment_config import ExperimentConfig
from reports.report_io import file_manifest, with_metadata, write_csv, write_json

from .outcome import EXIT_OK, EXIT_RESIDUAL, RunOutcome, run_directory

logger = logging.getLogger(__name__)

SIGMA_COLUMNS = ["dim", "k", "sigma"]
GROWTH_COLUMNS = ["dim", "count", "expected"]


def build_pair(config: ExperimentConfig) -> SeparatedSymbolPair:
    """Symbol specs when both are given, otherwise standard products of the requested degrees."""
    if config.phi is not None and config.psi is not None:
        return SeparatedSymbolPair(
            config.phi.to_blaschke("phi"),
            config.psi.to_blaschke("psi"),
            config.phi.variable,
            config.psi.variable,
            config.n_vars,
        )
    p, q = config.rank_degrees()
    phi_variable, psi_variable = config.rank_variables()
    return SeparatedSymbolPair(standard_product(p), standard_product(q), phi_variable, psi_variable, config.n_vars)


class RankRunner:
    """Bidisc: rank table with rank = deg phi * deg psi. Tridisc: growth table with count = pqN."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def run(self) -> RunOutcome:
        pair = build_pair(self.config)
        require_separable(pair)
        if self.config.n_vars == 2:
            return self._bidisc(pair)
        return self._tridisc(pair)

    def _bidisc(self, pair: SeparatedSymbolPair) -> RunOutcome:
        config = self.config
        dims = config.rank_dims()
        p, q = pair.degrees
        logger.info("[Rank] bidisc degrees=(%d, %d) dims=%s", p, q, dims)

        family = []
        defect_gaps = []
        for N in dims:
            basis = MultiBasis.cube(2, N)
            product = product_of_inner_projections(pair, basis)
            delta = defect_operator(pair, basis, "proof")
            family.append((N, product))
            defect_gaps.append(max_residual(delta.matrix, product.matrix))
        report = compactness_verdict(family, **config.tolerances.verdict_options())

        expected = p * q
        defect_gap = float(np.max(defect_gaps))
        failures = []
        if report.verdict != "finite-rank-stable" or report.stable_rank != expected:
            failures.append(f"rank: verdict {report.verdict} with stable rank {report.stable_rank}, expected {expected}")
        if defect_gap > config.tolerances.projection_tol:
            failures.append(f"defect: differs from product of inner projections by {defect_gap:.3e}")

        out_dir = run_directory(config, "rank", f"bidisc-{p}x{q}")
        csv_path = write_csv(out_dir / "singular_values.csv", report.rows(), SIGMA_COLUMNS)
        payload = {
            "pair": pair.to_dict(),
            "spectral": report.to_dict(),
            "expected_rank": expected,
            "defect_gaps": defect_gaps,
            "failures": failures,
            "passed": not failures,
            "files": file_manifest([csv_path], out_dir),
        }
        report_path = write_json(out_dir / "rank_report.json", with_metadata(payload, config.snapshot()))
        return self._outcome(failures, [csv_path, report_path], {"ranks": report.rank_estimates, "verdict": report.verdict})

    def _tridisc(self, pair: SeparatedSymbolPair) -> RunOutcome:
        config = self.config
        dims = config.rank_dims()
        p, q = pair.degrees
        logger.info("[Rank] tridisc degrees=(%d, %d) dims=%s", p, q, dims)
        growth = tridisc_growth(pair, dims)

        failures = []
        if not growth.matches_expected:
            failures.append(f"growth: counts {growth.counts}, expected {growth.expected}")
        if len(dims) > 1 and not growth.strictly_increasing:
            failures.append(f"growth: counts {growth.counts} do not strictly increase")

        out_dir = run_directory(config, "rank", f"tridisc-{p}x{q}")
        csv_path = write_csv(out_dir / "growth.csv", growth.rows(), GROWTH_COLUMNS)
        payload = {
            "pair": pair.to_dict(),
            "growth": growth.to_dict(),
            "failures": failures,
            "passed": not failures,
            "files": file_manifest([csv_path], out_dir),
        }
        report_path = write_json(out_dir / "growth_report.json", with_metadata(payload, config.snapshot()))
        return self._outcome(failures, [csv_path, report_path], {"counts": growth.counts, "verdict": growth.verdict})

    def _outcome(self, failures, paths, summary) -> RunOutcome:
        summary = dict(summary, failures=failures)
        if failures:
            message = "; ".join(failures)
            logger.error("[Rank] %s", message)
            return RunOutcome(EXIT_RESIDUAL, paths, summary, message)
        logger.info("[Rank] %s", summary)
        return RunOutcome(EXIT_OK, paths, summary, "rank checks passed")
