"""
Selftest Runner - fast internal consistency checks of the numerical kernels
"""
import logging
from typing import Dict, List

import numpy as np

from core.operators import (
    isometric_factor,
    max_residual,
    model_projection,
    model_space_basis,
    projection_defects,
    submodule_projection,
    verify_toeplitz_identity,
)
from core.scenario_pool import oracle_corpus, standard_product, toeplitz_corpus
from core.spectral import oracle_gate
from experiment_config import ExperimentConfig
from reports.report_io import file_manifest, with_metadata, write_csv, write_json

from .outcome import EXIT_OK, EXIT_RESIDUAL, RunOutcome, run_directory

logger = logging.getLogger(__name__)

SELFTEST_DIM = 24
SELFTEST_DEGREE = 3
IDENTITY_SAMPLES = 5
ISOMETRY_TOL = 1e-12
CHECK_COLUMNS = ["check", "value", "limit", "passed"]


class SelftestRunner:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.checks: List[Dict] = []

    def _record(self, check: str, value: float, limit: float) -> None:
        self.checks.append({"check": check, "value": float(value), "limit": float(limit), "passed": bool(value <= limit)})

    def _oracle(self) -> Dict:
        gate = oracle_gate(oracle_corpus(self.config.seed))
        self._record("oracle_gate", gate.max_deviation, gate.tolerance)
        return gate.to_dict()

    def _toeplitz_sample(self) -> None:
        tol = self.config.tolerances.identity_tol
        pairs = toeplitz_corpus(self.config.seed, IDENTITY_SAMPLES)
        residual = max(verify_toeplitz_identity(f, g, SELFTEST_DIM).residual for f, g in pairs)
        self._record("toeplitz_product", residual, tol)

    def _projection_laws(self) -> None:
        tol = self.config.tolerances.projection_tol
        theta = standard_product(SELFTEST_DEGREE)
        for name, P in (
            ("submodule", submodule_projection(theta, SELFTEST_DIM)),
            ("model", model_projection(theta, SELFTEST_DIM)),
        ):
            for law, value in projection_defects(P).items():
                self._record(f"{name}_{law}", value, tol)
        trace = float(np.trace(model_projection(theta, SELFTEST_DIM).matrix).real)
        self._record("model_trace", abs(trace - theta.degree), tol)

        basis = model_space_basis(theta, SELFTEST_DIM)
        gap = max_residual(basis.projection().matrix, model_projection(theta, SELFTEST_DIM).matrix)
        self._record("model_basis_projection", gap, tol)

    def _isometry(self) -> None:
        T = isometric_factor(standard_product(SELFTEST_DEGREE), SELFTEST_DIM).matrix
        self._record("isometric_factor", max_residual(T.conj().T @ T, np.eye(SELFTEST_DIM)), ISOMETRY_TOL)

    def run(self) -> RunOutcome:
        config = self.config
        self.checks = []
        logger.info("[Selftest] seed=%d", config.seed)
        gate = self._oracle()
        self._toeplitz_sample()
        self._projection_laws()
        self._isometry()

        failing = [check["check"] for check in self.checks if not check["passed"]]
        out_dir = run_directory(config, "selftest", "kernels")
        csv_path = write_csv(out_dir / "checks.csv", self.checks, CHECK_COLUMNS)
        payload = {
            "oracle_gate": gate,
            "checks": self.checks,
            "failing": failing,
            "passed": not failing,
            "files": file_manifest([csv_path], out_dir),
        }
        report_path = write_json(out_dir / "selftest_report.json", with_metadata(payload, config.snapshot()))

        summary = {"checks": len(self.checks), "failing": failing}
        if failing:
            message = f"selftest failed: {', '.join(failing)}"
            logger.error("[Selftest] %s", message)
            return RunOutcome(EXIT_RESIDUAL, [csv_path, report_path], summary, message)
        logger.info("[Selftest] %d checks passed", len(self.checks))
        return RunOutcome(EXIT_OK, [csv_path, report_path], summary, "selftest passed")
