"""
Verify Runner - checks the operator identities over a deterministic corpus
"""
import logging
from typing import Dict, List

from core.blaschke import BlaschkeProduct
from core.operators import IdentityReport, verify_hankel_adjoint, verify_thmA_chain, verify_toeplitz_identity
from core.polydisc import MultiBasis, SeparatedSymbolPair, verify_two_subspace_identity
from core.scenario_pool import chain_corpus, standard_product, toeplitz_corpus
from experiment_config import ExperimentConfig
from reports.report_io import file_manifest, with_metadata, write_csv, write_json

from .outcome import EXIT_OK, EXIT_RESIDUAL, RunOutcome, run_directory

logger = logging.getLogger(__name__)

TOEPLITZ_DIM = 24
CHAIN_DIM = 48
CHAIN_RANDOM_PAIRS = 2
RESIDUAL_COLUMNS = ["identity", "case", "check", "residual", "limit"]


def two_subspace_cases():
    """(label, pair, basis) for the bidisc identity."""
    return [
        (
            "z1-z2",
            SeparatedSymbolPair(BlaschkeProduct.monomial(1), BlaschkeProduct.monomial(1), 0, 1),
            MultiBasis(2, (3, 3)),
        ),
        (
            "deg1-deg1",
            SeparatedSymbolPair(standard_product(1), standard_product(1), 0, 1),
            MultiBasis(2, (12, 12)),
        ),
        (
            "deg2-deg3",
            SeparatedSymbolPair(standard_product(2), standard_product(3), 0, 1),
            MultiBasis(2, (12, 12)),
        ),
    ]


class VerifyRunner:
    """Runs every identity check and fails on the first residual over budget."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def _collect(self) -> List[Dict]:
        config = self.config
        tol = config.tolerances
        cases: List[Dict] = []

        def add(label: str, report: IdentityReport) -> None:
            cases.append({"case": label, "report": report})

        for index, (f, g) in enumerate(toeplitz_corpus(config.seed, config.corpus_size)):
            report = verify_toeplitz_identity(f, g, TOEPLITZ_DIM, guard=config.guard)
            report.tolerance = tol.identity_tol
            add(f"pair-{index}", report)
            add(f"pair-{index}", verify_hankel_adjoint(f, TOEPLITZ_DIM))

        for index, (phi, psi) in enumerate(chain_corpus(config.seed, CHAIN_RANDOM_PAIRS)):
            report = verify_thmA_chain(phi, psi, CHAIN_DIM, guard=config.guard)
            report.tolerance = tol.identity_tol
            add(f"chain-{index}", report)

        for label, pair, basis in two_subspace_cases():
            report = verify_two_subspace_identity(pair, basis, config.defect_sign)
            report.tolerance = tol.projection_tol
            add(label, report)
        return cases

    def run(self) -> RunOutcome:
        config = self.config
        logger.info("[Verify] corpus seed=%d size=%d guard=%d", config.seed, config.corpus_size, config.guard)
        cases = self._collect()

        rows = []
        failing = []
        for case in cases:
            report: IdentityReport = case["report"]
            limit = report.tail_budget + report.tolerance
            for check, value in report.residuals.items():
                rows.append(
                    {"identity": report.name, "case": case["case"], "check": check, "residual": value, "limit": limit}
                )
            if not report.passed:
                failing.append(f"{report.name}/{case['case']}")

        out_dir = run_directory(config, "verify", "corpus")
        csv_path = write_csv(out_dir / "residuals.csv", rows, RESIDUAL_COLUMNS)
        payload = {
            "defect_sign": config.defect_sign,
            "identities": [dict(case["report"].to_dict(), case=case["case"]) for case in cases],
            "failing": failing,
            "passed": not failing,
            "files": file_manifest([csv_path], out_dir),
        }
        report_path = write_json(out_dir / "verify_report.json", with_metadata(payload, config.snapshot()))

        summary = {"checked": len(cases), "failing": failing}
        if failing:
            message = f"residual over budget in {', '.join(failing)}"
            logger.error("[Verify] %s", message)
            return RunOutcome(EXIT_RESIDUAL, [csv_path, report_path], summary, message)
        logger.info("[Verify] %d identity reports within budget", len(cases))
        return RunOutcome(EXIT_OK, [csv_path, report_path], summary, "all identities within budget")
