"""
Probe Runner - samples a symbol pair on circles and grades the boundary conditions
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from core.blaschke import BlaschkeProduct, ProbeReport, probe_conditions, separation_profile
from core.errors import TruncationError
from core.fourier import product_symbol, transform
from core.operators import commutator_probe, hankel_toeplitz_probe
from core.scenario_pool import Scenario, ScenarioPool, TrustedPrefix
from core.spectral import SpectralReport
from experiment_config import ExperimentConfig
from reports.report_io import file_manifest, with_metadata, write_csv, write_json

from .outcome import EXIT_OK, EXIT_PROBE_REGRESSION, RunOutcome, run_directory

logger = logging.getLogger(__name__)

STATS_COLUMNS = ["radius", "min_sum", "max_of_max", "min_of_max"]
SPECTRAL_COLUMNS = ["operator", "dim", "k", "sigma", "envelope"]
SPECTRAL_DIMS = [64, 128, 256]


def wc_sc_agreement(report: ProbeReport, sc_value: float) -> Optional[bool]:
    """
    For interpolating pairs WC holds exactly when the zero sets stay separated near the boundary.

    None when the WC verdict is inconclusive or the separation infimum is empty.
    """
    verdict = report.verdicts["WC"]
    if verdict == "inconclusive" or math.isinf(sc_value):
        return None
    sc_holds = sc_value >= report.thresholds.consistency_floor
    return (verdict == "consistent") == sc_holds


def spectral_profiles(trusted: TrustedPrefix, dims: Sequence[int], **verdict_options) -> Dict[str, SpectralReport]:
    """
    H_x T_conj(x) with x = conj(phi) psi, and the commutator of the two submodule projections.

    For a prefix of M zeros H_x has rank at most M.
    """
    phi_s, psi_s = trusted.symbols()
    x = product_symbol(transform(phi_s, "conjugate"), psi_s)
    return {
        "hankel_toeplitz": hankel_toeplitz_probe(x, transform(x, "conjugate"), dims, **verdict_options),
        "commutator": commutator_probe(trusted.phi, trusted.psi, dims, **verdict_options),
    }


class ProbeRunner:
    """Runs the boundary probe for a built-in or custom scenario."""

    def __init__(self, config: ExperimentConfig, pool: Optional[ScenarioPool] = None):
        self.config = config
        self.pool = pool or ScenarioPool()

    def _spectral_section(self, scenario: Optional[Scenario], out_dir) -> Tuple[Optional[Dict], List]:
        """Spectral profiles on the longest prefix whose Taylor tails are trusted."""
        if scenario is None:
            return None, []
        try:
            trusted = scenario.trusted_prefix(self.config.prefix_length)
        except TruncationError as exc:
            logger.warning("[Probe] spectral section skipped: %s", exc)
            return None, []
        reports = spectral_profiles(trusted, SPECTRAL_DIMS, **self.config.tolerances.verdict_options())
        rows = [dict(row, operator=name) for name, report in reports.items() for row in report.rows()]
        path = write_csv(out_dir / "spectral.csv", rows, SPECTRAL_COLUMNS)
        section = {"prefix": trusted.to_dict(), **{name: report.to_dict() for name, report in reports.items()}}
        return section, [path]

    def _scenario(self) -> Optional[Scenario]:
        return None if self.config.scenario == "custom" else self.pool.get(self.config.scenario)

    def _symbols(self, scenario: Optional[Scenario]) -> Tuple[BlaschkeProduct, BlaschkeProduct, Tuple[str, ...]]:
        config = self.config
        if scenario is None:
            return config.phi.to_blaschke("phi"), config.psi.to_blaschke("psi"), ()
        phi, psi = scenario.symbols(config.prefix_length)
        return phi, psi, scenario.expected_hold

    def run(self) -> RunOutcome:
        config = self.config
        scenario = self._scenario()
        phi, psi, expected_hold = self._symbols(scenario)
        radii = config.probe_radii()
        logger.info(
            "[Probe] scenario=%s prefix=%d radii=%d samples=%d",
            config.scenario, config.prefix_length, len(radii), config.angular_samples,
        )
        report = probe_conditions(phi, psi, radii, config.angular_samples, config.tolerances.probe_thresholds())
        profile = separation_profile(phi.zeros, psi.zeros, config.sc_radius)
        agreement = wc_sc_agreement(report, profile["sc_value"])
        regressions = [name for name in expected_hold if report.verdicts[name] == "violated-at-samples"]

        out_dir = run_directory(config, "probe", config.scenario)
        stats_path = write_csv(out_dir / "probe_stats.csv", report.stats_rows(), STATS_COLUMNS)
        spectral, spectral_paths = self._spectral_section(scenario, out_dir)
        payload: Dict = {
            "scenario": config.scenario,
            "expected_hold": list(expected_hold),
            "probe": report.to_dict(),
            "separation": profile,
            "sc_value": profile["sc_value"],
            "wc_sc_agreement": agreement,
            "regressions": regressions,
            "spectral": spectral,
            "files": file_manifest([stats_path, *spectral_paths], out_dir),
        }
        report_path = write_json(out_dir / "probe_report.json", with_metadata(payload, config.snapshot()))

        summary = {"verdicts": dict(report.verdicts), "regressions": regressions}
        logger.info("[Probe] verdicts %s", report.verdicts)
        if regressions:
            message = f"expected condition(s) {', '.join(regressions)} violated at samples"
            logger.error("[Probe] %s", message)
            return RunOutcome(EXIT_PROBE_REGRESSION, [stats_path, *spectral_paths, report_path], summary, message)
        return RunOutcome(EXIT_OK, [stats_path, *spectral_paths, report_path], summary, "probe complete")
