"""
Export Runner - writes one truncated operator as CSV and raw binary with a manifest
"""
import logging
from pathlib import Path
from typing import Dict, List, Tuple

from config import Config
from core.blaschke import BlaschkeProduct
from core.errors import ConfigError
from core.fourier import FourierSymbol
from core.operators import TruncatedOperator, hankel, model_projection, submodule_projection, toeplitz
from core.polydisc import MultiBasis, defect_operator, product_of_inner_projections
from experiment_config import ExperimentConfig
from reports.report_io import file_manifest, with_metadata, write_json, write_matrix_binary, write_matrix_csv

from .outcome import EXIT_OK, RunOutcome, run_directory
from .rank_runner import build_pair

logger = logging.getLogger(__name__)


def blaschke_provenance(theta: BlaschkeProduct) -> Dict:
    zeros, _ = theta.nonzero_zeros()
    return {
        "kind": "blaschke",
        "label": theta.zeros.label,
        "degree": theta.degree,
        "origin_multiplicity": theta.origin_order,
        "zeros": [complex(a) for a in zeros],
        "unimodular_constant": theta.unimodular_constant,
    }


def fourier_provenance(f: FourierSymbol) -> Dict:
    return {"kind": "fourier", "symbol": f.to_dict()}


class ExportRunner:
    """Builds the configured operator at export_dim and writes operator.csv, operator.bin and manifest.json."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def _inner_symbol(self) -> BlaschkeProduct:
        config = self.config
        if config.phi is not None:
            return config.phi.to_blaschke("phi")
        if config.monomial < 0:
            raise ConfigError(f"inner symbol z^{config.monomial} needs a nonnegative power")
        return BlaschkeProduct.monomial(config.monomial)

    def _build(self) -> Tuple[TruncatedOperator, Dict]:
        config = self.config
        N = config.export_dim
        kind = config.operator
        if kind in ("toeplitz", "hankel"):
            f = FourierSymbol.monomial(config.monomial)
            op = toeplitz(f, N) if kind == "toeplitz" else hankel(f, N)
            return op, fourier_provenance(f)
        if kind in ("submodule", "model"):
            theta = self._inner_symbol()
            build = submodule_projection if kind == "submodule" else model_projection
            return build(theta, N), blaschke_provenance(theta)

        pair = build_pair(config)
        basis = MultiBasis.cube(config.n_vars, N)
        if kind == "product":
            op = product_of_inner_projections(pair, basis)
        else:
            op = defect_operator(pair, basis, config.defect_sign)
        provenance = {
            "kind": "polydisc",
            "pair": pair.to_dict(),
            "phi": blaschke_provenance(pair.phi),
            "psi": blaschke_provenance(pair.psi),
            "per_variable_dims": list(basis.per_variable_dims),
        }
        return op, provenance

    def run(self) -> RunOutcome:
        config = self.config
        op, provenance = self._build()
        rows, cols = op.shape
        label = f"{config.operator}-{config.export_dim}"
        logger.info("[Export] %s shape=%dx%d envelope=%.3e", op.tag, rows, cols, op.error_envelope)

        out_dir = run_directory(config, "export", label)
        paths: List[Path] = [write_matrix_csv(out_dir / "operator.csv", op.matrix)]
        if Config.WRITE_BINARY:
            paths.append(write_matrix_binary(out_dir / "operator.bin", op.matrix))
        payload = {
            "operator": config.operator,
            "tag": op.tag,
            "rows": rows,
            "cols": cols,
            "error_envelope": op.error_envelope,
            "provenance": provenance,
            "files": file_manifest(paths, out_dir),
        }
        manifest_path = write_json(out_dir / "manifest.json", with_metadata(payload, config.snapshot()))
        paths.append(manifest_path)
        return RunOutcome(EXIT_OK, paths, {"operator": label, "shape": [rows, cols]}, f"exported {label}")
