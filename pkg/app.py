"""
Command-line entry point for the Hardy projection lab

Usage:
  python app.py probe --scenario exm1 --radii-levels 12
  python app.py verify --defect-sign paper
  python app.py rank --n-vars 2 --degrees 2,3 --dims 8..20:4
  python app.py export --operator model --dim 4
  python app.py selftest
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Load .env from project root so HPL_* settings are visible to Config
load_dotenv(Path(__file__).resolve().parent / ".env")

from pydantic import ValidationError

from config import Config

logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

from core.errors import (
    ConfigError,
    DimensionMismatchError,
    DiskDomainError,
    HypothesisError,
    InsufficientFamilyError,
    TruncationError,
)
from experiment_config import load_experiment_config
from runners.export_runner import ExportRunner
from runners.outcome import EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_IO, EXIT_RESIDUAL
from runners.probe_runner import ProbeRunner
from runners.rank_runner import RankRunner
from runners.selftest_runner import SelftestRunner
from runners.verify_runner import VerifyRunner
from utils.grid_utils import parse_dims, parse_pair, parse_radii

RUNNERS = {
    "probe": ProbeRunner,
    "verify": VerifyRunner,
    "rank": RankRunner,
    "export": ExportRunner,
    "selftest": SelftestRunner,
}

COMMAND_HELP = {
    "probe": "sample |phi| and |psi| on circles and grade the boundary conditions",
    "verify": "check the Toeplitz-Hankel, commutator and two-subspace identities",
    "rank": "exact bidisc rank or tridisc rank growth of the product projection",
    "export": "write one truncated operator as CSV and binary",
    "selftest": "singular-value oracle gate and projection laws",
}


class LabArgumentParser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they share exit code 1 with bad config files."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config (schema_version 1)")
    common.add_argument("--out", help="output directory (default: $HPL_OUT)")
    common.add_argument("--seed", type=int)

    probe = common.add_argument_group("probe")
    probe.add_argument("--scenario", choices=["exm1", "prop1", "custom"])
    probe.add_argument("--prefix-length", type=int)
    probe.add_argument("--radii", type=parse_radii, help="comma-separated radii in (0, 1)")
    probe.add_argument("--radii-levels", type=int, help="use radii 1 - 2^-j, j = 1..levels")
    probe.add_argument("--angular-samples", type=int)
    probe.add_argument("--sc-radius", type=float)

    operators = common.add_argument_group("operators")
    operators.add_argument("--dims", type=parse_dims, help="8..20, 8..20:4 or 8,12,16")
    operators.add_argument("--n-vars", type=int, choices=[2, 3])
    operators.add_argument("--degrees", type=parse_pair, help="deg phi,deg psi")
    operators.add_argument("--variables", type=parse_pair, help="variable of phi,variable of psi")
    operators.add_argument("--defect-sign", choices=["proof", "paper"])
    operators.add_argument("--guard", type=int)
    operators.add_argument("--corpus-size", type=int)
    operators.add_argument(
        "--operator", choices=["toeplitz", "hankel", "submodule", "model", "product", "defect"]
    )
    operators.add_argument("--dim", type=int, help="export truncation dimension")
    operators.add_argument("--monomial", type=int, help="power k of the exported symbol z^k")

    tolerances = common.add_argument_group("tolerances")
    tolerances.add_argument("--tol-s", type=float)
    tolerances.add_argument("--tol-c", type=float)
    tolerances.add_argument("--tol-wc", type=float)
    tolerances.add_argument("--tol-rank", type=float, help="relative rank tolerance")
    tolerances.add_argument("--tol-decay", type=float)
    tolerances.add_argument("--tol-stability", type=float)
    return common


def build_parser() -> LabArgumentParser:
    parser = LabArgumentParser(prog="hpl", description="Hardy projection lab")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    for name, help_text in COMMAND_HELP.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """Flag values keyed by config field; unset flags stay None and leave the config file alone."""
    return {
        "scenario": args.scenario,
        "prefix_length": args.prefix_length,
        "radii": args.radii,
        "radii_levels": args.radii_levels,
        "angular_samples": args.angular_samples,
        "sc_radius": args.sc_radius,
        "dims": args.dims,
        "n_vars": args.n_vars,
        "degrees": args.degrees,
        "variables": args.variables,
        "defect_sign": args.defect_sign,
        "guard": args.guard,
        "corpus_size": args.corpus_size,
        "operator": args.operator,
        "export_dim": args.dim,
        "monomial": args.monomial,
        "seed": args.seed,
        "out": args.out,
        "tolerances": {
            "tol_s": args.tol_s,
            "tol_c": args.tol_c,
            "tol_wc": args.tol_wc,
            "rank_rel_tol": args.tol_rank,
            "decay_tol": args.tol_decay,
            "stability_tol": args.tol_stability,
        },
    }


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        Config.validate()
        config = load_experiment_config(args.config, overrides_from_args(args))
        outcome = RUNNERS[args.command](config).run()
    except ValidationError as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_CONFIG
    except (ConfigError, InsufficientFamilyError, DiskDomainError, DimensionMismatchError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except TruncationError as e:
        logger.error("core-block error: %s", e)
        return EXIT_RESIDUAL
    except HypothesisError as e:
        logger.error("hypothesis violated: %s", e)
        return EXIT_HYPOTHESIS
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except ValueError as e:
        logger.error("invalid input: %s", e)
        return EXIT_CONFIG

    for path in outcome.paths:
        logger.info("wrote %s", path)
    logger.info("%s: %s (exit %d)", args.command, outcome.message, outcome.exit_code)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
