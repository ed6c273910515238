"""
Run outcome shared by the command runners, and the exit-code partition.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

from experiment_config import ExperimentConfig
from reports.report_io import get_output_dir

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROBE_REGRESSION = 2
EXIT_RESIDUAL = 3
EXIT_HYPOTHESIS = 4
EXIT_IO = 5


@dataclass
class RunOutcome:
    exit_code: int
    paths: List[Path] = field(default_factory=list)
    summary: Dict = field(default_factory=dict)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def run_directory(config: ExperimentConfig, command: str, label: str) -> Path:
    """<out>/<command>/<label>/"""
    return get_output_dir(config.out, command, label)
