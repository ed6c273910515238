"""
Write lab reports to disk.
Every write goes to a temp file in the target directory and is moved into place,
so a report file is either complete or absent.
"""
import hashlib
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from config import Config

logger = logging.getLogger(__name__)

EMPTY_MARKER = "empty"
ZERO_TOL = 1e-15
MATRIX_COLUMNS = ["row", "col", "re", "im"]


def get_output_dir(out: Optional[str] = None, *parts: str) -> Path:
    """<out>/<parts...>; out defaults to HPL_OUT, read at call time."""
    base = Path(out) if out else Path(Config.output_dir())
    path = base.joinpath(*parts)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _atomic_write(path: Path, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def to_jsonable(value: Any) -> Any:
    """Plain JSON values: inf becomes "empty", complex becomes [re, im], -0.0 becomes 0.0."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return EMPTY_MARKER
        if math.isnan(value):
            raise ValueError("NaN cannot be written to a report")
        return value + 0.0
    return value


def with_metadata(payload: Dict[str, Any], config_snapshot: Dict[str, Any]) -> Dict[str, Any]:
    document = dict(payload)
    document["tool_version"] = Config.TOOL_VERSION
    document["config"] = config_snapshot
    return document


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"
    logger.debug("[Reports] writing %s", path)
    return _atomic_write(Path(path), text.encode("utf-8"))


def write_csv(path: Path, rows: Iterable[Dict[str, Any]], columns: List[str]) -> Path:
    """CSV with the given header, 17 significant digits and \\n line endings."""
    frame = pd.DataFrame(list(rows), columns=columns)
    text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return _atomic_write(Path(path), text.encode("utf-8"))


def matrix_rows(matrix: np.ndarray, zero_tol: float = ZERO_TOL) -> List[Dict[str, Any]]:
    """row,col,re,im entries with |value| > zero_tol in row-major order."""
    matrix = np.asarray(matrix, dtype=complex)
    rows, cols = np.nonzero(np.abs(matrix) > zero_tol)
    return [
        {"row": int(r), "col": int(c), "re": float(matrix[r, c].real) + 0.0, "im": float(matrix[r, c].imag) + 0.0}
        for r, c in zip(rows, cols)
    ]


def write_matrix_csv(path: Path, matrix: np.ndarray, zero_tol: float = ZERO_TOL) -> Path:
    return write_csv(path, matrix_rows(matrix, zero_tol), MATRIX_COLUMNS)


def write_matrix_binary(path: Path, matrix: np.ndarray) -> Path:
    """Little-endian uint64 rows, cols, then row-major interleaved float64 re/im."""
    matrix = np.asarray(matrix, dtype=complex)
    header = np.array(matrix.shape, dtype="<u8").tobytes()
    body = np.ascontiguousarray(matrix + 0j, dtype="<c16").tobytes(order="C")
    return _atomic_write(Path(path), header + body)


def read_matrix_binary(path: Path) -> np.ndarray:
    data = Path(path).read_bytes()
    rows, cols = (int(v) for v in np.frombuffer(data[:16], dtype="<u8"))
    return np.frombuffer(data[16:], dtype="<c16").reshape(rows, cols).copy()


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def file_manifest(paths: Iterable[Path], root: Path) -> List[Dict[str, str]]:
    """[{file, sha256}] with paths relative to root."""
    return [{"file": Path(p).relative_to(root).as_posix(), "sha256": sha256_file(p)} for p in paths]
