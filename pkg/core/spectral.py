"""
Singular-value analysis and the heuristic compactness verdict for families of truncated operators.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, InsufficientFamilyError

logger = logging.getLogger(__name__)

Verdict = Literal["compact-consistent", "noncompact-consistent", "finite-rank-stable", "inconclusive"]

STABILITY_TOL = 1e-6
DECAY_TOL = 1e-3
RANK_REL_TOL = 1e-8
RANK_ABS_FLOOR = 1e-12
NONCOMPACT_LEVEL = 0.5
UNSTABLE = "unstable"


def _as_matrix(A) -> np.ndarray:
    matrix = getattr(A, "matrix", A)
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D operator, got shape {matrix.shape}")
    return matrix


def singular_values(A, top_k: Optional[int] = None) -> np.ndarray:
    """
    Nonincreasing singular values.

    gesdd first, gesvd when gesdd fails to converge.
    """
    matrix = _as_matrix(A)
    available = min(matrix.shape)
    if top_k is not None and not 1 <= top_k <= available:
        raise DimensionMismatchError(f"top_k={top_k} outside 1..{available}")
    if available == 0:
        return np.zeros(0)
    try:
        sigma = scipy.linalg.svd(matrix, compute_uv=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning("[Spectral] gesdd did not converge on a %dx%d matrix, retrying with gesvd", *matrix.shape)
        sigma = scipy.linalg.svd(matrix, compute_uv=False, lapack_driver="gesvd")
    return sigma if top_k is None else sigma[:top_k]


def dilation_singular_values(A) -> np.ndarray:
    """
    Singular values from the Hermitian dilation [[0, A], [A^H, 0]].

    Its spectrum is {+-sigma} plus |m - n| zeros, and a Hermitian eigensolver keeps
    zero singular values at rounding level instead of at sqrt(eps) as a Gram matrix would.
    """
    matrix = _as_matrix(A)
    m, n = matrix.shape
    p = min(m, n)
    if p == 0:
        return np.zeros(0)
    dilation = np.zeros((m + n, m + n), dtype=complex)
    dilation[:m, m:] = matrix
    dilation[m:, :m] = matrix.conj().T
    eigenvalues = scipy.linalg.eigvalsh(dilation)
    return np.clip(eigenvalues[::-1][:p], 0.0, None)


def default_rank_tol(sigma: np.ndarray, rel_tol: float = RANK_REL_TOL, abs_floor: float = RANK_ABS_FLOOR) -> float:
    top = float(sigma[0]) if sigma.size else 0.0
    return max(rel_tol * top, abs_floor)


def rank_estimate(A, tol: Optional[float] = None) -> int:
    """Count of singular values above tol (default 1e-8 * sigma_1, floor 1e-12)."""
    if tol is not None and not tol > 0:
        raise ValueError("tol must be positive")
    sigma = singular_values(A)
    threshold = default_rank_tol(sigma) if tol is None else tol
    return int(np.count_nonzero(sigma > threshold))


@dataclass
class OracleGateReport:
    matrix_count: int
    deviations: List[float]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> Dict:
        return {
            "matrix_count": self.matrix_count,
            "max_relative_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "deviations": list(self.deviations),
        }


def oracle_gate(matrices: Iterable, tol: float = 1e-10) -> OracleGateReport:
    """Compare singular_values against the dilation oracle, relative to the largest singular value."""
    deviations = []
    for A in matrices:
        sigma = singular_values(A)
        oracle = dilation_singular_values(A)
        if sigma.size == 0:
            deviations.append(0.0)
            continue
        scale = float(oracle[0])
        gap = float(np.max(np.abs(sigma - oracle)))
        deviations.append(gap / scale if scale > 0 else gap)
    report = OracleGateReport(len(deviations), deviations, tol)
    logger.info("[Spectral] oracle gate over %d matrices: max deviation %.3e", report.matrix_count, report.max_deviation)
    return report


@dataclass
class SpectralReport:
    """Singular-value table across truncations plus a heuristic verdict."""
    dims: List[int]
    singular_value_table: List[List[float]]
    rank_estimates: List[int]
    rank_tolerances: List[float]
    decay_summary: List[Union[float, str]]
    verdict: Verdict
    stable_rank: Optional[int] = None
    large_counts: List[int] = field(default_factory=list)
    thresholds: Dict[str, float] = field(default_factory=dict)
    envelopes: List[float] = field(default_factory=list)

    @property
    def max_envelope(self) -> float:
        return max(self.envelopes, default=0.0)

    def rows(self) -> List[Dict]:
        """Rows of the `dim,k,sigma,envelope` CSV form, k starting at 1."""
        envelopes = self.envelopes or [0.0] * len(self.dims)
        return [
            {"dim": dim, "k": k + 1, "sigma": sigma, "envelope": envelope}
            for dim, values, envelope in zip(self.dims, self.singular_value_table, envelopes)
            for k, sigma in enumerate(values)
        ]

    def to_dict(self) -> Dict:
        return {
            "dims": list(self.dims),
            "singular_value_table": [list(values) for values in self.singular_value_table],
            "rank_estimates": list(self.rank_estimates),
            "rank_tolerances": list(self.rank_tolerances),
            "decay_summary": list(self.decay_summary),
            "large_counts": list(self.large_counts),
            "stable_rank": self.stable_rank,
            "verdict": self.verdict,
            "heuristic": True,
            "thresholds": dict(self.thresholds),
            "envelopes": list(self.envelopes),
        }


def _decay_summary(table: List[np.ndarray], stability_tol: float) -> List[Union[float, str]]:
    """Per index k, the last value when the last two cross-dim differences are below stability_tol."""
    tail = table[-3:]
    depth = max(len(values) for values in table)
    summary: List[Union[float, str]] = []
    for k in range(depth):
        column = [float(values[k]) if k < len(values) else None for values in tail]
        if None in column:
            summary.append(UNSTABLE)
            continue
        steady = abs(column[2] - column[1]) < stability_tol and abs(column[1] - column[0]) < stability_tol
        summary.append(column[2] if steady else UNSTABLE)
    return summary


def _is_finite_rank_stable(
    ranks: List[int],
    table: List[np.ndarray],
    tolerances: List[float],
    envelopes: List[float],
    decay_tol: float,
) -> bool:
    last = ranks[-3:]
    if len(set(last)) != 1:
        return False
    r = last[0]
    for values, tol, envelope in zip(table[-3:], tolerances[-3:], envelopes[-3:]):
        if values.size > r and values[r] > tol:
            return False
        # retained values must clear the envelope; rank 0 needs an envelope below decay_tol
        if r > 0 and values[r - 1] <= 2.0 * envelope:
            return False
        if r == 0 and envelope >= decay_tol:
            return False
    return True


def _is_compact_consistent(summary: List[Union[float, str]], decay_tol: float) -> bool:
    stabilized = [(k, value) for k, value in enumerate(summary) if value != UNSTABLE]
    small = [k for k, value in stabilized if value < decay_tol]
    if not small:
        return False
    onset = small[0]
    return all(value < decay_tol for k, value in stabilized if k >= onset)


def _family_envelopes(family: Sequence[Tuple[int, object]], envelopes: Optional[Sequence[float]]) -> List[float]:
    if envelopes is None:
        return [float(getattr(op, "error_envelope", 0.0)) for _, op in family]
    values = [float(e) for e in envelopes]
    if len(values) != len(family):
        raise DimensionMismatchError(f"{len(values)} envelopes for a family of {len(family)} operators")
    if any(not e >= 0.0 for e in values):
        raise ValueError("envelopes must be nonnegative")
    return values


def compactness_verdict(
    family: Sequence[Tuple[int, object]],
    top_k: Optional[int] = None,
    stability_tol: float = STABILITY_TOL,
    decay_tol: float = DECAY_TOL,
    rank_rel_tol: float = RANK_REL_TOL,
    rank_abs_floor: float = RANK_ABS_FLOOR,
    envelopes: Optional[Sequence[float]] = None,
) -> SpectralReport:
    """
    Heuristic compactness reading of a truncation family.

    Each dim carries an envelope bounding the operator-norm distance of its matrix to the
    compression it stands for (by default the operator's error_envelope, which includes the
    symbol tails). Every singular value is only known to within that envelope, so:
      - ranks count sigma above max(rank tolerance, envelope);
      - large_counts count sigma >= 1/2 + envelope;
      - decay is only read when the envelope of the last three dims is below decay_tol.

    Order of tests: rank constant over the last three dims, sigma_(r+1) below the rank
    tolerance and sigma_r above twice the envelope gives finite-rank-stable; a strictly
    growing large count gives noncompact-consistent; stabilized sigma_k falling below
    decay_tol from some index on gives compact-consistent; anything else is inconclusive.
    """
    dims = [int(N) for N, _ in family]
    if len(dims) < 3:
        raise InsufficientFamilyError(f"need at least 3 truncation dims, got {len(dims)}")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise InsufficientFamilyError(f"truncation dims must be strictly increasing: {dims}")
    bounds = _family_envelopes(family, envelopes)

    table = [singular_values(op) for _, op in family]
    tolerances = [
        max(default_rank_tol(sigma, rank_rel_tol, rank_abs_floor), envelope)
        for sigma, envelope in zip(table, bounds)
    ]
    ranks = [int(np.count_nonzero(sigma > tol)) for sigma, tol in zip(table, tolerances)]
    counts = [
        int(np.count_nonzero(sigma >= NONCOMPACT_LEVEL + envelope))
        for sigma, envelope in zip(table, bounds)
    ]
    summary = _decay_summary(table, stability_tol)
    decay_trusted = max(bounds[-3:]) < decay_tol

    stable_rank = None
    if _is_finite_rank_stable(ranks, table, tolerances, bounds, decay_tol):
        verdict: Verdict = "finite-rank-stable"
        stable_rank = ranks[-1]
    elif all(b > a for a, b in zip(counts, counts[1:])):
        verdict = "noncompact-consistent"
    elif decay_trusted and _is_compact_consistent(summary, decay_tol):
        verdict = "compact-consistent"
    else:
        verdict = "inconclusive"

    shown = table if top_k is None else [sigma[:top_k] for sigma in table]
    report = SpectralReport(
        dims=dims,
        singular_value_table=[[float(s) for s in sigma] for sigma in shown],
        rank_estimates=ranks,
        rank_tolerances=tolerances,
        decay_summary=summary if top_k is None else summary[:top_k],
        verdict=verdict,
        stable_rank=stable_rank,
        large_counts=counts,
        thresholds={
            "stability_tol": stability_tol,
            "decay_tol": decay_tol,
            "rank_rel_tol": rank_rel_tol,
            "rank_abs_floor": rank_abs_floor,
            "noncompact_level": NONCOMPACT_LEVEL,
        },
        envelopes=bounds,
    )
    if not decay_trusted:
        logger.warning(
            "[Spectral] envelope %.3e reaches decay_tol %.1e; small singular values are not read",
            max(bounds[-3:]),
            decay_tol,
        )
    logger.info("[Spectral] dims=%s ranks=%s verdict=%s", dims, ranks, verdict)
    return report
