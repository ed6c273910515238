"""
Truncated one-variable operators: Toeplitz, Hankel, inner projections, model-space bases,
and the verifiers for the operator identities built from them.

Matrices act on the graded basis {1, z, ..., z^(N-1)}.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .blaschke import BlaschkeProduct, one_minus_modulus_sq
from .errors import DimensionMismatchError, TruncationError
from .fourier import (
    FourierSymbol,
    blaschke_factor_series,
    product_symbol,
    taylor_coeffs,
    transform,
    window_for_tail,
)
from .spectral import SpectralReport, compactness_verdict

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 8
IDENTITY_TOL = 1e-12
PROJECTION_TOL = 1e-10
ISOMETRY_TAIL = 1e-16


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """
    Dense matrix of a truncated operator.

    error_envelope bounds the operator-norm distance to the compression of the
    untruncated operator; it is zero exactly when every input was an exact polynomial.
    """
    matrix: np.ndarray
    domain_dim: int
    codomain_dim: int
    error_envelope: float = 0.0
    tag: str = ""

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape != (self.codomain_dim, self.domain_dim):
            raise DimensionMismatchError(
                f"matrix shape {matrix.shape} does not match {self.codomain_dim}x{self.domain_dim}"
            )
        if not self.error_envelope >= 0.0:
            raise ValueError("error_envelope must be nonnegative")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def of(cls, matrix: np.ndarray, error_envelope: float = 0.0, tag: str = "") -> "TruncatedOperator":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D matrix, got shape {matrix.shape}")
        rows, cols = matrix.shape
        return cls(matrix, cols, rows, float(error_envelope), tag)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def is_square(self) -> bool:
        return self.domain_dim == self.codomain_dim

    @property
    def is_exact(self) -> bool:
        return self.error_envelope == 0.0

    def to_dict(self) -> Dict:
        return {
            "rows": self.codomain_dim,
            "cols": self.domain_dim,
            "error_envelope": self.error_envelope,
            "tag": self.tag,
        }


@dataclass(frozen=True, eq=False)
class ModelSpaceBasis:
    """Orthonormal coefficient columns spanning the truncated model space of a finite Blaschke product."""
    basis_matrix: np.ndarray
    degree: int
    truncation_defect: float = 0.0

    def projection(self) -> TruncatedOperator:
        Q = self.basis_matrix
        return TruncatedOperator.of(Q @ Q.conj().T, self.truncation_defect, "model-basis-projection")


@dataclass
class IdentityReport:
    """
    Outcome of one operator-identity check.

    residuals holds the checked max-modulus residuals; notes holds figures that are
    reported but not held to the budget.
    """
    name: str
    core_dim: int
    residuals: Dict[str, float]
    tail_bound: float = 0.0
    tail_budget: float = 0.0
    tolerance: float = IDENTITY_TOL
    out_of_hypothesis: bool = False
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        if self.out_of_hypothesis:
            return False
        limit = self.tail_budget + self.tolerance
        return all(value <= limit for value in self.residuals.values())

    @property
    def failing(self) -> List[str]:
        limit = self.tail_budget + self.tolerance
        return [name for name, value in self.residuals.items() if value > limit]

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "core_dim": self.core_dim,
            "residuals": dict(self.residuals),
            "residual": self.residual,
            "tail_bound": self.tail_bound,
            "tail_budget": self.tail_budget,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "out_of_hypothesis": self.out_of_hypothesis,
            "notes": dict(self.notes),
        }


def operator_norm(matrix: np.ndarray) -> float:
    """Spectral norm of a truncated matrix."""
    if matrix.size == 0:
        return 0.0
    return float(scipy.linalg.norm(matrix, 2))


def max_residual(lhs: np.ndarray, rhs: np.ndarray, core: Optional[int] = None) -> float:
    difference = lhs - rhs
    if core is not None:
        difference = difference[:core, :core]
    if difference.size == 0:
        return 0.0
    return float(np.max(np.abs(difference)))


# ---------------------------------------------------------------------------
# builders


def identity_operator(N: int) -> TruncatedOperator:
    return TruncatedOperator.of(np.eye(N, dtype=complex), 0.0, "I")


def toeplitz(f: FourierSymbol, N: int, rows: Optional[int] = None) -> TruncatedOperator:
    """
    Truncated Toeplitz matrix with entry (j, k) = f^(j - k).

    rows > N gives the rectangular factor used for analytic inner symbols.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rows = N if rows is None else rows
    if rows < 1:
        raise ValueError("rows must be at least 1")
    column = f.coeffs_at(np.arange(rows))
    first_row = f.coeffs_at(-np.arange(N))
    matrix = scipy.linalg.toeplitz(column, first_row)
    return TruncatedOperator.of(matrix, f.tail_bound, f"T[{f.provenance}]")


def hankel(f: FourierSymbol, N: int) -> TruncatedOperator:
    """Truncated Hankel matrix with entry (j, k) = f^(-(j + k + 1))."""
    if N < 1:
        raise ValueError("N must be at least 1")
    column = f.coeffs_at(-(np.arange(N) + 1))
    last_row = f.coeffs_at(-(N + np.arange(N)))
    matrix = scipy.linalg.hankel(column, last_row)
    return TruncatedOperator.of(matrix, f.tail_bound, f"H[{f.provenance}]")


def isometric_factor(B: BlaschkeProduct, N: int) -> TruncatedOperator:
    """Rectangular (N+W) x N analytic Toeplitz factor of B with T^H T = I up to rounding."""
    W = window_for_tail(B, ISOMETRY_TAIL, start=B.degree + 1)
    symbol = taylor_coeffs(B, N + W)
    return toeplitz(symbol, N, rows=N + W)


def _factor_sequence(B: BlaschkeProduct) -> List[Tuple[complex, float]]:
    """Zeros of B in product order, origin factors first, with 1 - |a|^2."""
    zeros, offsets = B.nonzero_zeros()
    gaps = one_minus_modulus_sq(zeros, offsets)
    sequence = [(0j, 1.0)] * B.origin_order
    sequence.extend((complex(a), float(g)) for a, g in zip(zeros, gaps))
    return sequence


def _tmw_columns(B: BlaschkeProduct, N: int) -> np.ndarray:
    """Takenaka-Malmquist-Walsh functions of B expanded to N Taylor coefficients."""
    columns = []
    running = np.zeros(N, dtype=complex)
    running[0] = 1.0
    powers = np.arange(N)
    for a, gap in _factor_sequence(B):
        kernel = np.sqrt(gap) * np.conj(a) ** powers
        columns.append(np.convolve(running, kernel)[:N])
        if a == 0:
            factor = np.zeros(N, dtype=complex)
            if N > 1:
                factor[1] = 1.0
        else:
            factor = blaschke_factor_series(a, gap, N)
        running = np.convolve(running, factor)[:N]
    if not columns:
        return np.zeros((N, 0), dtype=complex)
    return np.column_stack(columns)


def _gram_defect(V: np.ndarray) -> float:
    if V.shape[1] == 0:
        return 0.0
    E = np.eye(V.shape[1]) - V.conj().T @ V
    return float(scipy.linalg.norm(E, 2))


def _compression_envelope(B: BlaschkeProduct, N: int) -> float:
    """Distance bound between the finite-section projection and the compressed true projection."""
    zeros, _ = B.nonzero_zeros()
    if zeros.size == 0:
        return 0.0
    defect = _gram_defect(_tmw_columns(B, N))
    if defect >= 1.0:
        return 1.0
    return defect / (1.0 - defect)


def model_space_basis(B: BlaschkeProduct, N: int, guard: int = DEFAULT_GUARD) -> ModelSpaceBasis:
    """
    Orthonormal basis of the model space of B truncated to N coefficients.

    Columns are the Takenaka-Malmquist-Walsh functions re-orthonormalized by QR with a
    positive diagonal; the Gram defect before re-orthonormalization is kept as truncation_defect.
    """
    d = B.degree
    if N < d + guard:
        raise TruncationError(f"N={N} is below degree {d} plus guard window {guard}")
    V = _tmw_columns(B, N)
    if d == 0:
        return ModelSpaceBasis(V, 0, 0.0)
    defect = _gram_defect(V)
    Q, R = scipy.linalg.qr(V, mode="economic")
    diagonal = np.diag(R)
    magnitude = np.abs(diagonal)
    phases = np.ones(d, dtype=complex)
    nonzero = magnitude > 0
    phases[nonzero] = diagonal[nonzero] / magnitude[nonzero]
    return ModelSpaceBasis(Q * phases, d, defect)


def numerator_shifts(B: BlaschkeProduct, N: int) -> np.ndarray:
    """N x (N - d) matrix whose columns are z^j p, p the numerator polynomial of B."""
    columns = N - B.degree
    if columns <= 0:
        return np.zeros((N, 0), dtype=complex)
    numerator = B.numerator_coefficients()
    column = np.zeros(N, dtype=complex)
    column[:numerator.size] = numerator
    return scipy.linalg.toeplitz(column, np.zeros(columns, dtype=complex))


def range_projection(spanning: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the column span of a full-column-rank matrix."""
    size = spanning.shape[0]
    if spanning.shape[1] == 0:
        return np.zeros((size, size), dtype=complex)
    Q, _ = scipy.linalg.qr(spanning, mode="economic")
    P = Q @ Q.conj().T
    return 0.5 * (P + P.conj().T)


def submodule_projection(B: BlaschkeProduct, N: int, guard: int = 0) -> TruncatedOperator:
    """
    Orthogonal projection onto B H^2 intersected with span{1, ..., z^(N-1)}.

    That subspace is spanned by the shifts z^j p for j < N - d, where p is the numerator
    polynomial of B, so the projection is exact at every N >= d.
    """
    d = B.degree
    if N < 1:
        raise ValueError("N must be at least 1")
    if N < d + guard:
        raise TruncationError(f"N={N} is below degree {d} plus guard window {guard}")
    zeros, _ = B.nonzero_zeros()
    if zeros.size == 0:
        diagonal = np.zeros(N, dtype=complex)
        diagonal[d:] = 1.0
        return TruncatedOperator.of(np.diag(diagonal), 0.0, "P_submodule")
    P = range_projection(numerator_shifts(B, N))
    return TruncatedOperator.of(P, _compression_envelope(B, N), "P_submodule")


def model_projection(B: BlaschkeProduct, N: int, guard: int = 0) -> TruncatedOperator:
    """Complement of submodule_projection; trace equals deg B for N >= deg B."""
    P = submodule_projection(B, N, guard)
    return TruncatedOperator.of(np.eye(N) - P.matrix, P.error_envelope, "P_model")


def projection_defects(P: TruncatedOperator) -> Dict[str, float]:
    M = P.matrix
    return {
        "idempotency": max_residual(M @ M, M),
        "self_adjointness": max_residual(M, M.conj().T),
    }


# ---------------------------------------------------------------------------
# algebra


def compose(A: TruncatedOperator, B: TruncatedOperator) -> TruncatedOperator:
    if A.domain_dim != B.codomain_dim:
        raise DimensionMismatchError(f"cannot compose {A.shape} with {B.shape}")
    envelope = 0.0
    if A.error_envelope or B.error_envelope:
        envelope = (
            A.error_envelope * operator_norm(B.matrix)
            + operator_norm(A.matrix) * B.error_envelope
            + A.error_envelope * B.error_envelope
        )
    return TruncatedOperator.of(A.matrix @ B.matrix, envelope, f"{A.tag}*{B.tag}")


def adjoint(A: TruncatedOperator) -> TruncatedOperator:
    return TruncatedOperator.of(A.matrix.conj().T, A.error_envelope, f"{A.tag}^H")


def commutator(A: TruncatedOperator, B: TruncatedOperator) -> TruncatedOperator:
    """AB - BA."""
    if not (A.is_square and B.is_square and A.shape == B.shape):
        raise DimensionMismatchError(f"commutator needs equal square shapes, got {A.shape} and {B.shape}")
    AB = compose(A, B)
    BA = compose(B, A)
    return TruncatedOperator.of(
        AB.matrix - BA.matrix,
        AB.error_envelope + BA.error_envelope,
        f"[{A.tag},{B.tag}]",
    )


# ---------------------------------------------------------------------------
# identity verifiers


def core_block_size(N: int, margin: int, guard: int) -> int:
    """Side of the top-left block untouched by truncation."""
    if guard < 1:
        raise TruncationError(f"guard window {guard} leaves no margin between core block and truncation edge")
    size = N - margin
    if size < 1:
        raise TruncationError(f"N={N} leaves no core block for symbol bands totalling {margin}")
    return size


def verify_toeplitz_identity(f: FourierSymbol, g: FourierSymbol, N: int, guard: int = 1) -> IdentityReport:
    """T_fg = T_f T_g + H_f~ H_g on the core block of side N - band(f) - band(g)."""
    core = core_block_size(N, f.band + g.band, guard)
    fg = product_symbol(f, g)
    lhs = toeplitz(fg, N).matrix
    rhs = toeplitz(f, N).matrix @ toeplitz(g, N).matrix + hankel(transform(f, "tilde"), N).matrix @ hankel(g, N).matrix
    residual = max_residual(lhs, rhs, core)
    report = IdentityReport(
        name="toeplitz_product",
        core_dim=core,
        residuals={"toeplitz_product": residual},
        tail_bound=fg.tail_bound,
        tail_budget=10.0 * fg.tail_bound,
    )
    logger.debug("[Verify] toeplitz_product N=%d core=%d residual=%.3e", N, core, residual)
    return report


def verify_hankel_adjoint(f: FourierSymbol, N: int) -> IdentityReport:
    """hankel(f)^H = hankel(f*) entrywise."""
    lhs = hankel(f, N).matrix.conj().T
    rhs = hankel(transform(f, "star"), N).matrix
    return IdentityReport(
        name="hankel_adjoint",
        core_dim=N,
        residuals={"hankel_adjoint": max_residual(lhs, rhs)},
        tolerance=0.0,
    )


def commutator_block_residual(P: TruncatedOperator, Q: TruncatedOperator) -> float:
    """
    Distance between [P, Q] and its block form in an orthonormal basis adapted to P.

    With U = [ran P | ker P] and U^H Q U = [[Q11, Q12], [Q21, Q22]], the commutator of an
    orthogonal projection P with Q is U [[0, Q12], [-Q21, 0]] U^H.
    """
    if not (P.is_square and P.shape == Q.shape):
        raise DimensionMismatchError(f"block form needs equal square shapes, got {P.shape} and {Q.shape}")
    image = scipy.linalg.orth(P.matrix)
    kernel = scipy.linalg.null_space(P.matrix)
    U = np.hstack([image, kernel])
    if U.shape[1] != P.shape[0]:
        raise TruncationError(f"range and kernel of P span {U.shape[1]} of {P.shape[0]} dimensions")
    r = image.shape[1]
    K = U.conj().T @ Q.matrix @ U
    expected = np.zeros_like(K)
    expected[:r, r:] = K[:r, r:]
    expected[r:, :r] = -K[r:, :r]
    C = U.conj().T @ commutator(P, Q).matrix @ U
    return max_residual(C, expected)


def verify_thmA_chain(
    phi: BlaschkeProduct,
    psi: BlaschkeProduct,
    N: int,
    guard: int = DEFAULT_GUARD,
) -> IdentityReport:
    """
    Matrix checks of the commutator reduction for two finite Blaschke products.

    adjoint_chain:   T_phi^H P_psi (I - P_phi) T_psi = X - X Y X,
                     X = T(conj(phi) psi), Y = T(phi conj(psi)), P_theta = T_theta T_theta^H
    hankel_defect:   X (I - X^H X) = X H_x^H H_x with x = conj(phi) psi
    commutator_block_form: [P_phi, P_psi] against [[0, Q12], [-Q21, 0]], the blocks of P_psi in
                           a basis adapted to ran P_phi + ker P_phi, on exact finite sections

    Everything is computed at side N + 3W + guard from W = N + guard Taylor coefficients and
    reported on the leading N x N block, so only the Taylor tails enter the residual.
    """
    if N <= phi.degree + psi.degree + guard:
        raise TruncationError(
            f"N={N} must exceed combined degree {phi.degree + psi.degree} plus guard window {guard}"
        )
    core = core_block_size(N, 0, guard)
    W = N + guard
    L = N + 3 * W + guard
    phi_s = taylor_coeffs(phi, W)
    psi_s = taylor_coeffs(psi, W)
    T_phi = toeplitz(phi_s, L).matrix
    T_psi = toeplitz(psi_s, L).matrix
    eye = np.eye(L)
    P_phi = T_phi @ T_phi.conj().T
    P_psi = T_psi @ T_psi.conj().T

    A = (eye - P_phi) @ P_psi @ T_phi
    lhs = A.conj().T @ T_psi
    x_sym = product_symbol(transform(phi_s, "conjugate"), psi_s)
    y_sym = product_symbol(phi_s, transform(psi_s, "conjugate"))
    X = toeplitz(x_sym, L).matrix
    Y = toeplitz(y_sym, L).matrix
    chain = max_residual(lhs, X - X @ Y @ X, core)

    H = hankel(x_sym, L).matrix
    defect = max_residual(X @ (eye - X.conj().T @ X), X @ H.conj().T @ H, core)

    block = commutator_block_residual(submodule_projection(phi, N), submodule_projection(psi, N))

    tail = x_sym.tail_bound
    report = IdentityReport(
        name="commutator_reduction",
        core_dim=core,
        residuals={"adjoint_chain": chain, "hankel_defect": defect, "commutator_block_form": block},
        tail_bound=tail,
        tail_budget=10.0 * tail,
        notes={"padded_dim": L, "taylor_terms": W},
    )
    logger.info(
        "[Verify] commutator_reduction N=%d chain=%.3e defect=%.3e block=%.3e tail=%.3e",
        N, chain, defect, block, tail,
    )
    return report


# ---------------------------------------------------------------------------
# spectral probes


def hankel_toeplitz_probe(
    f: FourierSymbol,
    g: FourierSymbol,
    dims: Sequence[int],
    **verdict_options,
) -> SpectralReport:
    """Singular-value profile of H_f T_g across truncations."""
    family = [(N, compose(hankel(f, N), toeplitz(g, N))) for N in dims]
    return compactness_verdict(family, **verdict_options)


def commutator_probe(
    phi: BlaschkeProduct,
    psi: BlaschkeProduct,
    dims: Sequence[int],
    **verdict_options,
) -> SpectralReport:
    """Singular-value profile of the commutator of the two submodule projections."""
    family = [(N, commutator(submodule_projection(phi, N), submodule_projection(psi, N))) for N in dims]
    return compactness_verdict(family, **verdict_options)
