"""
Truncated H^2 of the bidisc and tridisc: Kronecker lifts, inner projections of
variable-separated symbols, defect operators and rank growth.

Variables are indexed from 0; the basis order is lexicographic on multi-indices with
the first variable most significant, which is the order np.kron produces.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Literal, Sequence

import numpy as np
import scipy.linalg

from .blaschke import BlaschkeProduct
from .errors import DimensionMismatchError, HypothesisError, TruncationError
from .fourier import taylor_coeffs
from .operators import (
    PROJECTION_TOL,
    IdentityReport,
    TruncatedOperator,
    max_residual,
    model_projection,
    numerator_shifts,
    range_projection,
    submodule_projection,
    toeplitz,
)
from .spectral import NONCOMPACT_LEVEL, compactness_verdict, singular_values

logger = logging.getLogger(__name__)

Separability = Literal["separable", "same-variable", "not-applicable"]
DefectSign = Literal["proof", "paper"]

MAX_VARIABLES = 3


@dataclass(frozen=True)
class MultiBasis:
    n: int
    per_variable_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.per_variable_dims)
        if self.n not in (2, MAX_VARIABLES):
            raise ValueError(f"only 2 or 3 variables are supported, got {self.n}")
        if len(dims) != self.n:
            raise DimensionMismatchError(f"{self.n} variables need {self.n} dims, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise ValueError(f"per-variable dims must be positive: {dims}")
        object.__setattr__(self, "per_variable_dims", dims)

    @classmethod
    def cube(cls, n: int, N: int) -> "MultiBasis":
        return cls(n, (N,) * n)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.per_variable_dims))

    def multi_index(self, flat: int) -> tuple:
        return tuple(int(i) for i in np.unravel_index(flat, self.per_variable_dims))


@dataclass(frozen=True, eq=False)
class SeparatedSymbolPair:
    """phi acting in variable phi_variable and psi in psi_variable of an n_vars-variable polydisc."""
    phi: BlaschkeProduct
    psi: BlaschkeProduct
    phi_variable: int = 0
    psi_variable: int = 1
    n_vars: int = 2

    @property
    def degrees(self) -> tuple:
        return self.phi.degree, self.psi.degree

    def to_dict(self) -> Dict:
        return {
            "phi_variable": self.phi_variable,
            "psi_variable": self.psi_variable,
            "n_vars": self.n_vars,
            "degrees": list(self.degrees),
            "separability": separability_check(self),
        }


def separability_check(pair: SeparatedSymbolPair) -> Separability:
    variables = (pair.phi_variable, pair.psi_variable)
    if any(not 0 <= v < pair.n_vars for v in variables):
        return "not-applicable"
    if pair.phi.degree == 0 or pair.psi.degree == 0:
        return "not-applicable"
    if pair.phi_variable == pair.psi_variable:
        return "same-variable"
    return "separable"


def require_separable(pair: SeparatedSymbolPair) -> None:
    status = separability_check(pair)
    if status != "separable":
        raise HypothesisError(
            f"symbol pair is {status} (variables {pair.phi_variable}, {pair.psi_variable}, "
            f"degrees {pair.phi.degree}, {pair.psi.degree}); a separated pair of nonconstant symbols is required"
        )


def _check_basis(pair: SeparatedSymbolPair, basis: MultiBasis) -> None:
    if basis.n != pair.n_vars:
        raise DimensionMismatchError(f"pair lives on {pair.n_vars} variables, basis has {basis.n}")


def lift_projection(P1: TruncatedOperator, variable: int, basis: MultiBasis) -> TruncatedOperator:
    """I x ... x P1 x ... x I with P1 in the given variable."""
    if not 0 <= variable < basis.n:
        raise DimensionMismatchError(f"variable {variable} outside 0..{basis.n - 1}")
    dim = basis.per_variable_dims[variable]
    if P1.shape != (dim, dim):
        raise DimensionMismatchError(f"operator shape {P1.shape} does not match variable dim {dim}")
    factors = [np.eye(d, dtype=complex) for d in basis.per_variable_dims]
    factors[variable] = P1.matrix
    return TruncatedOperator.of(reduce(np.kron, factors), P1.error_envelope, f"lift{variable}({P1.tag})")


def _require_room(symbol: BlaschkeProduct, dim: int, guard: int) -> None:
    if dim < symbol.degree + guard:
        raise TruncationError(f"dim {dim} is below degree {symbol.degree} plus guard window {guard}")


def lifted_submodule_projections(pair: SeparatedSymbolPair, basis: MultiBasis, guard: int = 0):
    """(P_phi, P_psi), the lifted projections onto phi H^2 and psi H^2."""
    _check_basis(pair, basis)
    lifted = []
    for symbol, variable in ((pair.phi, pair.phi_variable), (pair.psi, pair.psi_variable)):
        dim = basis.per_variable_dims[variable]
        _require_room(symbol, dim, guard)
        lifted.append(lift_projection(submodule_projection(symbol, dim), variable, basis))
    return tuple(lifted)


def product_of_inner_projections(
    pair: SeparatedSymbolPair,
    basis: MultiBasis,
    guard: int = 0,
) -> TruncatedOperator:
    """Product of the lifted model projections of phi and psi."""
    _check_basis(pair, basis)
    lifted = []
    for symbol, variable in ((pair.phi, pair.phi_variable), (pair.psi, pair.psi_variable)):
        dim = basis.per_variable_dims[variable]
        _require_room(symbol, dim, guard)
        lifted.append(lift_projection(model_projection(symbol, dim), variable, basis))
    first, second = lifted
    envelope = first.error_envelope + second.error_envelope
    return TruncatedOperator.of(first.matrix @ second.matrix, envelope, "P_Qphi*P_Qpsi")


def defect_operator(
    pair: SeparatedSymbolPair,
    basis: MultiBasis,
    sign: DefectSign = "proof",
    guard: int = 0,
) -> TruncatedOperator:
    """
    I - P_phi - P_psi + P_phi P_psi for sign "proof";
    sign "paper" flips the sign of the last term.
    """
    if sign not in ("proof", "paper"):
        raise ValueError(f"unknown defect sign: {sign}")
    P_phi, P_psi = lifted_submodule_projections(pair, basis, guard)
    overlap = P_phi.matrix @ P_psi.matrix
    last = overlap if sign == "proof" else -overlap
    matrix = np.eye(basis.total_dim) - P_phi.matrix - P_psi.matrix + last
    envelope = 2.0 * (P_phi.error_envelope + P_psi.error_envelope)
    return TruncatedOperator.of(matrix, envelope, f"Delta[{sign}]")


def _product_symbol(phi: BlaschkeProduct, psi: BlaschkeProduct) -> BlaschkeProduct:
    return BlaschkeProduct(
        phi.zeros.concat(psi.zeros),
        phi.unimodular_constant * psi.unimodular_constant,
        phi.origin_zero_multiplicity + psi.origin_zero_multiplicity,
    )


def product_submodule_projection(pair: SeparatedSymbolPair, basis: MultiBasis, guard: int = 0) -> TruncatedOperator:
    """
    Projection onto phi psi H^2 intersected with the box of polynomials.

    For separated symbols the spanning set is the Kronecker product of the per-variable
    numerator shifts; for a shared variable it is the one-variable product symbol.
    """
    _check_basis(pair, basis)
    dims = basis.per_variable_dims
    if pair.phi_variable == pair.psi_variable:
        variable = pair.phi_variable
        product = _product_symbol(pair.phi, pair.psi)
        _require_room(product, dims[variable], guard)
        return lift_projection(submodule_projection(product, dims[variable]), variable, basis)
    factors = [np.eye(d, dtype=complex) for d in dims]
    envelope = 0.0
    for symbol, variable in ((pair.phi, pair.phi_variable), (pair.psi, pair.psi_variable)):
        _require_room(symbol, dims[variable], guard)
        factors[variable] = numerator_shifts(symbol, dims[variable])
        envelope += submodule_projection(symbol, dims[variable]).error_envelope
    return TruncatedOperator.of(range_projection(reduce(np.kron, factors)), envelope, "P_phipsi")


def intersection_projection(
    P1: TruncatedOperator,
    P2: TruncatedOperator,
    rcond: float = 1e-8,
) -> TruncatedOperator:
    """Projection onto Ran P1 intersected with Ran P2, from the null space of [U1, -U2]."""
    if P1.shape != P2.shape:
        raise DimensionMismatchError(f"cannot intersect ranges of {P1.shape} and {P2.shape}")
    size = P1.shape[0]
    U1 = scipy.linalg.orth(P1.matrix, rcond=rcond)
    U2 = scipy.linalg.orth(P2.matrix, rcond=rcond)
    envelope = P1.error_envelope + P2.error_envelope
    if U1.shape[1] == 0 or U2.shape[1] == 0:
        return TruncatedOperator.of(np.zeros((size, size)), envelope, "P_intersection")
    kernel = scipy.linalg.null_space(np.hstack([U1, -U2]), rcond=rcond)
    common = U1 @ kernel[:U1.shape[1], :]
    return TruncatedOperator.of(range_projection(common), envelope, "P_intersection")


def _analytic_toeplitz_lift(symbol: BlaschkeProduct, variable: int, basis: MultiBasis) -> np.ndarray:
    dim = basis.per_variable_dims[variable]
    T = toeplitz(taylor_coeffs(symbol, dim), dim)
    return lift_projection(T, variable, basis).matrix


def verify_two_subspace_identity(
    pair: SeparatedSymbolPair,
    basis: MultiBasis,
    defect_sign: DefectSign = "proof",
    guard: int = 0,
) -> IdentityReport:
    """
    Checks P_Q(phi psi) - P_Q(phi) - P_Q(psi) = -Delta entrywise and compares the range
    intersection of the lifted submodules with the product submodule.

    Both defect signs are evaluated; defect_sign picks the one held to the tolerance.
    Pairs that are not separated are reported out of hypothesis instead of raising.
    """
    status = separability_check(pair)
    P_phi, P_psi = lifted_submodule_projections(pair, basis, guard)
    P_prod = product_submodule_projection(pair, basis, guard)
    eye = np.eye(basis.total_dim)
    lhs = (eye - P_prod.matrix) - (eye - P_phi.matrix) - (eye - P_psi.matrix)

    residuals_by_sign = {}
    for sign in ("proof", "paper"):
        delta = defect_operator(pair, basis, sign, guard).matrix
        residuals_by_sign[sign] = max_residual(lhs, -delta)

    intersection = intersection_projection(P_phi, P_psi)
    intersection_gap = max_residual(intersection.matrix, P_prod.matrix)

    T_phi = _analytic_toeplitz_lift(pair.phi, pair.phi_variable, basis)
    T_psi = _analytic_toeplitz_lift(pair.psi, pair.psi_variable, basis)
    cross = float(np.max(np.abs(T_phi.conj().T @ T_psi - T_psi @ T_phi.conj().T)))

    envelope = P_phi.error_envelope + P_psi.error_envelope + P_prod.error_envelope
    report = IdentityReport(
        name="two_subspace",
        core_dim=basis.total_dim,
        residuals={"two_subspace": residuals_by_sign[defect_sign], "intersection": intersection_gap},
        tail_bound=envelope,
        tail_budget=10.0 * envelope,
        tolerance=PROJECTION_TOL,
        out_of_hypothesis=status != "separable",
        notes={
            "defect_sign": defect_sign,
            "residual_proof_sign": residuals_by_sign["proof"],
            "residual_paper_sign": residuals_by_sign["paper"],
            "sign_difference": float(np.max(np.abs(2.0 * P_phi.matrix @ P_psi.matrix))),
            "cross_commutator": cross,
            "separability": status,
            "per_variable_dims": list(basis.per_variable_dims),
        },
    )
    if report.out_of_hypothesis:
        logger.warning("[Verify] two_subspace pair is %s; identity reported out of hypothesis", status)
    return report


@dataclass
class GrowthReport:
    dims: List[int]
    counts: List[int]
    expected: List[int]
    verdict: str
    heuristic_verdict: str = ""

    @property
    def matches_expected(self) -> bool:
        return self.counts == self.expected

    @property
    def strictly_increasing(self) -> bool:
        return len(self.counts) >= 2 and all(b > a for a, b in zip(self.counts, self.counts[1:]))

    def rows(self) -> List[Dict]:
        return [{"dim": N, "count": c, "expected": e} for N, c, e in zip(self.dims, self.counts, self.expected)]

    def to_dict(self) -> Dict:
        return {
            "dims": list(self.dims),
            "counts": list(self.counts),
            "expected": list(self.expected),
            "verdict": self.verdict,
            "heuristic_verdict": self.heuristic_verdict,
            "matches_expected": self.matches_expected,
        }


def tridisc_growth(pair: SeparatedSymbolPair, dims: Sequence[int], guard: int = 0) -> GrowthReport:
    """
    Count singular values >= 1/2 of the tridisc product projection on cubes N x N x N.

    The expected count is deg phi * deg psi * N, the free third variable contributing
    a full graded block.
    """
    if pair.n_vars != MAX_VARIABLES:
        raise HypothesisError(f"growth check runs on the tridisc, pair has {pair.n_vars} variables")
    require_separable(pair)
    dims = [int(N) for N in dims]
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing: {dims}")
    p, q = pair.degrees
    family = []
    counts = []
    for N in dims:
        product = product_of_inner_projections(pair, MultiBasis.cube(MAX_VARIABLES, N), guard)
        family.append((N, product))
        counts.append(int(np.count_nonzero(singular_values(product) >= NONCOMPACT_LEVEL)))
        logger.info("[Rank] tridisc N=%d count=%d expected=%d", N, counts[-1], p * q * N)
    expected = [p * q * N for N in dims]
    heuristic = compactness_verdict(family).verdict if len(dims) >= 3 else "inconclusive"
    report = GrowthReport(
        dims=dims, counts=counts, expected=expected, verdict="inconclusive", heuristic_verdict=heuristic
    )
    # growth needs at least two dims to be observed
    if report.strictly_increasing:
        report.verdict = "noncompact-consistent"
    return report
