"""
Tests for bidisc and tridisc inner projections, defect operators and rank growth
"""
import numpy as np
import pytest

from core.blaschke import BlaschkeProduct
from core.errors import DimensionMismatchError, HypothesisError
from core.operators import PROJECTION_TOL, TruncatedOperator, model_projection, projection_defects
from core.polydisc import (
    MultiBasis,
    SeparatedSymbolPair,
    defect_operator,
    intersection_projection,
    lift_projection,
    lifted_submodule_projections,
    product_of_inner_projections,
    product_submodule_projection,
    require_separable,
    separability_check,
    tridisc_growth,
    verify_two_subspace_identity,
)
from core.scenario_pool import standard_product
from core.spectral import rank_estimate, singular_values

SEED = 20240611
z = BlaschkeProduct.monomial(1)


def test_multi_basis():
    basis = MultiBasis(3, (2, 3, 4))
    assert basis.total_dim == 24
    assert basis.multi_index(5) == (0, 1, 1)
    with pytest.raises(DimensionMismatchError):
        MultiBasis(2, (2, 2, 2))
    with pytest.raises(ValueError):
        MultiBasis(4, (2, 2, 2, 2))


def test_lift_projection():
    basis = MultiBasis(2, (2, 2))
    identity = lift_projection(TruncatedOperator.of(np.eye(2)), 1, basis)
    np.testing.assert_array_equal(identity.matrix, np.eye(4))
    lifted = lift_projection(TruncatedOperator.of(np.diag([1.0, 0.0])), 0, basis)
    np.testing.assert_array_equal(lifted.matrix, np.diag([1, 1, 0, 0]))
    with pytest.raises(DimensionMismatchError):
        lift_projection(TruncatedOperator.of(np.eye(3)), 0, basis)


def test_lifts_in_different_variables_commute():
    rng = np.random.default_rng(SEED)
    basis = MultiBasis(3, (4, 5, 3))
    lifted = []
    for variable, dim in enumerate(basis.per_variable_dims):
        block = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        lifted.append(lift_projection(TruncatedOperator.of(block), variable, basis).matrix)
    for i in range(3):
        for j in range(i + 1, 3):
            np.testing.assert_allclose(lifted[i] @ lifted[j], lifted[j] @ lifted[i], atol=1e-12)
    same = lift_projection(TruncatedOperator.of(np.diag([1.0, 0.0, 0.0, 1.0])), 0, basis).matrix
    assert np.max(np.abs(same @ lifted[0] - lifted[0] @ same)) > 1e-3


def test_separability():
    assert separability_check(SeparatedSymbolPair(z, z, 0, 1)) == "separable"
    assert separability_check(SeparatedSymbolPair(z, z, 0, 0)) == "same-variable"
    assert separability_check(SeparatedSymbolPair(z, z, 1, 2, n_vars=3)) == "separable"
    assert separability_check(SeparatedSymbolPair(BlaschkeProduct(), z, 0, 1)) == "not-applicable"
    with pytest.raises(HypothesisError):
        require_separable(SeparatedSymbolPair(z, z, 0, 0))


def test_product_of_coordinate_projections_is_constants():
    product = product_of_inner_projections(SeparatedSymbolPair(z, z, 0, 1), MultiBasis(2, (4, 4)))
    expected = np.zeros((16, 16))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(product.matrix, expected, atol=1e-15)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_bidisc_rank_is_degree_product(p, q):
    pair = SeparatedSymbolPair(standard_product(p), standard_product(q), 0, 1)
    for N in (12, 16, 20):
        product = product_of_inner_projections(pair, MultiBasis.cube(2, N))
        sigma = singular_values(product)
        np.testing.assert_allclose(sigma[:p * q], 1.0, atol=1e-8)
        assert np.all(sigma[p * q:] < 1e-8)
        defects = projection_defects(product)
        assert defects["idempotency"] < PROJECTION_TOL
        assert defects["self_adjointness"] < PROJECTION_TOL


def test_same_variable_product_is_model_projection():
    basis = MultiBasis(2, (4, 4))
    product = product_of_inner_projections(SeparatedSymbolPair(z, z, 0, 0), basis)
    assert rank_estimate(product) == 4
    lifted = lift_projection(model_projection(z, 4), 0, basis)
    np.testing.assert_allclose(product.matrix, lifted.matrix, atol=1e-15)


def test_defect_equals_product_for_separated_pair():
    basis = MultiBasis(2, (4, 4))
    pair = SeparatedSymbolPair(z, z, 0, 1)
    delta = defect_operator(pair, basis)
    assert rank_estimate(delta) == 1
    np.testing.assert_allclose(delta.matrix, product_of_inner_projections(pair, basis).matrix, atol=1e-12)

    pair = SeparatedSymbolPair(standard_product(2), standard_product(2), 0, 1)
    assert rank_estimate(defect_operator(pair, MultiBasis.cube(2, 12))) == 4


def test_defect_same_variable():
    basis = MultiBasis(2, (6, 6))
    pair = SeparatedSymbolPair(standard_product(2), standard_product(2), 0, 0)
    P_phi, _ = lifted_submodule_projections(pair, basis)
    delta = defect_operator(pair, basis)
    np.testing.assert_allclose(delta.matrix, np.eye(36) - P_phi.matrix, atol=PROJECTION_TOL)


def test_defect_rejects_unknown_sign():
    with pytest.raises(ValueError):
        defect_operator(SeparatedSymbolPair(z, z, 0, 1), MultiBasis(2, (3, 3)), sign="other")


def test_two_subspace_identity_coordinates():
    report = verify_two_subspace_identity(SeparatedSymbolPair(z, z, 0, 1), MultiBasis(2, (3, 3)))
    assert report.passed, report.to_dict()
    assert report.notes["separability"] == "separable"
    assert report.notes["cross_commutator"] < 1e-12


def test_two_subspace_identity_generic_zeros():
    pair = SeparatedSymbolPair(standard_product(1), standard_product(1), 0, 1)
    report = verify_two_subspace_identity(pair, MultiBasis(2, (12, 12)))
    assert report.residuals["two_subspace"] <= 1e-10
    assert report.residuals["intersection"] <= 1e-10
    assert report.passed


def test_two_subspace_identity_paper_sign():
    pair = SeparatedSymbolPair(standard_product(2), standard_product(3), 0, 1)
    report = verify_two_subspace_identity(pair, MultiBasis(2, (12, 12)), defect_sign="paper")
    assert report.notes["residual_proof_sign"] <= 1e-10
    assert report.notes["sign_difference"] > 0.1
    assert report.residuals["two_subspace"] == pytest.approx(report.notes["sign_difference"], rel=1e-6)
    assert not report.passed


def test_two_subspace_identity_same_variable_is_out_of_hypothesis():
    report = verify_two_subspace_identity(SeparatedSymbolPair(z, z, 0, 0), MultiBasis(2, (4, 4)))
    assert report.out_of_hypothesis
    assert not report.passed
    assert report.notes["separability"] == "same-variable"


def test_intersection_matches_product_submodule():
    pair = SeparatedSymbolPair(standard_product(2), standard_product(1), 0, 1)
    basis = MultiBasis(2, (10, 10))
    P_phi, P_psi = lifted_submodule_projections(pair, basis)
    gap = np.max(np.abs(intersection_projection(P_phi, P_psi).matrix - product_submodule_projection(pair, basis).matrix))
    assert gap <= 1e-10


def test_tridisc_coordinate_growth():
    report = tridisc_growth(SeparatedSymbolPair(z, z, 0, 1, n_vars=3), [2, 3, 4])
    assert report.counts == [2, 3, 4]
    assert report.matches_expected
    assert report.verdict == "noncompact-consistent"


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_tridisc_growth_is_pqn(p, q):
    pair = SeparatedSymbolPair(standard_product(p), standard_product(q), 0, 1, n_vars=3)
    report = tridisc_growth(pair, [3, 4, 5, 6])
    assert report.counts == [p * q * N for N in (3, 4, 5, 6)]
    assert report.strictly_increasing
    assert report.heuristic_verdict == "noncompact-consistent"
    assert report.to_dict()["expected"] == report.counts


def test_tridisc_rejects_constant_and_bidisc_pairs():
    with pytest.raises(HypothesisError):
        tridisc_growth(SeparatedSymbolPair(BlaschkeProduct(), z, 0, 1, n_vars=3), [2, 3, 4])
    with pytest.raises(HypothesisError):
        tridisc_growth(SeparatedSymbolPair(z, z, 0, 1), [2, 3, 4])


def test_tridisc_single_dim_is_inconclusive():
    report = tridisc_growth(SeparatedSymbolPair(z, z, 0, 1, n_vars=3), [4])
    assert report.counts == [4]
    assert not report.strictly_increasing
    assert report.verdict == "inconclusive"
    assert report.heuristic_verdict == "inconclusive"


def test_tridisc_two_dims_skip_heuristic():
    report = tridisc_growth(SeparatedSymbolPair(z, z, 0, 1, n_vars=3), [2, 3])
    assert report.verdict == "noncompact-consistent"
    assert report.heuristic_verdict == "inconclusive"
