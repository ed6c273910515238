"""
Tests for Fourier symbols, Taylor expansions and tail bounds
"""
import numpy as np
import pytest

from core.blaschke import BlaschkeProduct
from core.errors import TruncationError
from core.scenario_pool import random_band_symbol
from core.fourier import (
    FourierSymbol,
    boundary_samples,
    product_symbol,
    tail_bound,
    taylor_coeffs,
    transform,
    window_for_tail,
)

SEED = 20240611


def test_taylor_coeffs_of_z():
    f = taylor_coeffs(BlaschkeProduct.monomial(1), 4)
    np.testing.assert_allclose(f.coeffs_at(range(4)), [0, 1, 0, 0])
    assert f.provenance == "exact-polynomial"
    assert f.tail_bound == 0.0


def test_taylor_coeffs_single_zero():
    f = taylor_coeffs(BlaschkeProduct.from_zeros([0.5]), 6)
    expected = [0.5, -0.75, -0.375, -0.1875, -0.09375, -0.046875]
    np.testing.assert_allclose(f.coeffs_at(range(6)), expected, atol=1e-15)
    assert f.provenance == "truncated-analytic"
    assert f.is_analytic


def test_taylor_coeffs_norm_approaches_one():
    B = BlaschkeProduct.from_zeros([0.3, -0.5j, 0.6 + 0.2j])
    norms = [taylor_coeffs(B, N).l2_norm_sq() for N in (4, 16, 64)]
    assert all(value <= 1.0 + 1e-12 for value in norms)
    assert norms[0] < norms[1] <= norms[2]
    assert norms[2] == pytest.approx(1.0, abs=1e-12)


def test_tail_bound_dominates_dropped_mass():
    B = BlaschkeProduct.from_zeros([0.7, -0.4 + 0.3j])
    full = taylor_coeffs(B, 400).coeffs_at(range(400))
    for N in (5, 20, 60):
        dropped = float(np.sum(np.abs(full[N:])))
        assert dropped <= tail_bound(B, N) * (1.0 + 1e-9)
    assert tail_bound(B, 60) < tail_bound(B, 20) < tail_bound(B, 5)


def test_tail_bound_of_monomial():
    z3 = BlaschkeProduct.monomial(3)
    assert tail_bound(z3, 4) == 0.0
    assert tail_bound(z3, 3) == 1.0


def test_window_for_tail():
    B = BlaschkeProduct.from_zeros([0.6, 0.5j])
    W = window_for_tail(B, 1e-14)
    assert tail_bound(B, W) <= 1e-14
    assert tail_bound(B, W - 1) > 1e-14


def test_window_for_tail_gives_up_near_boundary():
    B = BlaschkeProduct.from_zeros([1.0 - 1e-9])
    with pytest.raises(TruncationError):
        window_for_tail(B, 1e-16)


def test_transforms():
    z = FourierSymbol.monomial(1)
    assert transform(z, "star").coeff(1) == 1
    assert transform(z, "conjugate").coeff(-1) == 1
    assert transform(z, "conjugate").coeff(1) == 0
    assert transform(z, "tilde").coeff(-1) == 1

    f = FourierSymbol.from_dict({1: 1j, -2: 2.0})
    star = transform(f, "star")
    assert star.coeff(1) == -1j
    np.testing.assert_array_equal(transform(star, "star").coefficients, f.coefficients)
    with pytest.raises(ValueError):
        transform(f, "flip")


def test_product_symbol():
    one = product_symbol(FourierSymbol.monomial(1), FourierSymbol.monomial(-1))
    assert one.coeff(0) == 1
    assert one.l1_norm() == 1
    z5 = product_symbol(FourierSymbol.monomial(2), FourierSymbol.monomial(3))
    assert z5.coeff(5) == 1
    assert z5.band == 5
    assert z5.provenance == "exact-polynomial"


def test_boundary_samples():
    np.testing.assert_allclose(boundary_samples(FourierSymbol.monomial(0), 5), np.ones(5))
    np.testing.assert_allclose(boundary_samples(FourierSymbol.monomial(1), 4), [1, 1j, -1, -1j], atol=1e-15)


def test_boundary_samples_of_blaschke_are_unimodular():
    B = BlaschkeProduct.from_zeros([0.3, 0.4j])
    samples = boundary_samples(taylor_coeffs(B, 80), 64)
    np.testing.assert_allclose(np.abs(samples), 1.0, atol=1e-12)


def test_symbol_serialization():
    f = FourierSymbol.from_dict({-1: 2.0, 1: 1j})
    data = f.to_dict()
    assert data["window"] == 1
    assert data["entries"] == [[-1, 2.0, 0.0], [0, 0.0, 0.0], [1, 0.0, 1.0]]
    assert data["provenance"] == "exact-polynomial"
    assert [row["n"] for row in f.rows()] == [-1, 0, 1]


def test_symbol_rejects_wrong_length():
    with pytest.raises(ValueError):
        FourierSymbol(np.zeros(4), 2)


def test_from_coefficients():
    f = FourierSymbol.from_coefficients([1.0, 2.0, 3.0], start_index=-4)
    assert f.window == 4
    assert [f.coeff(n) for n in (-4, -3, -2, -1)] == [1, 2, 3, 0]
    g = FourierSymbol.from_coefficients([5.0, 6.0], start_index=1, tail_bound=1e-9)
    assert g.window == 2
    assert g.coeff(0) == 0 and g.coeff(2) == 6
    assert g.tail_bound == 1e-9
    assert FourierSymbol.from_coefficients([]).window == 0
    analytic = FourierSymbol.analytic(np.array([1.0, 0.5]))
    np.testing.assert_array_equal(analytic.coefficients, [0.0, 1.0, 0.5])


@pytest.mark.parametrize("band", [0, 1, 4, 9])
def test_boundary_samples_parseval(band):
    rng = np.random.default_rng(SEED + band)
    f = random_band_symbol(rng, band)
    for K in (2 * band + 1, 4 * band + 7):
        samples = boundary_samples(f, K)
        assert np.mean(np.abs(samples) ** 2) == pytest.approx(f.l2_norm_sq(), rel=1e-12)


def test_product_symbol_matches_pointwise_product():
    rng = np.random.default_rng(SEED)
    for band_f, band_g in [(1, 2), (3, 5), (6, 0)]:
        f = random_band_symbol(rng, band_f)
        g = random_band_symbol(rng, band_g)
        K = 2 * (band_f + band_g) + 5
        expected = boundary_samples(f, K) * boundary_samples(g, K)
        np.testing.assert_allclose(boundary_samples(product_symbol(f, g), K), expected, atol=1e-10)
