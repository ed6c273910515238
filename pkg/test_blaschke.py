"""
Tests for pseudo-hyperbolic geometry, Blaschke products and the boundary probe
"""
import math

import numpy as np
import pytest

from core.blaschke import (
    BlaschkeProduct,
    ProbeThresholds,
    ZeroSequence,
    blaschke_eval,
    carleson_product_bound,
    carleson_window_bound,
    exm1_sequences,
    matched_zero_gap,
    probe_conditions,
    prop1_sequences,
    pseudo_hyperbolic,
    separation_profile,
    uniform_separation,
    zero_separation_condition,
)
from core.errors import DimensionMismatchError, DiskDomainError
from utils.grid_utils import dyadic_radii

SEED = 20240611


def exm1_closed_form(n):
    return (1.0 / n) / ((2.0 + 1.0 / n) - 2.0 ** -n * (1.0 + 1.0 / n))


def random_disk_points(rng, count, radius=0.95):
    moduli = radius * np.sqrt(rng.uniform(size=count))
    return moduli * np.exp(2j * np.pi * rng.uniform(size=count))


def disk_automorphism(center, z):
    return (center - z) / (1.0 - np.conj(center) * z)


def test_pseudo_hyperbolic_basic_values():
    z = 0.3 + 0.4j
    assert pseudo_hyperbolic(z, z) == 0.0
    assert pseudo_hyperbolic(0.0, z) == pytest.approx(abs(z), abs=1e-15)
    assert pseudo_hyperbolic(0.75, 0.5) == pytest.approx(0.4, abs=1e-15)


def test_pseudo_hyperbolic_rejects_boundary_points():
    with pytest.raises(DiskDomainError):
        pseudo_hyperbolic(1.0, 0.0)
    with pytest.raises(DiskDomainError):
        pseudo_hyperbolic(0.0, 1.5j)


def test_pseudo_hyperbolic_symmetric_and_automorphism_invariant():
    rng = np.random.default_rng(SEED)
    points = zip(random_disk_points(rng, 40), random_disk_points(rng, 40), random_disk_points(rng, 40, 0.9))
    for z, w, center in points:
        rho = pseudo_hyperbolic(z, w)
        assert 0.0 <= rho < 1.0
        assert pseudo_hyperbolic(w, z) == pytest.approx(rho, abs=1e-14)
        moved = pseudo_hyperbolic(disk_automorphism(center, z), disk_automorphism(center, w))
        assert moved == pytest.approx(rho, abs=1e-10)


def test_blaschke_eval_single_zero():
    B = BlaschkeProduct.from_zeros([0.5])
    assert abs(blaschke_eval(B, 0.5)) < 1e-15
    assert blaschke_eval(B, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_blaschke_eval_at_zero_near_boundary():
    Z1, _ = exm1_sequences(40)
    B = BlaschkeProduct(Z1)
    assert blaschke_eval(B, Z1.zeros[-1], Z1.offsets[-1]) == 0


def test_blaschke_modulus_bounded_by_one():
    B = BlaschkeProduct.from_zeros([0.3, -0.5j, 0.6 + 0.2j], origin_multiplicity=1)
    z = 0.95 * np.exp(2j * np.pi * np.arange(64) / 64)
    assert np.all(np.abs(B.evaluate(z)) <= 1.0 + 1e-14)


def test_exm1_first_terms():
    Z1, Z2 = exm1_sequences(1)
    assert Z1.zeros[0] == 0.5
    assert Z2.zeros[0] == 0
    Z1, Z2 = exm1_sequences(2)
    assert Z1.zeros[1] == 0.75
    assert Z2.zeros[1] == 0.625
    assert matched_zero_gap(Z1, Z2)[1] == pytest.approx(4.0 / 17.0, abs=1e-15)


def test_exm1_gap_matches_closed_form():
    Z1, Z2 = exm1_sequences(40)
    gaps = matched_zero_gap(Z1, Z2)
    for n, gap in enumerate(gaps, start=1):
        assert gap == pytest.approx(exm1_closed_form(n), abs=1e-12)
    assert gaps[29] < 0.02
    assert all(b < a for a, b in zip(gaps[1:], gaps[2:]))


def test_prop1_first_terms_and_limit():
    Z1, Z2 = prop1_sequences(1)
    assert Z1.zeros[0] == 0.75
    assert Z2.zeros[0] == 0.5
    Z1, Z2 = prop1_sequences(20)
    gaps = matched_zero_gap(Z1, Z2)
    for n, gap in enumerate(gaps[:15], start=1):
        assert gap == pytest.approx(1.0 / (3.0 - 2.0 * 4.0 ** -n), abs=1e-12)
    assert abs(gaps[19] - 1.0 / 3.0) < 1e-6
    # the limit 1/3 is approached from above
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert all(gap > 1.0 / 3.0 for gap in gaps[:15])


def test_matched_gap_of_identical_sequences_is_zero():
    Z1, _ = prop1_sequences(10)
    assert matched_zero_gap(Z1, Z1) == [0.0] * 10


def test_matched_gap_length_mismatch():
    Z1, Z2 = prop1_sequences(5)
    with pytest.raises(DimensionMismatchError):
        matched_zero_gap(Z1, Z2.prefix(3))


def test_schwarz_pick_bound_along_exm1():
    Z1, Z2 = exm1_sequences(30)
    B2 = BlaschkeProduct(Z2)
    gaps = matched_zero_gap(Z1, Z2)
    for n in range(25):
        value = abs(blaschke_eval(B2, Z1.zeros[n], Z1.offsets[n]))
        assert value <= gaps[n] + 1e-12


def test_uniform_separation():
    assert uniform_separation(ZeroSequence(np.array([0.0, 0.5]))) == pytest.approx(0.5)
    geometric = ZeroSequence.from_offsets(2.0 ** -np.arange(1, 21))
    assert abs(uniform_separation(geometric) - 1.0 / 3.0) < 1e-3
    assert uniform_separation(ZeroSequence(np.array([0.2, 0.5, 0.2]))) == 0.0


def test_carleson_product_bound():
    assert carleson_product_bound(ZeroSequence(np.array([0.0, 0.5]))) == pytest.approx(0.5)
    short = carleson_product_bound(ZeroSequence.from_offsets(2.0 ** -np.arange(1, 16)))
    longer = carleson_product_bound(ZeroSequence.from_offsets(2.0 ** -np.arange(1, 21)))
    assert short > 0.0
    assert abs(short - longer) < 1e-3
    assert carleson_product_bound(ZeroSequence(np.array([0.1j, 0.4, 0.1j]))) == 0.0


def test_carleson_product_bound_below_uniform_separation():
    rng = np.random.default_rng(SEED)
    for count in (2, 5, 12):
        Z = ZeroSequence(random_disk_points(rng, count, 0.99))
        assert 0.0 <= carleson_product_bound(Z) <= uniform_separation(Z) + 1e-15


def test_carleson_window_bound():
    assert carleson_window_bound(ZeroSequence(np.zeros(0)), 5) == 0.0
    single = carleson_window_bound(ZeroSequence(np.array([0.5])), 8)
    assert single == pytest.approx(1.5)
    assert carleson_window_bound(ZeroSequence(np.array([0.5])), 1) == pytest.approx(1.5)
    # 1 - |z| = 0.6 exceeds the half-circle arc, so no window holds the zero
    assert carleson_window_bound(ZeroSequence(np.array([0.4])), 8) == 0.0
    geometric = ZeroSequence.from_offsets(2.0 ** -np.arange(1, 21))
    coarse = carleson_window_bound(geometric, 22)
    fine = carleson_window_bound(geometric, 30)
    assert 3.0 < coarse < 4.0
    assert fine == pytest.approx(coarse)


def test_zero_separation_condition():
    Z1, Z2 = exm1_sequences(30)
    assert zero_separation_condition(Z1, Z1, 0.9) == 0.0
    assert zero_separation_condition(Z1, Z2, 0.9) < 0.05
    P1, P2 = prop1_sequences(30)
    assert abs(zero_separation_condition(P1, P2, 0.9) - 1.0 / 3.0) < 1e-2
    S1, S2 = exm1_sequences(3)
    assert math.isinf(zero_separation_condition(S1, S2, 0.95))


def test_zero_separation_condition_grows_with_radius():
    rng = np.random.default_rng(SEED)
    Z1 = ZeroSequence(random_disk_points(rng, 15, 0.99))
    Z2 = ZeroSequence(random_disk_points(rng, 15, 0.99))
    values = [zero_separation_condition(Z1, Z2, r) for r in np.linspace(0.0, 0.98, 12)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_separation_profile_keys():
    P1, P2 = prop1_sequences(10)
    profile = separation_profile(P1, P2, 0.9)
    assert set(profile) == {"sc_value", "sc_radius", "union_separation", "union_carleson_product", "last_matched_gap"}
    assert profile["sc_radius"] == 0.9


def test_probe_exm1_violates_s():
    Z1, Z2 = exm1_sequences(30)
    phi, psi = BlaschkeProduct(Z1), BlaschkeProduct(Z2)
    report = probe_conditions(phi, psi, dyadic_radii(12), 256)
    assert report.verdicts["S"] == "violated-at-samples"
    assert report.min_of_max[9] < 0.5
    assert report.prefix_lengths == {"phi": 30, "psi": 30}


def test_probe_prop1_keeps_c_and_wc():
    Z1, Z2 = prop1_sequences(30)
    report = probe_conditions(BlaschkeProduct(Z1), BlaschkeProduct(Z2), dyadic_radii(12), 256)
    assert report.verdicts["S"] == "violated-at-samples"
    assert report.verdicts["C"] == "consistent"
    assert report.verdicts["WC"] == "consistent"
    assert min(report.min_sum[-3:]) >= 0.05
    assert not report.implication_conflict


def test_probe_common_zero_at_origin_violates_c():
    z = BlaschkeProduct.monomial(1)
    report = probe_conditions(z, z, [0.001, 0.5, 0.9], 64)
    assert report.min_sum[0] == pytest.approx(0.002)
    assert report.verdicts["C"] == "violated-at-samples"


def test_probe_stats_rows_and_dict():
    Z1, Z2 = prop1_sequences(5)
    report = probe_conditions(BlaschkeProduct(Z1), BlaschkeProduct(Z2), [0.5, 0.75], 16, ProbeThresholds())
    rows = report.stats_rows()
    assert [row["radius"] for row in rows] == [0.5, 0.75]
    assert set(rows[0]) == {"radius", "min_sum", "max_of_max", "min_of_max"}
    assert report.to_dict()["angular_sample_count"] == 16


@pytest.mark.parametrize("radii", [[], [0.5, 0.5], [0.2, 1.0]])
def test_probe_rejects_bad_radii(radii):
    z = BlaschkeProduct.monomial(1)
    with pytest.raises(ValueError):
        probe_conditions(z, z, radii, 16)
