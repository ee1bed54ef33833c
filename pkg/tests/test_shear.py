import math

import numpy as np
import pytest

import harmlens as hl
from harmlens import GenericHarmonicInput, Region


def _random_map(seed, k=None):
    rng = np.random.default_rng(seed)
    k = k or int(rng.integers(1, 9))
    nu, mu = hl.sample_measures(k, rng=rng)
    return hl.shear(mu, nu), nu, mu


def _interior_points(n, seed, rmax=0.9):
    rng = np.random.default_rng(seed)
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    th = rng.uniform(0, 2 * math.pi, n)
    return r * np.exp(1j * th)


def test_normalization_at_the_origin():
    m, _, _ = _random_map(0)
    assert m.h_series.coeffs[0] == 0
    assert m.g_series.coeffs[0] == 0
    assert abs(m.h_series.coeffs[1] - 1.0) < 1e-14
    assert abs(m.g_series.coeffs[1]) < 1e-14
    f0, h0, g0 = hl.eval_map(m, 0.0)
    assert abs(f0) < 1e-14 and abs(h0) < 1e-14 and abs(g0) < 1e-14


def test_h_minus_g_recovers_the_driving_series():
    for seed in range(10):
        m, nu, _ = _random_map(seed)
        F = hl.measure_to_series(nu, m.order)
        diff = m.h_series.sub(m.g_series)
        assert np.abs(diff.coeffs[:33] - F.coeffs[:33]).max() < 1e-10


def test_jacobian_factorization_identity():
    # |h'|^2 - |g'|^2 must equal |F'|^2 Re p pointwise
    z = _interior_points(400, 17, rmax=0.95)
    for seed in range(5):
        m, nu, mu = _random_map(seed + 30)
        hp, gp = hl.hprime_gprime(m, z)
        lhs = np.abs(hp) ** 2 - np.abs(gp) ** 2
        _, Fp = hl.robertson_eval(nu, z)
        p = hl.herglotz_eval(mu, z)
        rhs = np.abs(Fp) ** 2 * p.real
        rel = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
        assert rel.max() < 1e-9
        assert np.abs(hl.jacobian(m, z) - lhs).max() < 1e-12 * max(1.0, lhs.max())


def test_hprime_gprime_split_matches_the_kernels():
    m, nu, mu = _random_map(44)
    z = _interior_points(64, 45, rmax=0.9)
    hp, gp = hl.hprime_gprime(m, z)
    _, Fp = hl.robertson_eval(nu, z)
    p = hl.herglotz_eval(mu, z)
    assert np.abs(hp - gp - Fp).max() < 1e-11 * max(1.0, np.abs(Fp).max())
    assert np.abs(hp + gp - p * Fp).max() < 1e-10 * max(1.0, np.abs(p * Fp).max())


def test_series_and_quadrature_routes_agree():
    z = _interior_points(100, 7, rmax=0.5)
    for seed in range(5):
        m, _, _ = _random_map(seed + 60)
        a = hl.eval_many(m, z, route="series")
        b = hl.eval_many(m, z, route="quad")
        assert np.abs(a - b).max() < 1e-8


def test_auto_route_extends_past_the_series_radius():
    m, _, _ = _random_map(71)
    z = np.array([0.93 + 0.0j, 0.6j, -0.88 + 0.1j])
    v = hl.eval_many(m, z, route="auto")
    assert np.all(np.isfinite(v))


def test_eval_many_rejects_unknown_route():
    m, _, _ = _random_map(72)
    with pytest.raises((ValueError, hl.HarmlensError)):
        hl.eval_many(m, np.array([0.1 + 0j]), route="teleport")


def test_map_imag_equals_the_analytic_imaginary_part():
    # the shear leaves Im F untouched
    for seed in (3, 13):
        m, nu, _ = _random_map(seed)
        z = _interior_points(200, seed + 5, rmax=0.93)
        F, _ = hl.robertson_eval(nu, z)
        assert np.abs(hl.map_imag(m, z) - F.imag).max() < 1e-12


def test_shear_output_is_typically_real():
    m, _, _ = _random_map(23)
    grid = Region.disk(0.9).interior_grid(80)
    res = hl.typical_reality_check(hl.harmonic_evaluator(m), grid)
    assert res.passed, res.detail


def test_shear_output_is_sense_preserving():
    m, _, _ = _random_map(29)
    chk = hl.sense_preserving_scan(m, Region.disk(0.9), n=500)
    assert chk.passed, chk.detail


def test_dilatation_is_a_contraction():
    m, _, _ = _random_map(31)
    z = _interior_points(300, 32, rmax=0.95)
    w = hl.dilatation(m, z)
    assert np.abs(w).max() <= 1.0 + 1e-12
    assert abs(hl.dilatation(m, np.array([0.0 + 0j]))[0]) < 1e-13


def test_typical_reality_rejects_the_square_map():
    f = lambda z: np.asarray(z) ** 2
    grid = Region.disk(0.9).interior_grid(60)
    res = hl.typical_reality_check(f, grid)
    assert not res.passed
    assert res.witness is not None


def test_sense_scan_rejects_the_fold_and_the_flip():
    fold = GenericHarmonicInput(
        hprime=lambda z: np.ones_like(np.asarray(z, complex)),
        gprime=lambda z: np.ones_like(np.asarray(z, complex)),
        name="fold",
    )
    flip = GenericHarmonicInput(
        hprime=lambda z: 2 * (1 + 1j) + 2j * np.asarray(z, complex),
        gprime=lambda z: 2 * (-1 + 1j) + 2j * np.asarray(z, complex),
        name="flip",
    )
    for bad in (fold, flip):
        chk = hl.sense_preserving_scan(bad, Region.disk(0.9), n=400)
        assert not chk.passed


def test_decompose_inverts_the_shear():
    m, nu, mu = _random_map(83)
    F, p = hl.decompose(m.h_series, m.g_series)
    want_F = hl.measure_to_series(nu, m.order)
    assert np.abs(F.coeffs[:33] - want_F.coeffs[:33]).max() < 1e-10
    z = _interior_points(32, 84, rmax=0.35)
    want_p = hl.herglotz_eval(mu, z)
    assert np.abs(p.eval(z) - want_p).max() < 1e-8


def test_decompose_rejects_unnormalized_input():
    m, _, _ = _random_map(85)
    shifted = m.h_series.shift_const(0.3)
    with pytest.raises(hl.DomainError):
        hl.decompose(shifted, m.g_series)


def test_harmonic_evaluator_matches_eval_many():
    m, _, _ = _random_map(90)
    f = hl.harmonic_evaluator(m)
    z = _interior_points(50, 91, rmax=0.6)
    assert np.abs(f(z) - hl.eval_many(m, z)).max() == 0
