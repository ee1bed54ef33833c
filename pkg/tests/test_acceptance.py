"""Acceptance gate: one test per shipped claim, one printed verdict line each.

Run `pytest tests/test_acceptance.py -s` to see the twelve lines. Every
tolerance below is part of the package contract; loosening one is an API
break, not a test fix. A confirmed collision inside a conjecture scan is a
reportable finding rather than a failure, so criterion 12 asserts the
re-verification protocol instead of forbidding collisions outright.
"""

import json
import math
import time

import numpy as np

import harmlens as hl
from harmlens import GenericHarmonicInput, Region

SQRT2 = math.sqrt(2.0)
VERTEX = 1j * (SQRT2 - 1.0)
ANCHOR = 0.999 * (math.sqrt(6.0) - math.sqrt(5.0))


def _report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def _disk_points(rng, n, rmax):
    r = rmax * np.sqrt(rng.uniform(0.0, 1.0, size=n))
    th = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return r * np.exp(1j * th)


def test_criterion_01_jacobian_identity():
    # J_f = |h'|^2 - |g'|^2 must equal |F'|^2 Re p for every class member
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        k = int(rng.integers(1, 9))
        nu, mu = hl.sample_measures(k, rng=rng)
        m = hl.shear(mu, nu)
        z = _disk_points(rng, 200, 0.95)
        hp, gp = hl.hprime_gprime(m, z)
        jac = np.abs(hp) ** 2 - np.abs(gp) ** 2
        _, fp = hl.robertson_eval(nu, z)
        p = hl.herglotz_eval(mu, z)
        want = np.abs(fp) ** 2 * p.real
        rel = np.abs(jac - want) / np.maximum(np.abs(want), 1e-300)
        worst = max(worst, float(rel.max()))
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and dt < 5.0
    _report(1, ok, f"200 maps x 200 pts, max rel err {worst:.2e}, {dt:.2f}s")


def test_criterion_02_series_and_quadrature_routes_agree():
    rng = np.random.default_rng(202)
    worst_coeff = 0.0
    worst_eval = 0.0
    for _ in range(50):
        k = int(rng.integers(1, 7))
        nu, mu = hl.sample_measures(k, rng=rng)
        m = hl.shear(mu, nu)
        want = hl.measure_to_series(nu, m.order)
        diff = m.h_series.sub(m.g_series)
        worst_coeff = max(
            worst_coeff, float(np.abs(diff.coeffs[:33] - want.coeffs[:33]).max())
        )
        z = _disk_points(rng, 40, 0.5)
        a = hl.eval_many(m, z, route="series")
        b = hl.eval_many(m, z, route="quad")
        worst_eval = max(worst_eval, float(np.abs(a - b).max()))
    ok = worst_coeff < 1e-10 and worst_eval < 1e-8
    _report(2, ok, f"h-g coeff err {worst_coeff:.2e}, route gap {worst_eval:.2e}")


def test_criterion_03_typical_reality_battery():
    rng = np.random.default_rng(303)
    grid = Region.disk(0.995).interior_grid(5500)
    assert grid.size >= 10000
    mask = np.abs(grid.imag) > 1e-6
    x = np.linspace(-0.99, 0.99, 99)
    t0 = time.perf_counter()
    fails = 0
    for _ in range(100):
        k = int(rng.integers(1, 9))
        nu, mu = hl.sample_measures(k, rng=rng)
        m = hl.shear(mu, nu)
        im = hl.map_imag(m, grid[mask])
        if not np.all(np.sign(im) == np.sign(grid[mask].imag)):
            fails += 1
            continue
        v = hl.eval_many(m, x + 0j)
        if np.abs(v.imag).max() > 1e-9 or not np.all(np.diff(v.real) > 0.0):
            fails += 1
    dt = time.perf_counter() - t0
    ok = fails == 0
    _report(3, ok, f"100 maps, {grid.size} grid pts, {fails} failures, {dt:.2f}s")


def test_criterion_04_two_atom_boundary_curve():
    worst_on = 0.0
    best_off = np.inf
    for k in range(1, 20):
        alpha = k * np.pi / 20.0
        lam = np.sin(alpha / 2.0) ** 2
        worst_on = max(worst_on, abs(hl.two_atom_boundary_residual(lam, alpha)))
        for dl in (-0.01, 0.01):
            best_off = min(best_off, abs(hl.two_atom_boundary_residual(lam + dl, alpha)))
    ok = worst_on < 1e-9 and best_off > 1e-4
    _report(4, ok, f"on-curve {worst_on:.2e}, perturbed min {best_off:.2e}")


def test_criterion_05_boundary_critical_points():
    vertex_resid = abs(hl.ft_eval(0.5, np.array([VERTEX]))[1][0])
    rng = np.random.default_rng(505)
    u = rng.uniform(0.02, 0.98, size=50)
    th = np.pi / 4.0 + (np.pi / 2.0) * u
    worst_arc = 0.0
    for z0 in -1j + SQRT2 * np.exp(1j * th):
        t0 = hl.critical_t_for_boundary_point(z0)
        worst_arc = max(worst_arc, abs(hl.ft_eval(t0, np.array([z0]))[1][0]))
    lens = Region.lens()
    worst_ext = 0.0
    count = 0
    while count < 50:
        z0 = complex(_disk_points(rng, 1, 0.998)[0])
        if abs(z0) >= 0.998 or lens.contains(np.array([z0]))[0]:
            continue
        t, big_r = hl.scaled_critical_T(z0)
        worst_ext = max(worst_ext, abs(hl.ftR_deriv(t, big_r, np.array([z0]))[0]))
        count += 1
    ok = vertex_resid < 1e-10 and worst_arc < 1e-9 and worst_ext < 1e-9
    _report(
        5,
        ok,
        f"vertex {vertex_resid:.2e}, arc max {worst_arc:.2e}, exterior max {worst_ext:.2e}",
    )


def test_criterion_06_collision_map_and_witnesses():
    from fractions import Fraction

    m, gw = hl.theorem5_map()
    lens = Region.lens()
    z = lens.sample_interior(100, rng=np.random.default_rng(5))
    gap = float(np.abs(hl.eval_many(m, z, route="quad") - gw(hl.psi(z))).max())

    witness_ok = True
    detail = []
    for alpha in (np.pi / 8.0, np.pi / 6.0):
        rep = hl.theorem5_collision(alpha)
        z1, z2 = rep.points
        fv = hl.eval_many(m, np.array([z1, z2]))
        df = abs(fv[0] - fv[1])
        dz = abs(z1 - z2)
        inside = bool(lens.contains(np.array([z1, z2])).all())
        witness_ok &= inside and df < 1e-8 and dz > 1e-2
        detail.append(f"a={alpha:.3f}: df {df:.1e} dz {dz:.2f}")

    rational_zero = Fraction(1, 12) - Fraction(1, 4) + Fraction(1, 6) == 0
    ok = gap < 1e-8 and witness_ok and rational_zero
    _report(6, ok, f"closed form gap {gap:.2e}; " + "; ".join(detail))


def test_criterion_07_certification_battery():
    rng = np.random.default_rng(707)
    t0 = time.perf_counter()
    regions = (Region.disk(ANCHOR), Region.psisub(0.999 * (SQRT2 - 1.0)))
    bad = 0
    for _ in range(200):
        k = int(rng.integers(1, 9))
        nu, mu = hl.sample_measures(k, rng=rng)
        f = hl.harmonic_evaluator(hl.shear(mu, nu))
        for reg in regions:
            v = hl.boundary_univalence_certify(f, reg, n=4096)
            if v.outcome != hl.OUTCOME_CERTIFIED:
                bad += 1
    lens = Region.lens()
    for _ in range(200):
        k = int(rng.integers(1, 9))
        nu, _ = hl.sample_measures(k, rng=rng)
        v = hl.boundary_univalence_certify(hl.robertson_evaluator(nu), lens, n=4096)
        if v.outcome != hl.OUTCOME_CERTIFIED:
            bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 180.0
    _report(7, ok, f"600 certifications, {bad} not certified, {dt:.1f}s")


def test_criterion_08_slit_geometry_of_the_interpolating_family():
    worst_re = 0.0
    worst_tip = 0.0
    for t in (0.25, 0.5, 0.75):
        im_min = np.inf
        for pc in Region.lens().boundary_pieces(5e-3):
            s = np.linspace(pc.trim, 1.0 - pc.trim, 8192)
            w = hl.ft_eval(t, pc.gamma(s))[0]
            worst_re = max(worst_re, float(np.abs(w.real - (1.0 - 2.0 * t) / 4.0).max()))
            im_min = min(im_min, float(np.abs(w.imag).min()))
        tip = np.sqrt(t * (1.0 - t)) / 2.0
        worst_tip = max(worst_tip, abs(im_min - tip))
    ok = worst_re < 1e-6 and worst_tip < 1e-6
    _report(8, ok, f"slit line err {worst_re:.2e}, tip err {worst_tip:.2e}")


def test_criterion_09_tangency_and_radius_bracket():
    z0 = (1.0 + 1j * SQRT2) / 3.0
    pair = hl.goodman_G(np.array([z0, -np.conj(z0)]))
    anti = abs(pair[0] - pair[1])
    cert = hl.boundary_univalence_certify(
        hl.named_evaluator("goodman"), Region.disk(0.99 / math.sqrt(3.0)), n=4096
    )
    d = hl.radius_estimate("ru", samples=0).to_dict()
    lo, hi = d["bracket"]
    eps_entries = {e["eps"] for e in d["per_epsilon"]}
    bracket_ok = (
        lo >= math.sqrt(6.0) - math.sqrt(5.0) - 1e-3
        and hi <= SQRT2 - 1.0 + 1e-3
        and 1e-4 in eps_entries
    )
    ok = anti < 1e-12 and cert.outcome == hl.OUTCOME_CERTIFIED and bracket_ok
    _report(
        9,
        ok,
        f"tangency gap {anti:.2e}, {cert.outcome}, bracket [{lo:.6f}, {hi:.6f}]",
    )


def test_criterion_10_multivalence_preimages():
    pts = hl.picard_preimages(0.1, delta=0.5, k=3)
    resid = [abs(hl.picard_map(z) - 0.1) for z in pts]
    dist = min(
        abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1 :]
    )
    ok = (
        len(pts) >= 3
        and all(abs(z + 1.0) < 0.5 and abs(z) < 1.0 for z in pts)
        and max(resid) < 1e-10
        and dist > 1e-6
    )
    _report(10, ok, f"{len(pts)} preimages, max residual {max(resid):.2e}")


def test_criterion_11_negative_controls():
    fold = GenericHarmonicInput(
        hprime=lambda z: np.ones_like(np.asarray(z, complex)),
        gprime=lambda z: -np.ones_like(np.asarray(z, complex)),
        name="fold",
    )
    flip = GenericHarmonicInput(
        hprime=lambda z: 2 * (1 + 1j) + 2j * np.asarray(z, complex),
        gprime=lambda z: 2 * (-1 + 1j) + 2j * np.asarray(z, complex),
        name="flip",
    )
    s1 = hl.sense_preserving_scan(fold, Region.disk(0.9), n=400)
    s2 = hl.sense_preserving_scan(flip, Region.disk(0.9), n=400)
    tr = hl.typical_reality_check(
        lambda z: np.asarray(z) ** 2, Region.disk(0.9).interior_grid(60)
    )
    ok = (not s1.passed) and (not s2.passed) and (not tr.passed)
    _report(
        11,
        ok,
        f"fold rejected {not s1.passed}, flip rejected {not s2.passed}, "
        f"square rejected {not tr.passed}",
    )


def test_criterion_12_deterministic_conjecture_scan():
    kw = dict(samples=100, resolution=2048, seed=0)
    t0 = time.perf_counter()
    a = hl.conjecture_scan("2", **kw)
    dt = time.perf_counter() - t0
    b = hl.conjecture_scan("2", **kw)
    c = hl.conjecture_scan("2", workers=2, **kw)
    pa = json.dumps(a, sort_keys=True)
    identical = pa == json.dumps(b, sort_keys=True) == json.dumps(c, sort_keys=True)
    # any confirmed collision must carry the doubled-resolution recheck
    protocol = all(
        hit["reverified"] and hit["reverify_resolution"] == 2 * kw["resolution"]
        for hit in a["confirmed_collisions"]
    )
    clean = a["confirmed_collisions"] == [] and a["verdict"] == (
        "no counterexample at resolution 2048 with 100 samples"
    )
    ok = identical and protocol and clean
    _report(
        12,
        ok,
        f"byte-identical {identical}, {len(a['confirmed_collisions'])} confirmed, {dt:.1f}s",
    )
