"""Resolution-limited geometric certification of planar harmonic maps.

The univalence certifier samples the region boundary (corner windows replaced
by small interior bypass arcs so the tested contour stays a closed Jordan
curve even when the map blows up at corners), checks the image polyline for
self-intersections and winds it around interior probe values. A simple image
with unit windings certifies injectivity at that resolution; a transversal
image crossing is refined to a genuine collision witness; anything ambiguous
stays INCONCLUSIVE. Witnesses are always re-verified by direct evaluation
before they are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .domains import Polyline, Region
from .errors import DegenerateError, DomainError, HarmlensError
from .geometry import axis_crossing_counts, polyline_self_intersections, winding_number
from .shear import GenericHarmonicInput, HarmonicMap, hprime_gprime, jacobian

OUTCOME_CERTIFIED = "CERTIFIED_AT_RESOLUTION"
OUTCOME_COLLISION = "COLLISION"
OUTCOME_INCONCLUSIVE = "INCONCLUSIVE"

DELTA_Z = 1e-3
DELTA_W_REL = 1e-9
TOUCH_REL = 1e-12
EXCLUSION_MARGIN = 1.6
MAX_REFINED_CROSSINGS = 8


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: complex | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class UnivalenceVerdict:
    outcome: str
    resolution: int
    witness: dict | None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "resolution": self.resolution,
            "witness": self.witness,
            "diagnostics": self.diagnostics,
        }


def _witness_dict(z1: complex, z2: complex, df: float) -> dict:
    return {
        "z1": [float(z1.real), float(z1.imag)],
        "z2": [float(z2.real), float(z2.imag)],
        "df": float(df),
        "dz": float(abs(z1 - z2)),
    }


# ---------------------------------------------------------------------------
# typical reality


def typical_reality_check(f, grid, axis_tol: float = 1e-9) -> CheckResult:
    """sign(Im f(z)) must match sign(Im z); |Im f| <= axis_tol on the real axis."""
    pts = np.asarray(grid, dtype=complex).ravel()
    vals = np.asarray(f(pts), dtype=complex).ravel()
    imz = pts.imag
    imf = vals.imag
    off = np.abs(imz) > 1e-12
    bad_sign = off & (np.sign(imf) != np.sign(imz))
    if np.any(bad_sign):
        idx = int(np.flatnonzero(bad_sign)[0])
        return CheckResult(
            False, complex(pts[idx]), {"im_f": float(imf[idx]), "kind": "sign"}
        )
    axis = ~off
    bad_axis = axis & (np.abs(imf) > axis_tol)
    if np.any(bad_axis):
        idx = int(np.flatnonzero(bad_axis)[0])
        return CheckResult(
            False, complex(pts[idx]), {"im_f": float(imf[idx]), "kind": "axis"}
        )
    return CheckResult(True, detail={"points": int(pts.size)})


# ---------------------------------------------------------------------------
# certification contour


def effective_exclusion(f, region: Region) -> float:
    """Exclusion radius large enough for the evaluator's own near-boundary guard."""
    eps = region.exclusion_radius
    max_abs = getattr(f, "max_abs", None)
    if max_abs is not None and region.kind in ("lens", "halflens"):
        eps = max(eps, EXCLUSION_MARGIN * (1.0 - max_abs))
    return eps


def certification_contour(region: Region, n: int, exclusion: float | None = None):
    """Closed contour for certification: trimmed boundary pieces plus corner
    bypass arcs.

    Returns (points, piece_param, pieces): piece_param[k] = piece_index + local
    parameter for points on true boundary pieces, NaN for bypass-arc points.
    """
    pieces = region.boundary_pieces(exclusion)
    total = sum(p.length * (1 - 2 * p.trim) for p in pieces)
    pts, par = [], []
    n_bypass = max(6, n // 256)
    remaining = n
    for idx, p in enumerate(pieces):
        if idx == len(pieces) - 1:
            m = max(2, remaining)
        else:
            m = max(2, round(n * p.length * (1 - 2 * p.trim) / total))
            m = max(2, min(m, remaining - 2 * (len(pieces) - idx - 1)))
        remaining -= m
        lo, hi = p.trim, 1.0 - p.trim
        if p.corner_start is None:
            s = lo + (hi - lo) * np.arange(m) / m
        else:
            s = np.linspace(lo, hi, m)
        pts.append(p.gamma(s))
        par.append(idx + s)
        if p.corner_end is not None:
            nxt = pieces[(idx + 1) % len(pieces)]
            corner = p.corner_end
            z_from = complex(p.gamma(hi))
            z_to = complex(nxt.gamma(nxt.trim))
            a0 = math.atan2((z_from - corner).imag, (z_from - corner).real)
            a1 = math.atan2((z_to - corner).imag, (z_to - corner).real)
            delta = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
            frac = np.linspace(0.0, 1.0, n_bypass + 2)[1:-1]
            r0, r1 = abs(z_from - corner), abs(z_to - corner)
            arc = corner + (r0 + (r1 - r0) * frac) * np.exp(1j * (a0 + delta * frac))
            pts.append(arc)
            par.append(np.full(n_bypass, np.nan))
    points = np.concatenate(pts)
    params = np.concatenate(par)
    # drop accidental duplicate neighbours (degenerate pieces at tiny n)
    keep = np.ones(points.size, dtype=bool)
    keep[1:] = points[1:] != points[:-1]
    if points[0] == points[-1] and points.size > 1:
        keep[-1] = False
    return points[keep], params[keep], pieces


# ---------------------------------------------------------------------------
# collision search


def _penalized_objective(f, region: Region, delta_z: float, scale: float):
    def obj(x):
        z1 = complex(x[0], x[1])
        z2 = complex(x[2], x[3])
        pen = 0.0
        e1 = region.exterior_measure(z1)
        e2 = region.exterior_measure(z2)
        if e1 > 0:
            pen += (e1 / delta_z) ** 2
        if e2 > 0:
            pen += (e2 / delta_z) ** 2
        sep = abs(z1 - z2)
        if sep < 1.2 * delta_z:
            pen += ((1.2 * delta_z - sep) / delta_z) ** 2
        try:
            w = np.asarray(f(np.array([z1, z2])), dtype=complex)
        except HarmlensError:
            return 1e12
        if not np.all(np.isfinite(w)):
            return 1e12
        return abs(w[0] - w[1]) ** 2 / scale**2 + 1e4 * pen

    return obj


def collision_search(
    f,
    region: Region,
    seeds,
    delta_z: float = DELTA_Z,
    delta_w: float | None = None,
    scale: float | None = None,
):
    """Polish seed pairs (z1, z2) into a verified collision witness.

    Runs a penalized Nelder-Mead minimization of |f(z1)-f(z2)|^2 per seed and
    accepts the first result with both points in the region closure,
    |z1-z2| > delta_z, and re-evaluated |f(z1)-f(z2)| < delta_w. Returns a
    witness dict or None.
    """
    if scale is None:
        samples = []
        for z1, z2 in seeds:
            try:
                samples.append(np.max(np.abs(f(np.array([z1, z2])))))
            except HarmlensError:
                continue
        scale = float(max([1.0] + samples))
    if delta_w is None:
        delta_w = DELTA_W_REL * scale
    obj = _penalized_objective(f, region, delta_z, scale)
    for z1, z2 in seeds:
        x0 = np.array([z1.real, z1.imag, z2.real, z2.imag], dtype=float)
        res = optimize.minimize(
            obj,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-13,
                "fatol": 1e-28,
                "maxiter": 2000,
                "maxfev": 4000,
            },
        )
        w1 = complex(res.x[0], res.x[1])
        w2 = complex(res.x[2], res.x[3])
        if region.exterior_measure(w1) > 1e-12 or region.exterior_measure(w2) > 1e-12:
            continue
        if abs(w1 - w2) <= delta_z:
            continue
        try:
            vals = np.asarray(f(np.array([w1, w2])), dtype=complex)
        except HarmlensError:
            continue
        df = float(abs(vals[0] - vals[1]))
        if df < delta_w:
            return _witness_dict(w1, w2, df)
    return None


def _interior_pair_seeds(f, region: Region, delta_z: float, n_grid: int = 1800, top: int = 10):
    """Grid-scan the region for distinct points with nearly equal values."""
    pts = region.interior_grid(n_grid)
    try:
        vals = np.asarray(f(pts), dtype=complex)
    except HarmlensError:
        return []
    finite = np.isfinite(vals)
    pts, vals = pts[finite], vals[finite]
    order = np.argsort(vals.real, kind="stable")
    pts, vals = pts[order], vals[order]
    cand = []
    window = 48
    for k in range(pts.size - 1):
        hi = min(pts.size, k + window)
        dz = np.abs(pts[k + 1 : hi] - pts[k])
        df = np.abs(vals[k + 1 : hi] - vals[k])
        ok = dz > 2 * delta_z
        for off in np.flatnonzero(ok):
            cand.append((float(df[off]), k, k + 1 + int(off)))
    cand.sort()
    return [(complex(pts[a]), complex(pts[b])) for _, a, b in cand[:top]]


# ---------------------------------------------------------------------------
# boundary univalence


def _refine_image_crossings(f, pieces, params, crossings, region, delta_z, delta_w, scale):
    npts = params.size
    for (i, j, ti, tj) in crossings[:MAX_REFINED_CROSSINGS]:
        p_i0, p_i1 = params[i], params[(i + 1) % npts]
        p_j0, p_j1 = params[j], params[(j + 1) % npts]
        if np.isnan(p_i0) or np.isnan(p_i1) or np.isnan(p_j0) or np.isnan(p_j1):
            continue
        ia, ib = int(p_i0), int(p_j0)
        # both segment endpoints must sit on one piece for a smooth local chart
        if abs(p_i1 - p_i0) > 0.5 or abs(p_j1 - p_j0) > 0.5:
            continue
        sa = (p_i0 + ti * (p_i1 - p_i0)) - ia
        sb = (p_j0 + tj * (p_j1 - p_j0)) - ib
        ga, gb = pieces[ia].gamma, pieces[ib].gamma

        def obj(x, ga=ga, gb=gb):
            try:
                w = np.asarray(
                    f(np.array([complex(ga(x[0])), complex(gb(x[1]))])), dtype=complex
                )
            except HarmlensError:
                return 1e12
            if not np.all(np.isfinite(w)):
                return 1e12
            return abs(w[0] - w[1]) ** 2 / scale**2

        res = optimize.minimize(
            obj,
            np.array([sa, sb]),
            method="Nelder-Mead",
            options={"xatol": 1e-13, "fatol": 1e-28, "maxiter": 800},
        )
        z1 = complex(ga(res.x[0]))
        z2 = complex(gb(res.x[1]))
        if abs(z1 - z2) <= delta_z:
            continue
        if region.exterior_measure(z1) > 1e-9 or region.exterior_measure(z2) > 1e-9:
            continue
        try:
            vals = np.asarray(f(np.array([z1, z2])), dtype=complex)
        except HarmlensError:
            continue
        df = float(abs(vals[0] - vals[1]))
        if df < delta_w:
            return _witness_dict(z1, z2, df)
    return None


def boundary_univalence_certify(
    f,
    region: Region,
    n: int = 2048,
    probes: int = 16,
    delta_z: float = DELTA_Z,
) -> UnivalenceVerdict:
    """Certify or falsify injectivity of f on the region at resolution n.

    The caller is responsible for sense preservation; this routine only looks
    at the boundary image and interior windings. Outcomes:

    - CERTIFIED_AT_RESOLUTION: image polyline simple, winding 1 around the
      image of every interior probe;
    - COLLISION: a re-verified witness pair (|z1-z2| > delta_z mapping within
      1e-9 * scale of each other);
    - INCONCLUSIVE: near-touches or winding anomalies that could not be
      refined into a witness.
    """
    eps = effective_exclusion(f, region)
    points, params, pieces = certification_contour(region, n, eps)
    try:
        w = np.asarray(f(points), dtype=complex)
    except HarmlensError as exc:
        exc.diagnostics = {"stage": "boundary evaluation", "exclusion": eps}
        raise
    if not np.all(np.isfinite(w)):
        raise DegenerateError("boundary image contains non-finite values")

    keep = np.ones(w.size, dtype=bool)
    keep[1:] = w[1:] != w[:-1]
    if w.size > 1 and w[0] == w[-1]:
        keep[-1] = False
    w_poly, params_kept, points_kept = w[keep], params[keep], points[keep]

    # witness tolerances scale with a high quantile of the boundary image
    # magnitude, not its max: a pole just beyond a trimmed corner can inflate
    # the max by several orders and would poison touch detection and the
    # collision threshold
    scale = float(max(np.quantile(np.abs(w_poly), 0.9), 1e-300))
    delta_w = DELTA_W_REL * scale
    poly = Polyline(w_poly, closed=True)
    crossings, touches = polyline_self_intersections(poly, touch_tol=TOUCH_REL * scale)

    probe_pts = region.interior_probes(probes)
    probe_vals = np.asarray(f(probe_pts), dtype=complex)
    windings = []
    anomalies = 0
    for val in probe_vals:
        if np.min(np.abs(w_poly - val)) < TOUCH_REL * scale:
            windings.append(None)
            anomalies += 1
            continue
        wn = winding_number(poly, val)
        windings.append(wn)
        if wn != 1:
            anomalies += 1

    diagnostics = {
        "exclusion_radius": eps,
        "scale": scale,
        "crossings": len(crossings),
        "touches": len(touches),
        "windings": windings,
        "contour_points": int(points_kept.size),
    }
    jac_fn = getattr(f, "jacobian", None)
    if jac_fn is not None:
        jgrid = region.interior_grid(256)
        diagnostics["min_jacobian"] = float(np.min(jac_fn(jgrid)))

    witness = None
    if crossings:
        witness = _refine_image_crossings(
            f, pieces, params_kept, crossings, region, delta_z, delta_w, scale
        )
    if witness is None and (crossings or touches or anomalies):
        seeds = _interior_pair_seeds(f, region, delta_z)
        if seeds:
            witness = collision_search(
                f, region, seeds, delta_z=delta_z, delta_w=delta_w, scale=scale
            )

    if witness is not None:
        return UnivalenceVerdict(OUTCOME_COLLISION, n, witness, diagnostics)
    if crossings or touches or anomalies:
        return UnivalenceVerdict(OUTCOME_INCONCLUSIVE, n, None, diagnostics)
    return UnivalenceVerdict(OUTCOME_CERTIFIED, n, None, diagnostics)


# ---------------------------------------------------------------------------
# local univalence


@dataclass(frozen=True)
class ScanResult:
    min_jac: float
    witnesses: list
    points: int


def _jacobian_fn(target):
    if isinstance(target, HarmonicMap):
        return lambda z: jacobian(target, z)
    if isinstance(target, GenericHarmonicInput):
        def jac(z, t=target):
            hp = np.asarray(t.hprime(z), dtype=complex)
            gp = np.asarray(t.gprime(z), dtype=complex)
            return np.abs(hp) ** 2 - np.abs(gp) ** 2

        return jac
    deriv = getattr(target, "derivative", None)
    if deriv is not None:
        return lambda z: np.abs(np.asarray(deriv(z), dtype=complex)) ** 2
    raise TypeError(f"no jacobian available for {type(target)!r}")


def local_univalence_scan(target, region: Region, n: int = 4096) -> ScanResult:
    """Minimum Jacobian over an interior lattice, with near-critical witnesses.

    Sign-change lattice edges are bisected to a root; near-zero local minima
    are polished by Nelder-Mead. Witness locations are resolved to about 1e-8.
    """
    jac = _jacobian_fn(target)
    pts = region.interior_grid(n)
    J = np.asarray(jac(pts), dtype=float)
    min_jac = float(J.min())
    jmax = max(float(np.abs(J).max()), 1e-300)
    witnesses: list[tuple[complex, float]] = []

    # 1. sign changes along nearest-neighbour pairs of the (unstructured) grid
    if min_jac < 0 < float(J.max()):
        neg = pts[J < 0]
        pos = pts[J >= 0]
        for z_neg in neg[:8]:
            z_pos = pos[np.argmin(np.abs(pos - z_neg))]

            def along(s, a=z_neg, b=z_pos):
                return float(jac(np.array([a + s * (b - a)]))[0])

            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if along(mid) < 0:
                    lo = mid
                else:
                    hi = mid
            zc = z_neg + hi * (z_pos - z_neg)
            witnesses.append((complex(zc), float(jac(np.array([zc]))[0])))

    # 2. near-zero minima (|J| small but nonnegative, e.g. analytic critical pts)
    cand_mask = (J >= 0) & (J < 1e-3 * jmax)
    cand = pts[cand_mask]
    cand = cand[np.argsort(J[cand_mask], kind="stable")][:4]
    for z0 in cand:
        def obj(x):
            z = complex(x[0], x[1])
            pen = max(0.0, region.exterior_measure(z))
            try:
                val = float(jac(np.array([z]))[0]) / jmax
            except HarmlensError:
                return 1e12
            return val + 1e6 * pen * pen

        res = optimize.minimize(
            obj,
            np.array([z0.real, z0.imag]),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-30, "maxiter": 600},
        )
        zr = complex(res.x[0], res.x[1])
        jr = float(jac(np.array([zr]))[0])
        if abs(jr) < 1e-9 * jmax and not any(abs(zr - wz) < 1e-6 for wz, _ in witnesses):
            witnesses.append((zr, jr))

    return ScanResult(min_jac, witnesses, int(pts.size))


# ---------------------------------------------------------------------------
# convexity in a direction and starlikeness


def direction_convexity_check(poly: Polyline, direction: str = "horizontal", lines: int = 512) -> CheckResult:
    """Every line of the parallel family meets the curve in <= 2 transversal
    crossings."""
    if not poly.closed:
        raise DomainError("convexity check needs a closed polyline")
    scale = float(np.max(np.abs(poly.points)))
    crossings, touches = polyline_self_intersections(poly, touch_tol=TOUCH_REL * scale)
    if crossings or touches:
        raise DegenerateError("convexity check needs a simple polyline")
    coord = poly.points.imag if direction == "horizontal" else poly.points.real
    lo, hi = float(coord.min()), float(coord.max())
    offsets = lo + (np.arange(lines) + 0.5) * (hi - lo) / lines
    counts = axis_crossing_counts(poly, offsets, direction)
    bad = np.flatnonzero(counts > 2)
    if bad.size:
        k = int(bad[0])
        return CheckResult(
            False,
            complex(0, offsets[k]) if direction == "horizontal" else complex(offsets[k], 0),
            {"count": int(counts[k]), "offset": float(offsets[k])},
        )
    return CheckResult(True, detail={"lines": int(lines), "max_count": int(counts.max())})


def starlike_boundary_check(f, r: float, n: int = 2048) -> CheckResult:
    """Re(z f'(z)/f(z)) >= -1e-9 on |z| = r for an analytic evaluator."""
    if not 0 < r < 1:
        raise DomainError("radius must lie in (0, 1)")
    z = r * np.exp(2j * math.pi * np.arange(n) / n)
    w = np.asarray(f(z), dtype=complex)
    fp = np.asarray(f.derivative(z), dtype=complex)
    if np.any(np.abs(w) < 1e-12 * np.median(np.abs(w))):
        raise DegenerateError("f vanishes on the probe circle")
    s = (z * fp / w).real
    k = int(np.argmin(s))
    if s[k] < -1e-9:
        return CheckResult(False, complex(z[k]), {"min_re": float(s[k])})
    return CheckResult(True, detail={"min_re": float(s[k])})
