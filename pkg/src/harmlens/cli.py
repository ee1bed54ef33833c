"""Command line front end.

Every run prints one JSON document to stdout that echoes the fully resolved
configuration next to the result, so a report is reproducible from its own
header. Exit codes: 0 success or expected outcome, 1 mathematical
falsification / search failure / unexpected verdict, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .certify import (
    DELTA_W_REL,
    DELTA_Z,
    OUTCOME_CERTIFIED,
    OUTCOME_COLLISION,
    boundary_univalence_certify,
    collision_search,
    effective_exclusion,
    local_univalence_scan,
    typical_reality_check,
)
from .domains import (
    SQRT2,
    Region,
    measure_pair_from_json,
    region_boundary,
    region_from_spec,
)
from .errors import DomainError, FalsificationError, HarmlensError, SearchFailureError
from .kernels import ft_eval, ftR_deriv, named_evaluator, picard_map
from .search import (
    GOODMAN_RADIUS,
    coefficient_extremes,
    conjecture_scan,
    critical_t_for_boundary_point,
    nonconvexity_witness,
    picard_preimages,
    proposition_measure,
    radius_estimate,
    scaled_critical_T,
    theorem5_collision,
    theorem5_map,
    two_atom_boundary_residual,
)
from .shear import harmonic_evaluator, shear


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _fail(exc: Exception, stage: str) -> int:
    sys.stderr.write(
        json.dumps(
            {"error": type(exc).__name__, "stage": stage, "message": str(exc)},
            sort_keys=True,
        )
        + "\n"
    )
    return 1


def _build_evaluator(args):
    """Resolve --f / --measures into an evaluator plus its config echo."""
    if getattr(args, "measures", None) and getattr(args, "f", None):
        raise SystemExit(_usage("pass either --f or --measures, not both"))
    if getattr(args, "measures", None):
        try:
            with open(args.measures, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            nu, mu = measure_pair_from_json(doc)
        except (OSError, ValueError, HarmlensError) as exc:
            raise SystemExit(_usage(f"bad measures file: {exc}"))
        m = shear(mu, nu)
        return harmonic_evaluator(m), {"measures": args.measures}
    spec = getattr(args, "f", None) or "koebe"
    if spec == "theorem5":
        m, _ = theorem5_map()
        return harmonic_evaluator(m), {"f": "theorem5"}
    try:
        return named_evaluator(spec), {"f": spec}
    except DomainError as exc:
        # a mistyped map name or parameter is a usage error, not a math one
        raise SystemExit(_usage(str(exc)))


def _usage(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return 2


def _config_echo(args, extra: dict) -> dict:
    cfg = {
        "command": args.command,
        "n": getattr(args, "n", None),
        "samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", None),
        "region": getattr(args, "region", None),
        "tolerances": {"delta_z": DELTA_Z, "delta_w_rel": DELTA_W_REL},
    }
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# render


_SVG_HEAD = (
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 400 400" '
    'width="400" height="400">\n'
    '<rect width="400" height="400" fill="white"/>\n'
)


def _svg_xy(w: complex):
    # fixed window [-2, 2]^2, y axis flipped to screen coordinates
    return 100.0 * (w.real + 2.0), 100.0 * (2.0 - w.imag)


def cmd_render(args) -> int:
    region = region_from_spec(args.region)
    f, fmeta = _build_evaluator(args)
    eps = effective_exclusion(f, region)
    boundary = region_boundary(region.with_exclusion(eps), args.n).points
    grid = region.interior_grid(max(64, min(args.n // 4, 1024)))
    wb = np.asarray(f(boundary), dtype=complex)
    wg = np.asarray(f(grid), dtype=complex)

    prefix = args.out or "harmlens_render"
    csv_path = prefix + ".csv"
    svg_path = prefix + ".svg"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("z_re,z_im,f_re,f_im\n")
        for zs, ws in ((boundary, wb), (grid, wg)):
            for z, w in zip(zs, ws):
                fh.write(
                    "%.17g,%.17g,%.17g,%.17g\n" % (z.real, z.imag, w.real, w.imag)
                )
    pts = " ".join("%.6g,%.6g" % _svg_xy(complex(w)) for w in wb)
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(_SVG_HEAD)
        fh.write(
            f'<polyline points="{pts}" fill="none" stroke="#1f3d7a" '
            'stroke-width="1"/>\n'
        )
        step = max(1, wg.size // 400)
        for w in wg[::step]:
            x, y = _svg_xy(complex(w))
            fh.write(f'<circle cx="{x:.6g}" cy="{y:.6g}" r="1.2" fill="#c23b22"/>\n')
        fh.write("</svg>\n")
    _emit(
        {
            "config": _config_echo(args, fmeta),
            "outputs": {"csv": csv_path, "svg": svg_path},
            "boundary_points": int(wb.size),
            "grid_points": int(wg.size),
            "exclusion_radius": eps,
        }
    )
    return 0


# ---------------------------------------------------------------------------
# certify


def cmd_certify(args) -> int:
    region = region_from_spec(args.region)
    f, fmeta = _build_evaluator(args)
    verdict = boundary_univalence_certify(f, region, n=args.n)

    grid = region.interior_grid(1024)
    axis = np.linspace(-0.999, 0.999, 201)
    axis = axis[region.contains(axis + 0j)]
    tr = typical_reality_check(f, np.concatenate([grid, axis + 0j]))
    target = getattr(f, "harmonic_map", None) or f
    scan = local_univalence_scan(target, region, n=min(args.n, 4096))

    expected = OUTCOME_COLLISION if args.expect_collision else OUTCOME_CERTIFIED
    doc = {
        "config": _config_echo(args, {**fmeta, "expect_collision": args.expect_collision}),
        "univalence": verdict.to_dict(),
        "typical_reality": {
            "passed": tr.passed,
            "witness": None if tr.witness is None else [tr.witness.real, tr.witness.imag],
        },
        "local_univalence": {
            "min_jacobian": scan.min_jac,
            "critical_points": [[z.real, z.imag] for z, _ in scan.witnesses],
        },
        "expected": expected,
    }
    _emit(doc)
    return 0 if verdict.outcome == expected else 1


# ---------------------------------------------------------------------------
# searches


def cmd_radius(args) -> int:
    report = radius_estimate(
        kind=args.kind, samples=args.samples, resolution=args.n, seed=args.seed
    )
    _emit({"config": _config_echo(args, {"kind": args.kind}), "report": report.to_dict()})
    return 0


def cmd_conjecture(args) -> int:
    report = conjecture_scan(
        args.id,
        samples=args.samples,
        resolution=args.n,
        seed=args.seed,
        workers=args.workers,
    )
    _emit({"config": _config_echo(args, {"id": args.id}), "report": report})
    return 0


def cmd_witness(args) -> int:
    kind = args.kind
    if kind == "critical":
        z0 = complex(args.z0)
        t0 = critical_t_for_boundary_point(z0)
        result = {"t": t0, "residual": abs(ft_eval(t0, z0)[1])}
    elif kind == "scaled":
        z0 = complex(args.z0)
        t, big_r = scaled_critical_T(z0)
        result = {"t": t, "R": big_r, "residual": abs(ftR_deriv(t, big_r, z0))}
    elif kind == "proposition":
        nu = proposition_measure(args.alpha)
        lam = nu.weights[-1]
        result = {
            "atoms": [[float(t), float(w)] for t, w in nu.atoms()],
            "residual": two_atom_boundary_residual(lam, args.alpha),
            "perturbed_residuals": [
                two_atom_boundary_residual(lam - 0.01, args.alpha),
                two_atom_boundary_residual(lam + 0.01, args.alpha),
            ],
        }
    elif kind == "nonconvexity":
        a = nonconvexity_witness(args.s, args.t, args.lam)
        result = {"a": [a.real, a.imag]}
    elif kind == "collision":
        result = theorem5_collision(args.alpha).to_dict()
    elif kind == "coeffs":
        result = coefficient_extremes(args.coeff_n, gridsize=256)
    else:
        return _usage(f"unknown witness kind {kind!r}")
    _emit({"config": _config_echo(args, {"kind": kind}), "witness": result})
    return 0


def cmd_demo(args) -> int:
    run_picard = args.picard or not args.goodman
    run_goodman = args.goodman or not args.picard
    out = {}
    if run_picard:
        w = complex(args.w)
        pts = picard_preimages(w, delta=args.delta, k=args.k)
        out["picard"] = {
            "w": [w.real, w.imag],
            "delta": args.delta,
            "preimages": [[z.real, z.imag] for z in pts],
            "residuals": [abs(picard_map(z) - w) for z in pts],
        }
    if run_goodman:
        z0 = (1.0 + 1j * SQRT2) / 3.0
        witness = collision_search(
            named_evaluator("goodman"),
            Region.disk(GOODMAN_RADIUS + 0.01),
            seeds=[(z0, -z0.conjugate())],
        )
        if witness is None:
            raise SearchFailureError("tangency collision did not confirm")
        out["goodman"] = {"radius": GOODMAN_RADIUS, "witness": witness}
    _emit({"config": _config_echo(args, {}), "demo": out})
    return 0


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="harmlens",
        description="construct, certify, and search harmonic maps built from atomic measures",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, n_default):
        p.add_argument("--f", help="named map (koebe, qt:t=, ft:t=, ftr:t=,r=, goodman, picard, theorem5)")
        p.add_argument("--measures", help="path to a measure-pair JSON document")
        p.add_argument("--n", type=int, default=n_default, help="resolution (points)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path prefix")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--samples", type=int, default=0)

    p = sub.add_parser("render", help="write CSV + SVG of a map over a region")
    common(p, 2048)
    p.add_argument("--region", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("certify", help="univalence + typical reality + local scan")
    common(p, 2048)
    p.add_argument("--region", required=True)
    p.add_argument("--expect-collision", action="store_true", dest="expect_collision")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("radius", help="bracket a univalence radius by certification")
    common(p, 512)
    p.add_argument("--kind", choices=["ru", "lensT"], default="ru")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("conjecture", help="deterministic scan of an open claim")
    common(p, 2048)
    p.add_argument("--id", required=True, choices=["1", "2", "open3"])
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("witness", help="single extremal witness computations")
    common(p, 256)
    p.add_argument(
        "--kind",
        required=True,
        choices=["critical", "scaled", "proposition", "nonconvexity", "collision", "coeffs"],
    )
    p.add_argument("--z0", default="0.45j", help="complex literal, e.g. 0.45j or 0.3+0.5j")
    p.add_argument("--alpha", type=float, default=0.39269908169872414)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--t", type=float, default=-1.0)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--coeff-n", type=int, default=2, dest="coeff_n")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("demo", help="multivalence and tangency demonstrations")
    common(p, 256)
    p.add_argument("--picard", action="store_true")
    p.add_argument("--goodman", action="store_true")
    p.add_argument("--w", default="0.1", help="target value for preimages")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--delta", type=float, default=0.5)
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        region_ok = getattr(args, "region", None)
        if region_ok is not None:
            region_from_spec(region_ok)  # validate early: bad region is a usage error
    except (HarmlensError, ValueError) as exc:
        return _usage(str(exc))
    try:
        return args.func(args)
    except (FalsificationError, SearchFailureError) as exc:
        return _fail(exc, "search")
    except ValueError as exc:
        # complex() parse failures and friends are usage errors
        if isinstance(exc, HarmlensError):
            return _fail(exc, "evaluation")
        return _usage(str(exc))
    except HarmlensError as exc:
        return _fail(exc, "evaluation")


if __name__ == "__main__":
    sys.exit(main())
