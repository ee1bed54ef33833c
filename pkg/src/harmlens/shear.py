"""Shear construction of sense-preserving harmonic maps with real symmetry.

A pair of atomic measures (mu on the circle, nu on [-1,1]) generates an
analytic part h and co-analytic part g through

    h' = (p + 1) F' / 2,   g' = (p - 1) F' / 2,

where p is the herglotz factor of mu and F the robertson kernel sum of nu.
The harmonic map is f = h + conj(g); by construction Im f = Im F exactly and
the Jacobian factors as |F'|^2 Re p, so sense preservation is inherited from
Re p > 0. Values are produced either from the truncated Taylor series (small
|z|) or by adaptive quadrature of the defining path integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import CircleMeasure, Region, SegmentMeasure
from .errors import AccuracyError, DomainError
from .kernels import herglotz_eval, herglotz_raw, measure_to_series, robertson_eval, robertson_fprime
from .quadrature import DEFAULT_MAX_DEPTH, DEFAULT_ORDER, DEFAULT_RTOL, radial_mean
from .series import PowerSeries

DEFAULT_TRUNCATION = 64
SERIES_RADIUS = 0.5
NEAR_BOUNDARY = 0.999
COEFF_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class HarmonicMap:
    """Immutable result of the shear construction."""

    mu: CircleMeasure
    nu: SegmentMeasure
    order: int
    h_series: PowerSeries
    g_series: PowerSeries
    rtol: float = DEFAULT_RTOL
    max_depth: int = DEFAULT_MAX_DEPTH
    quad_order: int = DEFAULT_ORDER


def shear(
    mu: CircleMeasure,
    nu: SegmentMeasure,
    order: int = DEFAULT_TRUNCATION,
    rtol: float = DEFAULT_RTOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    quad_order: int = DEFAULT_ORDER,
) -> HarmonicMap:
    """Build the sheared map of a measure pair, with series through z^order."""
    if order < 2:
        raise DomainError("truncation order must be at least 2")
    p = measure_to_series(mu, order - 1)
    F = measure_to_series(nu, order)
    Fp = F.derivative()
    h = p.shift_const(1.0).mul(Fp).scale(0.5).antiderivative()
    g = p.shift_const(-1.0).mul(Fp).scale(0.5).antiderivative()
    m = HarmonicMap(mu, nu, order, h, g, rtol, max_depth, quad_order)
    resid = np.max(np.abs((h.sub(g)).coeffs - F.coeffs))
    if resid > COEFF_MATCH_TOL:
        raise AssertionError(f"shear series self-check failed: {resid}")
    return m


def _integrand(m: HarmonicMap):
    mu, nu = m.mu, m.nu

    def fn(zeta):
        return herglotz_raw(mu, zeta) * robertson_fprime(nu, zeta)

    return fn


def eval_map(m: HarmonicMap, z):
    """Evaluate (f, h, g) at z by adaptive quadrature of the defining integral.

    f = Re I + i Im F with I = int_[0,z] p F', so the imaginary part is exact
    by construction; h = (I+F)/2 and g = (I-F)/2. Refuses |z| > 0.999, where
    pole-adjacent quadrature can no longer reach its tolerance honestly.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    flat = arr.ravel()
    if np.any(np.abs(flat) > NEAR_BOUNDARY):
        raise AccuracyError(
            f"near-boundary evaluation refused (|z| > {NEAR_BOUNDARY})"
        )
    I = flat * radial_mean(
        _integrand(m), flat, rtol=m.rtol, max_depth=m.max_depth, order=m.quad_order
    )
    F, _ = robertson_eval(m.nu, flat, check=False)
    f = I.real + 1j * F.imag
    h = (I + F) / 2.0
    g = (I - F) / 2.0
    if scalar:
        return complex(f[0]), complex(h[0]), complex(g[0])
    shape = arr.shape
    return f.reshape(shape), h.reshape(shape), g.reshape(shape)


def eval_many(m: HarmonicMap, z, route: str = "auto"):
    """Values f(z) only; route 'series' (|z| <= 0.5), 'quad', or 'auto'."""
    arr = np.asarray(z, dtype=complex)
    if route == "auto":
        route = "series" if np.all(np.abs(arr) <= SERIES_RADIUS) else "quad"
    if route == "series":
        if np.any(np.abs(arr) > SERIES_RADIUS):
            raise DomainError(f"series route valid for |z| <= {SERIES_RADIUS}")
        return m.h_series.eval(arr) + np.conj(m.g_series.eval(arr))
    if route == "quad":
        f, _, _ = eval_map(m, arr)
        return f
    raise ValueError(f"unknown route {route!r}")


def map_imag(m: HarmonicMap, z):
    """Im f(z), which equals Im F(z) identically for sheared maps."""
    F, _ = robertson_eval(m.nu, z, check=False)
    return np.imag(F)


def hprime_gprime(m: HarmonicMap, z):
    arr = np.asarray(z, dtype=complex)
    p = herglotz_eval(m.mu, arr, check=False)
    fp = robertson_fprime(m.nu, arr)
    return (p + 1.0) * fp / 2.0, (p - 1.0) * fp / 2.0


def jacobian(m: HarmonicMap, z):
    """J_f = |h'|^2 - |g'|^2 in the factored form |F'|^2 Re p."""
    arr = np.asarray(z, dtype=complex)
    p = herglotz_eval(m.mu, arr, check=False)
    fp = robertson_fprime(m.nu, arr)
    return np.abs(fp) ** 2 * p.real


def dilatation(m: HarmonicMap, z):
    """omega = g'/h' = (p-1)/(p+1); an analytic function into the disk."""
    arr = np.asarray(z, dtype=complex)
    p = herglotz_eval(m.mu, arr, check=False)
    return (p - 1.0) / (p + 1.0)


def harmonic_evaluator(m: HarmonicMap, route: str = "auto") -> Callable:
    """Vectorized f-evaluator carrying the metadata the certifiers look for."""

    def f(z):
        return eval_many(m, z, route=route)

    f.harmonic_map = m
    f.max_abs = NEAR_BOUNDARY
    f.jacobian = lambda z: jacobian(m, z)
    f.name = "sheared"
    return f


@dataclass(frozen=True)
class GenericHarmonicInput:
    """A harmonic map given only through derivative evaluators h', g'."""

    hprime: Callable
    gprime: Callable
    name: str = "generic"


def _derivative_pair(target):
    if isinstance(target, HarmonicMap):
        return lambda z: hprime_gprime(target, z)
    if isinstance(target, GenericHarmonicInput):
        return lambda z: (
            np.asarray(target.hprime(z), dtype=complex),
            np.asarray(target.gprime(z), dtype=complex),
        )
    raise TypeError(f"cannot extract h', g' from {type(target)!r}")


@dataclass(frozen=True)
class SenseCheck:
    passed: bool
    witness: complex | None = None
    detail: dict = field(default_factory=dict)


def sense_preserving_scan(target, region: Region, n: int = 400) -> SenseCheck:
    """Check |g'| < |h'| on an interior lattice of the region.

    Points where both derivatives nearly vanish (a common zero of F') are
    resolved through the dilatation on a small probe circle: the map stays
    sense-preserving there iff the ratio extends with modulus below one.
    """
    pair = _derivative_pair(target)
    grid = region.interior_grid(n)
    hp, gp = pair(grid)
    ah, ag = np.abs(hp), np.abs(gp)
    tiny = 1e-12 * max(float(ah.max()), 1e-30)
    bad = ag >= ah
    if not np.any(bad):
        return SenseCheck(True, detail={"points": int(grid.size)})
    for idx in np.flatnonzero(bad):
        z0 = grid[idx]
        if ah[idx] > tiny:  # genuine |g'| >= |h'| > 0
            return SenseCheck(
                False, complex(z0), {"hprime": complex(hp[idx]), "gprime": complex(gp[idx])}
            )
        # common near-zero: sample the ratio on a probe circle
        circ = z0 + 1e-4 * np.exp(2j * np.pi * np.arange(16) / 16)
        circ = circ[region.contains(circ)]
        if circ.size == 0:
            return SenseCheck(False, complex(z0), {"reason": "unresolvable corner zero"})
        hpc, gpc = pair(circ)
        if np.any(np.abs(hpc) <= tiny):
            return SenseCheck(False, complex(z0), {"reason": "h' vanishes on probe circle"})
        ratio = np.max(np.abs(gpc / hpc))
        if ratio >= 1.0 - 1e-9:
            return SenseCheck(False, complex(z0), {"ratio": float(ratio)})
    return SenseCheck(True, detail={"points": int(grid.size), "resolved_zeros": True})


def decompose(h: PowerSeries, g: PowerSeries):
    """Recover (F, p) series from (h, g): F = h - g, p = (h'+g')/(h'-g').

    Requires the normalization h(0)=g(0)=0, h'(0)=1, g'(0)=0; raises
    DivisionError through the series division when h'-g' has no unit term.
    """
    if abs(h.coeffs[0]) > 1e-12 or abs(g.coeffs[0]) > 1e-12:
        raise DomainError("decompose expects h(0) = g(0) = 0")
    if abs(h.coeffs[1] - 1.0) > 1e-9 or abs(g.coeffs[1]) > 1e-9:
        raise DomainError("decompose expects h'(0) = 1 and g'(0) = 0")
    F = h.sub(g)
    hp = h.derivative()
    gp = g.derivative()
    p = hp.add(gp).div(hp.sub(gp))
    return F, p
