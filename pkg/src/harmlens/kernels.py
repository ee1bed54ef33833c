"""Closed-form evaluators for the analytic ingredients of the shear construction.

Everything is vectorized over complex numpy arrays and guards its poles and
branch cuts explicitly; evaluation inside a guard radius raises rather than
returning garbage. Scalars in, scalars out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import CircleMeasure, SegmentMeasure
from .errors import BranchError, DomainError, PoleError
from .series import PowerSeries

POLE_GUARD = 1e-12
DISK_EDGE = 1.0 - 1e-12


def _as_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return complex(arr) if scalar else arr


def herglotz_eval(mu: CircleMeasure, z, check: bool = True):
    """p(z) = sum w_j (1 + eta_j z)/(1 - eta_j z); Re p > 0 on the open disk."""
    arr, scalar = _as_array(z)
    if check and np.any(np.abs(arr) >= 1.0):
        raise DomainError("herglotz factor is defined on |z| < 1 only")
    eta = mu.points
    ez = eta[:, None] * arr.reshape(1, -1)
    vals = mu.weights @ ((1.0 + ez) / (1.0 - ez))
    return _ret(vals.reshape(arr.shape) if not scalar else vals[0], scalar)


def robertson_eval(nu: SegmentMeasure, z, check: bool = True):
    """F(z) = sum w_j z/(1 - 2 t_j z + z^2) and its derivative.

    Defined through |z| <= 1 away from the unit-circle poles exp(+-i acos t_j);
    points inside the pole guard radius raise PoleError.
    """
    arr, scalar = _as_array(z)
    if check:
        absz = np.abs(arr)
        if np.any(absz > 1.0 + 1e-9):
            raise DomainError("robertson kernel allows |z| <= 1 only")
        near_edge = absz > DISK_EDGE
        if np.any(near_edge):
            alphas = np.arccos(nu.positions)
            poles = np.concatenate([np.exp(1j * alphas), np.exp(-1j * alphas)])
            d = np.abs(arr.reshape(1, -1)[:, near_edge.ravel()] - poles[:, None])
            if d.size and d.min() < POLE_GUARD:
                raise PoleError("evaluation inside pole guard of the kernel")
    t = nu.positions[:, None]
    w = nu.weights
    zz = arr.reshape(1, -1)
    # factored conjugate pair (1 - cz)(1 - conj(c) z) with c = exp(i acos t);
    # the expanded trinomial 1 - 2tz + z^2 cancels catastrophically near the
    # poles, and so does the numerator 1 - z^2
    c = t + 1j * np.sqrt(np.maximum(0.0, 1.0 - t * t))
    den = (1.0 - c * zz) * (1.0 - np.conj(c) * zz)
    F = w @ (zz / den)
    Fp = w @ (((1.0 - zz) * (1.0 + zz)) / (den * den))
    if scalar:
        return complex(F[0]), complex(Fp[0])
    return F.reshape(arr.shape), Fp.reshape(arr.shape)


def robertson_fprime(nu: SegmentMeasure, z):
    """Derivative only, no guards; internal fast path for quadrature nodes."""
    arr = np.asarray(z, dtype=complex)
    t = nu.positions.reshape((-1,) + (1,) * arr.ndim)
    c = t + 1j * np.sqrt(np.maximum(0.0, 1.0 - t * t))
    den = (1.0 - c * arr) * (1.0 - np.conj(c) * arr)
    return np.tensordot(nu.weights, ((1.0 - arr) * (1.0 + arr)) / (den * den), axes=1)


def herglotz_raw(mu: CircleMeasure, z):
    """No-guard elementwise p(z); internal fast path for quadrature nodes."""
    arr = np.asarray(z, dtype=complex)
    eta = mu.points.reshape((-1,) + (1,) * arr.ndim)
    ez = eta * arr
    return np.tensordot(mu.weights, (1.0 + ez) / (1.0 - ez), axes=1)


def measure_to_series(measure, order: int) -> PowerSeries:
    """Taylor coefficients of the measure's kernel sum.

    CircleMeasure -> herglotz factor: c_0 = 1, c_n = 2 sum w eta^n.
    SegmentMeasure -> robertson integrand: a_0 = 0, a_n = sum w U_{n-1}(t)
    (Chebyshev polynomials of the second kind).
    """
    if isinstance(measure, CircleMeasure):
        out = np.zeros(order + 1, dtype=complex)
        out[0] = 1.0
        pw = np.ones_like(measure.points)
        for n in range(1, order + 1):
            pw = pw * measure.points
            out[n] = 2.0 * np.dot(measure.weights, pw)
        return PowerSeries(out)
    if isinstance(measure, SegmentMeasure):
        out = np.zeros(order + 1, dtype=complex)
        t = measure.positions
        w = measure.weights
        u_prev = np.ones_like(t)  # U_0
        u = 2.0 * t  # U_1
        if order >= 1:
            out[1] = w.sum()
        if order >= 2:
            out[2] = np.dot(w, u)
        for n in range(3, order + 1):
            u_prev, u = u, 2.0 * t * u - u_prev
            out[n] = np.dot(w, u)
        return PowerSeries(out)
    raise TypeError(f"unsupported measure type {type(measure)!r}")


# ---------------------------------------------------------------------------
# the two-slit transfer map and the slit-plane representation


def psi(z):
    """2z/(1+z^2), the conformal map of the disk onto the two-slit plane."""
    arr, scalar = _as_array(z)
    if np.any(np.abs(arr - 1j) < POLE_GUARD) or np.any(np.abs(arr + 1j) < POLE_GUARD):
        raise PoleError("psi has poles at +-i")
    return _ret(2.0 * arr / (1.0 + arr * arr), scalar)


def psi_inv(zeta):
    """Inverse of psi with psi_inv(0) = 0, principal square root branch.

    The two rays (-inf,-1] and [1,inf) are the branch cut; points on them
    raise BranchError. Uses zeta/(1 + sqrt(1-zeta^2)), which is stable for
    small zeta (no cancellation).
    """
    arr, scalar = _as_array(zeta)
    on_cut = (arr.imag == 0.0) & (np.abs(arr.real) >= 1.0)
    if np.any(on_cut):
        raise BranchError("psi_inv is not defined on the slits |Re| >= 1, Im = 0")
    return _ret(arr / (1.0 + np.sqrt(1.0 - arr * arr)), scalar)


def slit_rep_eval(nu: SegmentMeasure, zeta):
    """F(zeta) = sum w_j zeta/(1 - t_j zeta) on the two-slit plane, and F'.

    Composing with psi halves: robertson(nu, z) = slit_rep(nu, psi(z)) / 2.
    Poles sit at 1/t_j on the cut rays.
    """
    arr, scalar = _as_array(zeta)
    on_cut = (arr.imag == 0.0) & (np.abs(arr.real) >= 1.0)
    if np.any(on_cut):
        raise BranchError("slit representation undefined on the slits")
    t = nu.positions[:, None]
    w = nu.weights
    zz = arr.reshape(1, -1)
    den = 1.0 - t * zz
    if np.any(np.abs(den) < POLE_GUARD * np.maximum(1.0, np.abs(t))):
        raise PoleError("evaluation inside pole guard of the slit representation")
    F = w @ (zz / den)
    Fp = w @ (1.0 / (den * den))
    if scalar:
        return complex(F[0]), complex(Fp[0])
    return F.reshape(arr.shape), Fp.reshape(arr.shape)


# ---------------------------------------------------------------------------
# the one-parameter extremal family and named closed forms


def ft_eval(t: float, z):
    """f_t = t k(z) + (1-t) k(-z) for the Koebe function k, with derivative.

    The derivative is evaluated in the factored form
    (t Q + (1-t)) (1-z)/(1+z)^3 with Q = ((1+z)/(1-z))^4, which keeps the
    cancellation at the critical points explicit.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    arr, scalar = _as_array(z)
    if np.any(np.abs(arr - 1.0) < POLE_GUARD) or np.any(np.abs(arr + 1.0) < POLE_GUARD):
        raise PoleError("f_t has poles at +-1")
    omz = 1.0 - arr
    opz = 1.0 + arr
    val = t * arr / (omz * omz) + (1.0 - t) * arr / (opz * opz)
    q = (opz / omz) ** 4
    der = (t * q + (1.0 - t)) * omz / (opz * opz * opz)
    if scalar:
        return complex(val), complex(der)
    return val, der


def ftR_eval(t: float, R: float, z):
    """Scaled family member f_t(Rz)/R; univalence-normalized for 0 < R <= 1."""
    if not 0.0 < R <= 1.0:
        raise DomainError("R must lie in (0, 1]")
    val, _ = ft_eval(t, np.asarray(z, dtype=complex) * R)
    out = val / R
    if np.asarray(z).ndim == 0:
        return complex(out)
    return out


def ftR_deriv(t: float, R: float, z):
    """d/dz of f_t(Rz)/R = f_t'(Rz)."""
    if not 0.0 < R <= 1.0:
        raise DomainError("R must lie in (0, 1]")
    _, der = ft_eval(t, np.asarray(z, dtype=complex) * R)
    if np.asarray(z).ndim == 0:
        return complex(der)
    return der


def goodman_G(z):
    """tan(pi z / (1 + z^2)) / pi, locally univalent on the disk."""
    arr, scalar = _as_array(z)
    if np.any(np.abs(arr - 1j) < POLE_GUARD) or np.any(np.abs(arr + 1j) < POLE_GUARD):
        raise PoleError("goodman map has essential boundary points at +-i")
    u = math.pi * arr / (1.0 + arr * arr)
    # poles of tan at pi/2 + k pi
    k = np.round((u.real - math.pi / 2) / math.pi)
    if np.any(np.abs(u - (math.pi / 2 + k * math.pi)) < 1e-10):
        raise PoleError("evaluation at a pole of tan")
    return _ret(np.tan(u) / math.pi, scalar)


def goodman_G_deriv(z):
    arr, scalar = _as_array(z)
    u = math.pi * arr / (1.0 + arr * arr)
    k = np.round((u.real - math.pi / 2) / math.pi)
    if np.any(np.abs(u - (math.pi / 2 + k * math.pi)) < 1e-10):
        raise PoleError("evaluation at a pole of tan")
    sq = 1.0 + arr * arr
    return _ret((1.0 - arr * arr) / (sq * sq * np.cos(u) ** 2), scalar)


def goodman_in_S(z) -> bool:
    """Membership in the strip |Re(pi z/(1+z^2))| < pi/2 where G is conformal."""
    arr, scalar = _as_array(z)
    u = math.pi * arr / (1.0 + arr * arr)
    out = np.abs(u.real) < math.pi / 2
    return bool(out) if scalar else out


def picard_u(z):
    """4z/(1+z)^2, mapping the disk onto the plane slit along [1, inf)."""
    arr, scalar = _as_array(z)
    if np.any(np.abs(arr + 1.0) < POLE_GUARD):
        raise PoleError("pole at z = -1")
    opz = 1.0 + arr
    return _ret(4.0 * arr / (opz * opz), scalar)


def picard_map(z):
    """u e^{-u} with u = 4z/(1+z)^2; every nonzero value has infinitely many
    preimages accumulating at z = -1."""
    arr, scalar = _as_array(z)
    u = picard_u(arr)
    return _ret(u * np.exp(-u), scalar)


def picard_deriv(z):
    arr, scalar = _as_array(z)
    if np.any(np.abs(arr + 1.0) < POLE_GUARD):
        raise PoleError("pole at z = -1")
    opz = 1.0 + arr
    u = 4.0 * arr / (opz * opz)
    du = 4.0 * (1.0 - arr) / (opz * opz * opz)
    return _ret((1.0 - u) * np.exp(-u) * du, scalar)


# ---------------------------------------------------------------------------
# evaluator objects


@dataclass(frozen=True)
class AnalyticEvaluator:
    """Callable value/derivative pair for a named analytic map."""

    name: str
    value: Callable
    derivative: Callable
    meta: dict = field(default_factory=dict)
    max_abs: float | None = None

    def __call__(self, z):
        return self.value(z)


def robertson_evaluator(nu: SegmentMeasure, name: str = "robertson") -> AnalyticEvaluator:
    return AnalyticEvaluator(
        name=name,
        value=lambda z: robertson_eval(nu, z)[0],
        derivative=lambda z: robertson_eval(nu, z)[1],
        meta={"atoms": nu.atoms()},
    )


def _qt_evaluator(t: float, name: str) -> AnalyticEvaluator:
    return robertson_evaluator(SegmentMeasure.from_atoms([(t, 1.0)]), name)


def named_evaluator(spec: str) -> AnalyticEvaluator:
    """Resolve CLI map names: koebe, qt:t=0.5, ft:t=0.5, goodman, picard, identity."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise DomainError(f"bad map parameter {part!r} in {spec!r}")
            params[key.strip()] = float(val)
    name = name.strip().lower()
    if name == "koebe":
        return _qt_evaluator(1.0, "koebe")
    if name == "qt":
        if "t" not in params:
            raise DomainError("qt needs t=...")
        return _qt_evaluator(params["t"], spec)
    if name == "ft":
        if "t" not in params:
            raise DomainError("ft needs t=...")
        t = params["t"]
        return AnalyticEvaluator(
            name=spec,
            value=lambda z, t=t: ft_eval(t, z)[0],
            derivative=lambda z, t=t: ft_eval(t, z)[1],
            meta={"t": t},
        )
    if name == "ftr":
        if "t" not in params or "r" not in params:
            raise DomainError("ftr needs t=...,r=...")
        t, R = params["t"], params["r"]
        return AnalyticEvaluator(
            name=spec,
            value=lambda z, t=t, R=R: ftR_eval(t, R, z),
            derivative=lambda z, t=t, R=R: ftR_deriv(t, R, z),
            meta={"t": t, "R": R},
        )
    if name == "goodman":
        return AnalyticEvaluator("goodman", goodman_G, goodman_G_deriv)
    if name == "picard":
        return AnalyticEvaluator("picard", picard_map, picard_deriv)
    if name == "identity":
        return AnalyticEvaluator(
            "identity",
            lambda z: np.asarray(z, dtype=complex) + 0.0,
            lambda z: np.ones_like(np.asarray(z, dtype=complex)),
        )
    raise DomainError(f"unknown map {spec!r}")
