"""Atomic probability measures and the planar regions the certifiers sweep.

Measures are finite atom lists normalized to unit mass; they generate the
positive-real-part factors and typically real integrands used by the shear
construction. Regions know how to test membership, produce corner-aware
boundary samples, and hand out interior grids. Everything here is immutable
and safe to share across worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InvalidMeasureError

SQRT2 = math.sqrt(2.0)
# imaginary-axis vertices of the lens sit at +-i*(sqrt(2)-1)
LENS_HALF_HEIGHT = SQRT2 - 1.0
MERGE_TOL = 1e-14
WEIGHT_SUM_TOL = 1e-12
DEFAULT_EXCLUSION = 1e-4
ARC_TOL = 1e-10


def _normalize_atoms(positions, weights):
    pos = np.asarray(positions, dtype=float)
    w = np.asarray(weights, dtype=float)
    if pos.size == 0:
        raise InvalidMeasureError("measure needs at least one atom")
    if pos.shape != w.shape or pos.ndim != 1:
        raise InvalidMeasureError("positions and weights must be matching 1-d arrays")
    if np.any(w < 0):
        raise InvalidMeasureError("negative atom weight")
    total = w.sum()
    if total <= 0:
        raise InvalidMeasureError("total mass must be positive")
    w = w / total

    order = np.argsort(pos, kind="stable")
    pos, w = pos[order], w[order]
    # merge atoms closer than MERGE_TOL, summing weights
    keep_pos, keep_w = [pos[0]], [w[0]]
    for p, ww in zip(pos[1:], w[1:]):
        if p - keep_pos[-1] <= MERGE_TOL:
            keep_w[-1] += ww
        else:
            keep_pos.append(p)
            keep_w.append(ww)
    pos = np.array(keep_pos)
    w = np.array(keep_w)
    # drop exact-zero weights unless that would empty the measure
    nz = w > 0
    if nz.any():
        pos, w = pos[nz], w[nz]
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidMeasureError("normalization failed to reach unit mass")
    pos.setflags(write=False)
    w.setflags(write=False)
    return pos, w


@dataclass(frozen=True)
class SegmentMeasure:
    """Atomic probability measure on [-1, 1]."""

    positions: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple[float, float]]) -> "SegmentMeasure":
        atoms = list(atoms)
        pos, w = _normalize_atoms([a[0] for a in atoms], [a[1] for a in atoms])
        if np.any(pos < -1) or np.any(pos > 1):
            raise InvalidMeasureError("segment atoms must lie in [-1, 1]")
        return cls(pos, w)

    @property
    def k(self) -> int:
        return self.positions.size

    def atoms(self):
        return list(zip(self.positions.tolist(), self.weights.tolist()))


@dataclass(frozen=True)
class CircleMeasure:
    """Atomic probability measure on the unit circle, atoms stored as angles."""

    angles: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple[float, float]]) -> "CircleMeasure":
        atoms = list(atoms)
        theta = np.mod([a[0] for a in atoms], 2 * math.pi)
        pos, w = _normalize_atoms(theta, [a[1] for a in atoms])
        return cls(pos, w)

    @property
    def k(self) -> int:
        return self.angles.size

    @property
    def points(self) -> np.ndarray:
        """Atom positions as unit-modulus complex numbers."""
        return np.exp(1j * self.angles)

    def atoms(self):
        return list(zip(self.angles.tolist(), self.weights.tolist()))


def normalize_measure(atoms, kind="segment"):
    """Build a measure from raw (position, weight) pairs.

    kind="segment" gives a SegmentMeasure on [-1,1], kind="circle" a
    CircleMeasure with positions taken as angles mod 2*pi.
    """
    if kind == "segment":
        return SegmentMeasure.from_atoms(atoms)
    if kind == "circle":
        return CircleMeasure.from_atoms(atoms)
    raise ValueError(f"unknown measure kind {kind!r}")


def sample_measures(k: int, seed=None, rng=None):
    """Draw a random (SegmentMeasure, CircleMeasure) pair with k atoms each.

    Positions uniform on their carrier, weights Dirichlet(1,..,1). Pass rng to
    reuse an existing generator (per-sample streams); otherwise seed feeds
    numpy's default_rng. seed may be an int or a tuple.
    """
    if k < 1:
        raise InvalidMeasureError("need k >= 1 atoms")
    if rng is None:
        rng = np.random.default_rng(seed)
    t = rng.uniform(-1.0, 1.0, size=k)
    wt = rng.dirichlet(np.ones(k))
    theta = rng.uniform(0.0, 2 * math.pi, size=k)
    wth = rng.dirichlet(np.ones(k))
    nu = SegmentMeasure.from_atoms(list(zip(t, wt)))
    mu = CircleMeasure.from_atoms(list(zip(theta, wth)))
    return nu, mu


def measure_pair_to_json(nu: SegmentMeasure, mu: CircleMeasure) -> dict:
    return {
        "nu": [{"t": t, "w": w} for t, w in nu.atoms()],
        "mu": [{"theta": th, "w": w} for th, w in mu.atoms()],
    }


def measure_pair_from_json(obj: dict):
    try:
        nu_atoms = [(d["t"], d["w"]) for d in obj["nu"]]
        mu_atoms = [(d["theta"], d["w"]) for d in obj["mu"]]
    except (KeyError, TypeError) as exc:
        raise InvalidMeasureError(f"bad measure document: {exc}") from exc
    return SegmentMeasure.from_atoms(nu_atoms), CircleMeasure.from_atoms(mu_atoms)


# ---------------------------------------------------------------------------
# regions


def _psi_raw(z):
    # 2z/(1+z^2); the defining map of the psi sublevel regions
    return 2.0 * z / (1.0 + z * z)


def _psi_inv_raw(zeta):
    # inverse branch with psi_inv(0)=0, stable for small zeta
    return zeta / (1.0 + np.sqrt(1.0 - zeta * zeta))


@dataclass(frozen=True)
class Piece:
    """One smooth boundary piece: gamma maps local parameter [0,1] to points.

    corner_start/corner_end are the corner points adjacent to the ends (None
    when the piece closes on itself), trim is the local-parameter width
    equivalent to one exclusion radius at each end.
    """

    gamma: Callable
    length: float
    corner_start: complex | None
    corner_end: complex | None
    trim: float


@dataclass(frozen=True)
class Region:
    kind: str  # disk | lens | halflens | psisub
    center: complex = 0j
    radius: float = 0.0
    level: float = 0.0
    exclusion_radius: float = DEFAULT_EXCLUSION

    @classmethod
    def disk(cls, radius: float, center: complex = 0j) -> "Region":
        if radius <= 0:
            raise DomainError("disk radius must be positive")
        return cls(kind="disk", center=complex(center), radius=float(radius))

    @classmethod
    def lens(cls, exclusion_radius: float = DEFAULT_EXCLUSION) -> "Region":
        return cls(kind="lens", exclusion_radius=exclusion_radius)

    @classmethod
    def halflens(cls, exclusion_radius: float = DEFAULT_EXCLUSION) -> "Region":
        return cls(kind="halflens", exclusion_radius=exclusion_radius)

    @classmethod
    def psisub(cls, level: float) -> "Region":
        if not 0 < level < 1:
            raise DomainError("psi sublevel must be in (0, 1)")
        return cls(kind="psisub", level=float(level))

    def with_exclusion(self, eps: float) -> "Region":
        return Region(self.kind, self.center, self.radius, self.level, float(eps))

    # -- membership ---------------------------------------------------------

    def contains(self, z) -> np.ndarray:
        arr = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            out = np.abs(arr - self.center) < self.radius
        elif self.kind == "lens":
            out = (np.abs(arr - 1j) < SQRT2) & (np.abs(arr + 1j) < SQRT2)
        elif self.kind == "halflens":
            out = (
                (np.abs(arr - 1j) < SQRT2)
                & (np.abs(arr + 1j) < SQRT2)
                & (arr.real > 0)
            )
        elif self.kind == "psisub":
            out = np.abs(arr) < 1.0
            safe = np.where(np.abs(arr * arr + 1.0) > 1e-30, arr, 0.0)
            out &= np.abs(_psi_raw(safe)) < self.level
        else:
            raise DomainError(f"unknown region kind {self.kind!r}")
        if arr.ndim == 0:
            return bool(out)
        return out

    def exterior_measure(self, z) -> np.ndarray:
        """Signed-distance-like quantity: <= 0 inside, grows outside.

        Used as a smooth penalty by the interior collision search; exact
        distance is not needed.
        """
        arr = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            out = np.abs(arr - self.center) - self.radius
        elif self.kind == "lens":
            out = np.maximum(np.abs(arr - 1j), np.abs(arr + 1j)) - SQRT2
        elif self.kind == "halflens":
            lens = np.maximum(np.abs(arr - 1j), np.abs(arr + 1j)) - SQRT2
            out = np.maximum(lens, -arr.real)
        elif self.kind == "psisub":
            denom = np.abs(arr * arr + 1.0)
            safe = np.where(denom > 1e-30, arr, 0.0)
            psival = np.where(denom > 1e-30, np.abs(_psi_raw(safe)), np.inf)
            out = np.maximum(psival - self.level, np.abs(arr) - 0.999999)
        else:
            raise DomainError(f"unknown region kind {self.kind!r}")
        if arr.ndim == 0:
            return float(out)
        return out

    # -- boundary -----------------------------------------------------------

    def boundary_pieces(self, exclusion: float | None = None) -> list[Piece]:
        eps = self.exclusion_radius if exclusion is None else float(exclusion)
        if self.kind == "disk":
            c, r = self.center, self.radius

            def gam(s, c=c, r=r):
                return c + r * np.exp(2j * math.pi * np.asarray(s))

            return [Piece(gam, 2 * math.pi * r, None, None, 0.0)]

        if self.kind == "psisub":
            lv = self.level

            def gam(s, lv=lv):
                return _psi_inv_raw(lv * np.exp(2j * math.pi * np.asarray(s)))

            # rough length; only used for point allocation weights
            pts = gam(np.linspace(0, 1, 257))
            length = float(np.abs(np.diff(pts)).sum())
            return [Piece(gam, length, None, None, 0.0)]

        if self.kind == "lens":
            # chord of eps on a radius-sqrt(2) circle, in local-parameter units
            dphi = 2.0 * math.asin(min(1.0, eps / (2 * SQRT2)))
            trim = dphi / (math.pi / 2)

            def bottom(s):
                phi = -3 * math.pi / 4 + (math.pi / 2) * np.asarray(s)
                return 1j + SQRT2 * np.exp(1j * phi)

            def top(s):
                phi = math.pi / 4 + (math.pi / 2) * np.asarray(s)
                return -1j + SQRT2 * np.exp(1j * phi)

            arc_len = SQRT2 * math.pi / 2
            return [
                Piece(bottom, arc_len, -1 + 0j, 1 + 0j, trim),
                Piece(top, arc_len, 1 + 0j, -1 + 0j, trim),
            ]

        if self.kind == "halflens":
            a = LENS_HALF_HEIGHT
            dphi = 2.0 * math.asin(min(1.0, eps / (2 * SQRT2)))
            arc_trim = dphi / (math.pi / 4)

            def lower(s):
                phi = -math.pi / 2 + (math.pi / 4) * np.asarray(s)
                return 1j + SQRT2 * np.exp(1j * phi)

            def upper(s):
                phi = math.pi / 4 + (math.pi / 4) * np.asarray(s)
                return -1j + SQRT2 * np.exp(1j * phi)

            def seg(s, a=a):
                return 1j * a * (1.0 - 2.0 * np.asarray(s))

            arc_len = SQRT2 * math.pi / 4
            seg_trim = eps / (2 * a)
            return [
                Piece(lower, arc_len, -1j * a, 1 + 0j, arc_trim),
                Piece(upper, arc_len, 1 + 0j, 1j * a, arc_trim),
                Piece(seg, 2 * a, 1j * a, -1j * a, seg_trim),
            ]

        raise DomainError(f"unknown region kind {self.kind!r}")

    def boundary_points(self, n: int, exclusion: float | None = None) -> np.ndarray:
        """n points on the boundary, positively oriented, corner windows omitted.

        Corner-adjacent pieces are re-parametrized over their trimmed local
        range so the requested point count is preserved.
        """
        if n < 4:
            raise DomainError("need at least 4 boundary points")
        pieces = self.boundary_pieces(exclusion)
        total = sum(p.length * (1 - 2 * p.trim) for p in pieces)
        out = []
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
                s = lo + (hi - lo) * np.arange(m) / m  # closed piece, no dup endpoint
            else:
                s = np.linspace(lo, hi, m)
            out.append(p.gamma(s))
        return np.concatenate(out)

    # -- interior -----------------------------------------------------------

    def interior_anchor(self) -> complex:
        if self.kind == "disk":
            return self.center
        if self.kind == "halflens":
            return 0.2 + 0j
        return 0j

    def bbox(self):
        pts = self.boundary_points(512)
        return (
            float(pts.real.min()),
            float(pts.real.max()),
            float(pts.imag.min()),
            float(pts.imag.max()),
        )

    def interior_grid(self, n: int) -> np.ndarray:
        """At least n interior points on a deterministic cartesian lattice."""
        xmin, xmax, ymin, ymax = self.bbox()
        m = max(4, int(math.isqrt(n)))
        while True:
            xs = np.linspace(xmin, xmax, m + 2)[1:-1]
            ys = np.linspace(ymin, ymax, m + 2)[1:-1]
            X, Y = np.meshgrid(xs, ys)
            pts = (X + 1j * Y).ravel()
            pts = pts[self.contains(pts)]
            if pts.size >= n:
                return pts
            m = int(m * 1.5) + 1

    def sample_interior(self, n: int, rng) -> np.ndarray:
        """n interior points by rejection from the bounding box."""
        xmin, xmax, ymin, ymax = self.bbox()
        got = []
        count = 0
        while count < n:
            m = max(64, 2 * (n - count))
            cand = rng.uniform(xmin, xmax, m) + 1j * rng.uniform(ymin, ymax, m)
            cand = cand[self.contains(cand)]
            got.append(cand)
            count += cand.size
        return np.concatenate(got)[:n]

    def interior_probes(self, k: int = 16) -> np.ndarray:
        """k well-spread interior probe points (regions are star-shaped
        about their anchor)."""
        anchor = self.interior_anchor()
        pieces = self.boundary_pieces()
        # spread over all pieces at two depths toward the anchor
        s = (np.arange(k) + 0.5) / k
        ray_pts = []
        per = np.array_split(s, len(pieces))
        for p, ss in zip(pieces, per):
            lo, hi = p.trim, 1 - p.trim
            ray_pts.append(p.gamma(lo + (hi - lo) * ss))
        bnd = np.concatenate(ray_pts)
        rho = np.where(np.arange(k) % 2 == 0, 0.35, 0.65)
        probes = anchor + rho * (bnd - anchor)
        inside = self.contains(probes)
        if not np.all(inside):
            probes = np.where(inside, probes, anchor + 0.2 * (bnd - anchor))
        return probes


def region_contains(region: Region, z):
    return region.contains(z)


def region_boundary(region: Region, n: int) -> "Polyline":
    return Polyline(region.boundary_points(n), closed=True)


def region_from_spec(spec: str) -> Region:
    """Parse CLI region strings: disk:r=0.3, lens, halflens, psisub:c=0.41."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise DomainError(f"bad region parameter {part!r} in {spec!r}")
            params[key.strip()] = float(val)
    name = name.strip().lower()
    if name == "disk":
        if "r" not in params:
            raise DomainError("disk region needs r=...")
        return Region.disk(params["r"], complex(params.get("x", 0.0), params.get("y", 0.0)))
    if name == "lens":
        return Region.lens()
    if name == "halflens":
        return Region.halflens()
    if name == "psisub":
        if "c" not in params:
            raise DomainError("psisub region needs c=...")
        return Region.psisub(params["c"])
    raise DomainError(f"unknown region {spec!r}")


def on_lens_boundary_arc(z: complex) -> bool:
    """True iff z lies on one of the open circular arcs bounding the lens.

    The arcs are characterized inside the unit disk by ((1+z)/(1-z))^4 being
    real and negative; corners are excluded (z=1 is a pole of the test and
    rejected explicitly).
    """
    z = complex(z)
    if abs(z - 1.0) < 1e-14:
        raise DomainError("z=1 is a pole of the arc test")
    if abs(z) >= 1.0:
        return False
    q = ((1.0 + z) / (1.0 - z)) ** 4
    return abs(q.imag) <= ARC_TOL * max(1.0, abs(q)) and q.real < 0


@dataclass(frozen=True)
class Polyline:
    """Vertex chain; closed polylines wrap implicitly (no duplicate endpoint)."""

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        arr = np.array(np.asarray(self.points, dtype=complex), copy=True)
        if arr.ndim != 1 or arr.size < 2:
            raise DomainError("polyline needs at least two vertices")
        d = np.abs(np.diff(arr))
        if np.any(d == 0):
            raise DomainError("consecutive polyline vertices must be distinct")
        if self.closed and arr[0] == arr[-1]:
            raise DomainError("closed polyline must not repeat its first vertex")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return self.points.size

    def as_xy(self):
        return np.ascontiguousarray(self.points.real), np.ascontiguousarray(
            self.points.imag
        )
