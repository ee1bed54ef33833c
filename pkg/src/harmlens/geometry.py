"""Polyline geometry: self-intersections, winding numbers, direction convexity.

The segment-pair core is compiled (harmlens._crossings) when the extension
built; set HARMLENS_NO_EXT=1 to force the pure numpy twin. Both expose the
same find_crossings and are tested for equal output.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .domains import Polyline
from .errors import DegenerateError, DomainError

if os.environ.get("HARMLENS_NO_EXT"):
    from . import _crossings_py as _impl
else:
    try:
        from . import _crossings as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _crossings_py as _impl

HAVE_COMPILED_CORE = bool(getattr(_impl, "COMPILED", False))
GRAZE_TOL = 1e-9


def polyline_self_intersections(poly: Polyline, touch_tol: float = 0.0):
    """(crossings, touches) among non-adjacent segments; see the core module."""
    x, y = poly.as_xy()
    return _impl.find_crossings(x, y, closed=poly.closed, touch_tol=touch_tol)


def winding_number(poly: Polyline, probe: complex) -> int:
    """Winding of a closed polyline about probe, by summed turn angles."""
    if not poly.closed:
        raise DomainError("winding number needs a closed polyline")
    w = poly.points - complex(probe)
    if np.min(np.abs(w)) < 1e-300:
        raise DegenerateError("probe lies on the polyline")
    ang = np.angle(np.roll(w, -1) / w)
    total = float(ang.sum()) / (2 * math.pi)
    return int(round(total))


def winding_numbers(poly: Polyline, probes) -> np.ndarray:
    return np.array([winding_number(poly, p) for p in np.asarray(probes, dtype=complex)])


def axis_crossing_counts(poly: Polyline, offsets, direction: str = "horizontal"):
    """Transversal crossings of the polyline with each line of a parallel family.

    direction 'horizontal' counts crossings with lines Im w = offset,
    'vertical' with Re w = offset. Sign runs within GRAZE_TOL of a line are
    collapsed, so tangential grazes are not counted.
    """
    if direction == "horizontal":
        coord = poly.points.imag
    elif direction == "vertical":
        coord = poly.points.real
    else:
        raise ValueError(f"unknown direction {direction!r}")
    counts = np.zeros(len(offsets), dtype=int)
    for idx, c in enumerate(offsets):
        s = coord - c
        sgn = np.where(s > GRAZE_TOL, 1, np.where(s < -GRAZE_TOL, -1, 0))
        nz = sgn[sgn != 0]
        if nz.size < 2:
            counts[idx] = 0
            continue
        counts[idx] = int(np.sum(nz != np.roll(nz, -1)))
    return counts
