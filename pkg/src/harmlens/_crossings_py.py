"""Pure numpy segment-intersection core; semantics mirrored by _crossings.pyx.

Segments of a polyline are tested pairwise after an x-interval sweep prune.
Adjacent segments (sharing an endpoint) are never reported: endpoint contact
is the tie-break rule, not an intersection. A transversal crossing requires
strict orientation sign changes on both segments; anything non-transversal
that still comes within touch_tol counts as a touch.
"""

from __future__ import annotations

import math

import numpy as np

COMPILED = False


def _pt_seg_dist(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    L2 = dx * dx + dy * dy
    t = ((px - ax) * dx + (py - ay) * dy) / L2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _seg_dist(ax, ay, bx, by, cx, cy, dx, dy):
    return min(
        _pt_seg_dist(ax, ay, cx, cy, dx, dy),
        _pt_seg_dist(bx, by, cx, cy, dx, dy),
        _pt_seg_dist(cx, cy, ax, ay, bx, by),
        _pt_seg_dist(dx, dy, ax, ay, bx, by),
    )


def find_crossings(x, y, closed=True, touch_tol=0.0):
    """Return (crossings, touches) among non-adjacent segment pairs.

    crossings: (i, j, ti, tj) with i < j and segment parameters in (0, 1);
    touches: (i, j) pairs closer than touch_tol without proper crossing.
    """
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    n = x.size
    nseg = n if closed else n - 1
    ax, ay = x[:nseg], y[:nseg]
    bx = np.roll(x, -1)[:nseg]
    by = np.roll(y, -1)[:nseg]
    xlo = np.minimum(ax, bx)
    xhi = np.maximum(ax, bx)
    ylo = np.minimum(ay, by)
    yhi = np.maximum(ay, by)
    order = np.argsort(xlo, kind="stable")
    xlo_sorted = xlo[order]

    crossings = []
    touches = []
    for pos in range(nseg):
        i = int(order[pos])
        hi = np.searchsorted(xlo_sorted, xhi[i] + touch_tol, side="right")
        if hi <= pos + 1:
            continue
        cand = order[pos + 1 : hi]
        cand = cand[(ylo[cand] <= yhi[i] + touch_tol) & (yhi[cand] >= ylo[i] - touch_tol)]
        for j in cand:
            j = int(j)
            lo_idx, hi_idx = (i, j) if i < j else (j, i)
            if hi_idx - lo_idx == 1 or (closed and lo_idx == 0 and hi_idx == nseg - 1):
                continue
            rx, ry = bx[i] - ax[i], by[i] - ay[i]
            sx, sy = bx[j] - ax[j], by[j] - ay[j]
            d1 = sx * (ay[i] - ay[j]) - sy * (ax[i] - ax[j])
            d2 = sx * (by[i] - ay[j]) - sy * (bx[i] - ax[j])
            d3 = rx * (ay[j] - ay[i]) - ry * (ax[j] - ax[i])
            d4 = rx * (by[j] - ay[i]) - ry * (bx[j] - ax[i])
            if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
                (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
            ):
                ti = d1 / (d1 - d2)
                tj = d3 / (d3 - d4)
                if i < j:
                    crossings.append((i, j, float(ti), float(tj)))
                else:
                    crossings.append((j, i, float(tj), float(ti)))
            elif touch_tol > 0.0 or d1 == 0.0 or d2 == 0.0 or d3 == 0.0 or d4 == 0.0:
                # exact contact always makes one orientation vanish, so with
                # touch_tol == 0 the distance test only runs on those cases
                dist = _seg_dist(ax[i], ay[i], bx[i], by[i], ax[j], ay[j], bx[j], by[j])
                if dist <= touch_tol:
                    touches.append((lo_idx, hi_idx))
    crossings.sort()
    touches.sort()
    return crossings, touches
