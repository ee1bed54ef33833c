# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled segment-intersection core; semantics match _crossings_py exactly.

The x-interval sweep order and the per-pair orientation tests are identical
to the fallback so both implementations return the same lists bit for bit.
"""

from libc.math cimport hypot

import numpy as np

COMPILED = True


cdef double _pt_seg_dist(double px, double py, double ax, double ay,
                         double bx, double by) nogil:
    cdef double dx = bx - ax
    cdef double dy = by - ay
    cdef double L2 = dx * dx + dy * dy
    cdef double t = ((px - ax) * dx + (py - ay) * dy) / L2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return hypot(px - (ax + t * dx), py - (ay + t * dy))


cdef double _seg_dist(double ax, double ay, double bx, double by,
                      double cx, double cy, double dx, double dy) nogil:
    cdef double d = _pt_seg_dist(ax, ay, cx, cy, dx, dy)
    cdef double e = _pt_seg_dist(bx, by, cx, cy, dx, dy)
    if e < d:
        d = e
    e = _pt_seg_dist(cx, cy, ax, ay, bx, by)
    if e < d:
        d = e
    e = _pt_seg_dist(dx, dy, ax, ay, bx, by)
    if e < d:
        d = e
    return d


def find_crossings(x, y, closed=True, touch_tol=0.0):
    """Return (crossings, touches); see _crossings_py.find_crossings."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t nseg = n if closed else n - 1
    cdef bint is_closed = 1 if closed else 0
    cdef double tol = touch_tol

    ax_np = np.asarray(x, dtype=np.float64)[:nseg]
    ay_np = np.asarray(y, dtype=np.float64)[:nseg]
    bx_np = np.roll(np.asarray(x, dtype=np.float64), -1)[:nseg]
    by_np = np.roll(np.asarray(y, dtype=np.float64), -1)[:nseg]
    xlo_np = np.minimum(ax_np, bx_np)
    order_np = np.argsort(xlo_np, kind="stable").astype(np.intp)

    cdef double[::1] ax = np.ascontiguousarray(ax_np)
    cdef double[::1] ay = np.ascontiguousarray(ay_np)
    cdef double[::1] bx = np.ascontiguousarray(bx_np)
    cdef double[::1] by = np.ascontiguousarray(by_np)
    cdef double[::1] xlo = np.ascontiguousarray(xlo_np)
    cdef double[::1] xhi = np.ascontiguousarray(np.maximum(ax_np, bx_np))
    cdef double[::1] ylo = np.ascontiguousarray(np.minimum(ay_np, by_np))
    cdef double[::1] yhi = np.ascontiguousarray(np.maximum(ay_np, by_np))
    cdef Py_ssize_t[::1] order = np.ascontiguousarray(order_np)
    cdef double[::1] xlo_sorted = np.ascontiguousarray(xlo_np[order_np])

    crossings = []
    touches = []

    cdef Py_ssize_t pos, q, i, j, lo_idx, hi_idx
    cdef double rx, ry, sx, sy, d1, d2, d3, d4, ti, tj, dist
    cdef bint proper

    for pos in range(nseg):
        i = order[pos]
        for q in range(pos + 1, nseg):
            if xlo_sorted[q] > xhi[i] + tol:
                break
            j = order[q]
            if ylo[j] > yhi[i] + tol or yhi[j] < ylo[i] - tol:
                continue
            if i < j:
                lo_idx = i
                hi_idx = j
            else:
                lo_idx = j
                hi_idx = i
            if hi_idx - lo_idx == 1 or (is_closed and lo_idx == 0 and hi_idx == nseg - 1):
                continue
            rx = bx[i] - ax[i]
            ry = by[i] - ay[i]
            sx = bx[j] - ax[j]
            sy = by[j] - ay[j]
            d1 = sx * (ay[i] - ay[j]) - sy * (ax[i] - ax[j])
            d2 = sx * (by[i] - ay[j]) - sy * (bx[i] - ax[j])
            d3 = rx * (ay[j] - ay[i]) - ry * (ax[j] - ax[i])
            d4 = rx * (by[j] - ay[i]) - ry * (bx[j] - ax[i])
            proper = ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
                     ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0))
            if proper:
                ti = d1 / (d1 - d2)
                tj = d3 / (d3 - d4)
                if i < j:
                    crossings.append((i, j, ti, tj))
                else:
                    crossings.append((j, i, tj, ti))
            elif tol > 0.0 or d1 == 0.0 or d2 == 0.0 or d3 == 0.0 or d4 == 0.0:
                dist = _seg_dist(ax[i], ay[i], bx[i], by[i],
                                 ax[j], ay[j], bx[j], by[j])
                if dist <= tol:
                    touches.append((lo_idx, hi_idx))

    crossings.sort()
    touches.sort()
    return crossings, touches
