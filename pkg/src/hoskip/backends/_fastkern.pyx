# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels in pykern.py.

Same signatures and tie-breaking rules; the adaptive integrators and the
Monte Carlo segment walk spend nearly all their time here.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def deficit_sum(double[::1] coeff, double[::1] w_beta, y, out=None):
    """sum_j coeff[j] * y / (y + w_beta[j]) for a 1-D batch of y."""
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] yv = y_arr
    if out is None:
        out = np.empty_like(y_arr)
    cdef double[::1] ov = out
    cdef Py_ssize_t n = coeff.shape[0]
    cdef Py_ssize_t m = yv.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, yi
    for i in range(m):
        yi = yv[i]
        acc = 0.0
        for j in range(n):
            acc += coeff[j] * yi / (yi + w_beta[j])
        ov[i] = acc
    return out


def segment_change_count(double[::1] px, double[::1] py,
                         double x0, double y0, double ux, double uy,
                         double step, long n_steps):
    """Count nearest-point identity changes along a discretized segment."""
    cdef Py_ssize_t n = px.shape[0]
    if n == 0:
        return 0
    cdef double hx = step * ux
    cdef double hy = step * uy
    cdef Py_ssize_t best, j, prev
    cdef long k, changes = 0
    cdef double x, y, d2, dx, dy, bd2
    prev = -1
    for k in range(n_steps + 1):
        x = x0 + k * hx
        y = y0 + k * hy
        best = 0
        dx = px[0] - x
        dy = py[0] - y
        bd2 = dx * dx + dy * dy
        for j in range(1, n):
            dx = px[j] - x
            dy = py[j] - y
            d2 = dx * dx + dy * dy
            if d2 < bd2:
                bd2 = d2
                best = j
        if k > 0 and best != prev:
            changes += 1
        prev = best
    return changes
