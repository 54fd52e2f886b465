# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loop: kernel-weighted shot-noise sums over a time grid."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, pow

cnp.import_array()


def kernel_weighted_sum(weights, times, grid, table):
    """out[r, g, k] = sum_i weights[r, i, k] * K(grid[g], times[r, i]).

    Same contract as the numpy fallback. Rows of ``times`` sorted in
    ascending order let the inner loop stop at the first time beyond t,
    but unsorted input is still handled correctly.
    """
    cdef double[:, :, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[:, ::1] s = np.ascontiguousarray(times, dtype=np.float64)
    cdef double[::1] tg = np.ascontiguousarray(grid, dtype=np.float64)
    cdef double[:, ::1] coef = np.ascontiguousarray(table.coef, dtype=np.float64)
    cdef Py_ssize_t R = w.shape[0], n = w.shape[1], W = w.shape[2], G = tg.shape[0]
    out_arr = np.zeros((R, G, W))
    cdef double[:, :, ::1] out = out_arr
    cdef int regime = table.regime
    cdef double beta = table.beta, xi0 = table.xi0, inv_step = table.inv_step
    cdef double xi_end = table.xi_end
    cdef double lv = table.left_val, ls = table.left_slope
    cdef double rv = table.right_val, rs = table.right_slope
    cdef Py_ssize_t r, g, i, k, idx
    cdef double t, tb, si, xi, dx, lk, kv
    cdef bint is_sorted = bool(np.all(np.diff(np.asarray(s), axis=1) >= 0)) if n > 1 else True
    logs_arr = np.log(np.asarray(s))
    cdef double[:, ::1] logs = logs_arr
    with nogil:
        for r in range(R):
            for g in range(G):
                t = tg[g]
                if t <= 0.0:
                    continue
                tb = pow(t, beta)
                for i in range(n):
                    si = s[r, i]
                    if si > t:
                        if is_sorted:
                            break
                        continue
                    if regime == 0:
                        kv = 1.0
                    else:
                        xi = logs[r, i] - log(t - si)
                        if xi < xi0:
                            lk = lv + ls * (xi - xi0)
                        elif xi >= xi_end:
                            lk = rv + rs * (xi - xi_end)
                        else:
                            idx = <Py_ssize_t>((xi - xi0) * inv_step)
                            dx = xi - (xi0 + idx / inv_step)
                            lk = ((coef[idx, 0] * dx + coef[idx, 1]) * dx + coef[idx, 2]) * dx + coef[idx, 3]
                        kv = tb * exp(lk)
                    for k in range(W):
                        out[r, g, k] += w[r, i, k] * kv
    return out_arr
