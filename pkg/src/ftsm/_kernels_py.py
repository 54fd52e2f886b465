"""Pure numpy implementation of the shot-noise hot loop.

Mirrors ``_kernels_ext`` operation by operation; used when the compiled
extension is unavailable or ``FTSM_PURE_PYTHON=1`` is set.
"""

import numpy as np


def table_kernel(t, s, table):
    """K(t, s) from the log-spline table, for s > 0 (array ``s``, scalar ``t``)."""
    s = np.asarray(s, dtype=float)
    if table.regime == 0:
        return (s <= t).astype(float)
    out = np.zeros(s.shape)
    mask = s <= t
    if not np.any(mask):
        return out
    sm = s[mask]
    with np.errstate(divide="ignore"):
        xi = np.log(sm) - np.log(t - sm)
    logk = np.empty(sm.shape)
    left = xi < table.xi0
    right = xi >= table.xi_end
    mid = ~(left | right)
    pos = (xi[mid] - table.xi0) * table.inv_step
    idx = pos.astype(np.int64)
    dx = xi[mid] - (table.xi0 + idx / table.inv_step)
    c = table.coef[idx]
    logk[mid] = ((c[:, 0] * dx + c[:, 1]) * dx + c[:, 2]) * dx + c[:, 3]
    logk[left] = table.left_val + table.left_slope * (xi[left] - table.xi0)
    logk[right] = table.right_val + table.right_slope * (xi[right] - table.xi_end)
    out[mask] = t**table.beta * np.exp(logk)
    return out


def kernel_weighted_sum(weights, times, grid, table):
    """out[r, g, k] = sum_i weights[r, i, k] * K(grid[g], times[r, i]).

    Parameters
    ----------
    weights : ndarray, shape (R, n, W)
    times : ndarray, shape (R, n)
        Jump times, strictly positive.
    grid : ndarray, shape (G,)
    table : KernelTable
    """
    weights = np.asarray(weights, dtype=float)
    times = np.asarray(times, dtype=float)
    grid = np.asarray(grid, dtype=float)
    R, n, W = weights.shape
    out = np.zeros((R, grid.size, W))
    for g, t in enumerate(grid):
        if t <= 0.0:
            continue
        k = table_kernel(t, times, table)
        out[:, g, :] = np.einsum("rn,rnw->rw", k, weights)
    return out
