"""Fixed quadrature rules for integrands with algebraic endpoint behaviour."""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = roots_legendre(n)
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi(n, b):
    """Nodes/weights on [-1, 1] for the weight (1 + x)^b."""
    x, w = roots_jacobi(n, 0.0, b)
    return x, w


class GradedRule:
    """Composite Gauss-Legendre rule on (0, 1) graded geometrically to both ends.

    Panels are [2^-(k+1), 2^-k] for k = 1..levels on the left and their
    mirror images on the right. The leftover pieces (0, eps) and
    (1 - eps, 1) are estimated from a local power law fitted to the
    integrand at eps and eps/2, which is exact for g(v) ~ C v^q.

    Both ``v`` and ``w = 1 - v`` are stored so integrands that are
    singular at 1 can be evaluated without cancellation.
    """

    def __init__(self, levels=40, order=10):
        x, wts = gauss_legendre(order)
        lo = 2.0 ** -np.arange(2, levels + 2)
        hi = 2.0 * lo
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        left = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        lw = (half[:, None] * wts[None, :]).ravel()
        eps = lo[-1]
        self.eps = eps
        self.levels = levels
        # left panels, right panels (mirrored), then 4 probe points
        self.v = np.concatenate([left, 1.0 - left, [eps, eps / 2, 1.0 - eps, 1.0 - eps / 2]])
        self.w = np.concatenate([1.0 - left, left, [1.0 - eps, 1.0 - eps / 2, eps, eps / 2]])
        self.weights = np.concatenate([lw, lw])
        self.n_body = self.weights.size

    @property
    def size(self):
        return self.v.size

    def _tail(self, g_eps, g_half):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = np.asarray(g_eps, dtype=complex) / np.asarray(g_half, dtype=complex)
            q = np.log(ratio) / np.log(2.0)
            tail = g_eps * self.eps / (1.0 + q)
        small = (np.abs(g_eps) == 0.0) | ~np.isfinite(tail)
        tail = np.where(small, 0.0, tail)
        return tail

    def integrate(self, values):
        """Integrate sampled values (shape (..., size)) over (0, 1)."""
        values = np.asarray(values)
        body = values[..., : self.n_body] @ self.weights
        nb = self.n_body
        left = self._tail(values[..., nb], values[..., nb + 1])
        right = self._tail(values[..., nb + 2], values[..., nb + 3])
        out = body + left + right
        if not np.iscomplexobj(values):
            out = np.real(out)
        return out


@lru_cache(maxsize=None)
def graded_rule(levels=40, order=10):
    return GradedRule(levels, order)
