"""Volterra kernel K_{H,alpha}(t, s) and the constants derived from it.

Notation: beta = H - 1/alpha, G = beta + 1/2. For beta > 0 (long memory)
the kernel is

    K(t, s) = c beta s^-beta  int_s^t (u - s)^(beta - 1) u^beta du,

for beta < 0 (rough) the two-term form

    K(t, s) = c [ (t/s)^beta (t - s)^beta
                  - beta s^-beta int_s^t u^(beta - 1) (u - s)^beta du ],

and beta = 0 gives the indicator of [0, t]. Inner integrals are computed
as int_0^L d^a (s + d)^p dd with a Gauss-Jacobi panel absorbing the d^a
endpoint singularity followed by geometrically growing Gauss-Legendre
panels, so accuracy does not degrade as s -> 0.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import gauss_jacobi, gauss_legendre, graded_rule
from .special import gamma_real

_LEVY_TOL = 1e-8
_ORDER = 14


class Regime(str, Enum):
    LONG_MEMORY = "long_memory"
    LEVY = "levy"
    ROUGH = "rough"


@dataclass(frozen=True)
class KernelParams:
    """Admissible (H, alpha) pair: alpha in (0, 2), |H - 1/alpha| < 1/2."""

    H: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha={self.alpha} outside (0, 2)")
        lo, hi = 1.0 / self.alpha - 0.5, 1.0 / self.alpha + 0.5
        if not lo < self.H < hi:
            raise ValueError(f"H={self.H} outside (1/alpha-1/2, 1/alpha+1/2) = ({lo:.6g}, {hi:.6g})")

    @property
    def beta(self):
        return self.H - 1.0 / self.alpha

    @property
    def G(self):
        return self.beta + 0.5

    @property
    def regime(self):
        b = self.beta
        if abs(b) < _LEVY_TOL:
            return Regime.LEVY
        return Regime.LONG_MEMORY if b > 0 else Regime.ROUGH


def g_exponent(params):
    return params.G


def _c_norm_from_G(G):
    # G(1-2G)Gamma(1/2-G) == 2G Gamma(3/2-G); the right side has no 0*inf at G=1/2
    radicand = 2.0 * G * gamma_real(1.5 - G) / (gamma_real(2.0 - 2.0 * G) * gamma_real(G + 0.5))
    return math.sqrt(radicand)


def c_norm(params):
    """Normalising constant c_{H,alpha}; undefined at H = 1/alpha."""
    if params.regime is Regime.LEVY:
        raise ValueError("c_norm is not used at H = 1/alpha; the kernel is the indicator of [0, t]")
    return _c_norm_from_G(params.G)


def lp_integrable(params, p):
    if p <= 0:
        raise ValueError("p must be positive")
    inv = 1.0 / params.alpha
    return inv - 1.0 / p < params.H < inv + 1.0 / p


def _geometric_panels(f, s, L, d1, order=_ORDER):
    """Sum of Gauss-Legendre panels [d1, 4 d1], [4 d1, 16 d1], ... clipped at L."""
    x, w = gauss_legendre(order)
    total = np.zeros_like(s)
    lo = d1.copy()
    active = lo < L
    while np.any(active):
        idx = np.nonzero(active)[0]
        l = lo[idx]
        h = np.minimum(4.0 * l, L[idx])
        half = 0.5 * (h - l)
        d = 0.5 * (h + l)[:, None] + half[:, None] * x[None, :]
        total[idx] += half * (f(d, s[idx][:, None]) @ w)
        lo[idx] = h
        active = lo < L
    return total


def _power_integral(s, L, a, p):
    """int_0^L d^a (s + d)^p dd for s > 0, L > 0, a > -1 (vectorised)."""
    d1 = np.minimum(s, L)
    xj, wj = gauss_jacobi(_ORDER, a)
    nodes = s[:, None] + d1[:, None] * (0.5 * (1.0 + xj))[None, :]
    first = (0.5 * d1) ** (a + 1.0) * (nodes**p @ wj)
    rest = _geometric_panels(lambda d, ss: d**a * (ss + d) ** p, s, L, d1)
    return first + rest


def _kernel_interior(beta, c, s, L):
    """K(s + L, s) for s > 0, L > 0, beta != 0; arrays of equal shape."""
    s = np.asarray(s, dtype=float).ravel()
    L = np.asarray(L, dtype=float).ravel()
    if beta > 0:
        return c * beta * s**-beta * _power_integral(s, L, beta - 1.0, beta)
    t = s + L
    first = (t / s) ** beta * L**beta
    second = beta * s**-beta * _power_integral(s, L, beta, beta - 1.0)
    return c * (first - second)


def kernel_eval(params, t, s):
    """K_{H,alpha}(t, s); +inf where the kernel diverges (s = 0, or s = t when rough)."""
    t_arr, s_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    if np.any(t_arr <= 0):
        raise ValueError("kernel_eval needs t > 0")
    out = np.zeros(t_arr.shape)
    inside = (s_arr >= 0) & (s_arr <= t_arr)
    regime = params.regime
    if regime is Regime.LEVY:
        out[inside] = 1.0
    else:
        interior = (s_arr > 0) & (s_arr < t_arr)
        out[s_arr == 0] = math.inf
        if regime is Regime.ROUGH:
            out[(s_arr == t_arr)] = math.inf
        if np.any(interior):
            ss = s_arr[interior]
            out[interior] = _kernel_interior(params.beta, c_norm(params), ss, t_arr[interior] - ss)
    if out.ndim == 0:
        return float(out)
    return out


def unit_kernel(params, v, w=None):
    """K(1, v) with w = 1 - v supplied separately for accuracy near v = 1."""
    v = np.asarray(v, dtype=float)
    w = 1.0 - v if w is None else np.asarray(w, dtype=float)
    if params.regime is Regime.LEVY:
        return np.ones_like(v)
    return _kernel_interior(params.beta, c_norm(params), v, w).reshape(v.shape)


@lru_cache(maxsize=256)
def _unit_kernel_on_rule(params):
    rule = graded_rule()
    return unit_kernel(params, rule.v, rule.w)


def kernel_lp_const(params, p):
    """C_{H,alpha,p} = int_0^1 K(1, v)^p dv."""
    if params.regime is Regime.LEVY:
        return 1.0
    if not lp_integrable(params, p):
        raise ValueError(f"K(t, .) is not in L^{p} for H={params.H}, alpha={params.alpha}")
    return float(graded_rule().integrate(_unit_kernel_on_rule(params) ** p))


def kernel_lp_integral(params, t, p):
    """int_0^t K(t, s)^p ds evaluated directly in s (no use of the scaling law)."""
    if params.regime is Regime.LEVY:
        return float(t)
    rule = graded_rule()
    vals = _kernel_interior(params.beta, c_norm(params), t * rule.v, t * rule.w)
    return float(t * rule.integrate(vals**p))


def kernel_primitive(params, t):
    """k_t = int_0^t K(t, s) ds = C_{H,alpha,1} t^(H - 1/alpha + 1)."""
    if t == 0:
        return 0.0
    return kernel_lp_const(params, 1.0) * t ** (params.beta + 1.0)


def covariance_shape(G, t, s):
    """(t^2G + s^2G - |t - s|^2G) / 2."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    return 0.5 * (t ** (2 * G) + s ** (2 * G) - np.abs(t - s) ** (2 * G))


def inner_product(params, t, s):
    """Quadrature of int_0^{t^s} K(t, u) K(s, u) du."""
    if t <= 0 or s <= 0:
        raise ValueError("inner_product needs t, s > 0")
    m = min(t, s)
    if params.regime is Regime.LEVY:
        return float(m)
    rule = graded_rule()
    c = c_norm(params)
    u = m * rule.v
    near_top = m * rule.w

    def at(T):
        L = near_top if T == m else T - u
        return _kernel_interior(params.beta, c, u, L)

    return float(m * rule.integrate(at(t) * at(s)))


def regularized_kernel(params, n, eps, t, s):
    """(K^{n,eps}(t, s), d/dt K^n(t, s)) for the long-memory regime."""
    if params.regime is not Regime.LONG_MEMORY:
        raise ValueError("the regularised kernel is defined for H > 1/alpha only")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not 0 < s <= t:
        return (0.0 + eps if 0 <= s <= t else 0.0), 0.0
    beta = params.beta
    c = c_norm(params)
    sa = np.array([float(s)])
    L = np.array([float(t - s)])
    shift = 1.0 / n
    if L[0] > 0:
        d1 = np.minimum(np.minimum(sa, shift), L)
        x, w = gauss_legendre(_ORDER)
        d = 0.5 * d1[0] * (1.0 + x)
        first = 0.5 * d1[0] * np.sum(w * (d + shift) ** (beta - 1.0) * (s + d) ** beta)
        rest = _geometric_panels(lambda d, ss: (d + shift) ** (beta - 1.0) * (ss + d) ** beta, sa, L, d1)[0]
        value = c * beta * s**-beta * (first + rest)
    else:
        value = 0.0
    deriv = c * beta * (t + shift - s) ** (beta - 1.0) * (t / s) ** beta
    return float(value + eps), float(deriv)


def kernel_increment(params, t, dt, s):
    """K(t + dt, s) - K(t, s) for 0 < s < t + dt.

    Where t - s >= dt the increment is computed as int_t^{t+dt} dK/du du,
    which avoids cancellation when t >> dt; closer to the diagonal the
    direct difference is used.
    """
    s = np.asarray(s, dtype=float)
    if params.regime is Regime.LEVY:
        return np.where((s > t) & (s <= t + dt), 1.0, 0.0)
    beta = params.beta
    out = np.empty(s.shape)
    far = (t - s) >= dt
    if np.any(far):
        sf = s[far]
        x, w = gauss_legendre(32)
        u = t + 0.5 * dt * (1.0 + x)
        integrand = (u[None, :] - sf[:, None]) ** (beta - 1.0) * (u[None, :] / sf[:, None]) ** beta
        out[far] = c_norm(params) * beta * 0.5 * dt * (integrand @ w)
    near = ~far
    if np.any(near):
        sn = s[near]
        k0 = np.where(sn < t, kernel_eval(params, t, np.minimum(sn, t)), 0.0)
        out[near] = kernel_eval(params, t + dt, sn) - k0
    return out


# -- interpolation table for the hot path ---------------------------------

_XI_MIN, _XI_MAX, _XI_STEP = -45.0, 45.0, 0.01


@dataclass(frozen=True)
class KernelTable:
    """Cubic spline of log K(1, v) in xi = log(v / (1 - v)).

    log K is asymptotically linear in xi at both ends (K ~ v^-beta or v^beta
    near 0, (1 - v)^beta near 1), so the spline is accurate over the whole
    table and extrapolates linearly outside it.
    """

    beta: float
    regime: int  # 0 levy, 1 long memory, 2 rough
    xi0: float
    inv_step: float
    coef: np.ndarray  # (n_intervals, 4), highest power first
    # linear continuation of log K outside the table: xi_end, value/slope at both ends
    xi_end: float = 0.0
    left_val: float = 0.0
    left_slope: float = 0.0
    right_val: float = 0.0
    right_slope: float = 0.0


@lru_cache(maxsize=64)
def kernel_table(params):
    regime = {Regime.LEVY: 0, Regime.LONG_MEMORY: 1, Regime.ROUGH: 2}[params.regime]
    if regime == 0:
        return KernelTable(0.0, 0, 0.0, 1.0, np.zeros((1, 4)))
    n = int(round((_XI_MAX - _XI_MIN) / _XI_STEP)) + 1
    xi = np.linspace(_XI_MIN, _XI_MAX, n)
    v = 1.0 / (1.0 + np.exp(-xi))
    w = 1.0 / (1.0 + np.exp(xi))
    logk = np.log(unit_kernel(params, v, w))
    spline = CubicSpline(xi, logk)
    coef = np.ascontiguousarray(spline.c.T)
    slope = spline(xi[[0, -1]], 1)
    return KernelTable(
        params.beta, regime, _XI_MIN, 1.0 / _XI_STEP, coef,
        xi_end=float(xi[-1]), left_val=float(logk[0]), left_slope=float(slope[0]),
        right_val=float(logk[-1]), right_slope=float(slope[1]),
    )
