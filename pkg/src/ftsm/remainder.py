"""Conditional moments of the discarded series tail.

After n terms with Gamma_n = gamma, the remaining points of the series form
a unit-rate Poisson process on (gamma, inf) independent of the kept terms.
Its contribution to the path is replaced by a Gaussian process with the
exact conditional mean (a multiple of k_t) and covariance (a multiple of
the fBm covariance R_G(t, s) / T). This keeps first and second moments of
the truncated series exact at any n, while the neglected higher cumulants
vanish with the size of the largest discarded jump.

With Y = m a(gamma), a(r) = (alpha r / T)^(-1/alpha), and Z_j = Y / |x_j|:

    variance rate  sum_j w_j x_j^2 F2(Z_j),  F2(Z) = 2 alpha int_0^1 v phi2(Z/v) dv
    mean rate      m k' A(gamma, n) / T - sum_j w_j x_j F1(Z_j),
                   F1(Z) = alpha int_0^1 psi1(Z/v) dv

where phi2(X) = int_0^X x^(-alpha-1) (1 - e^-x (1 + x)) dx,
psi1(X) = int_0^X x^(-alpha-1) (x - 1 + e^-x) dx, and
A(gamma, n) = int_gamma^inf a(r) dr - sum_{i>n} a(i) (regularised).
"""

import math
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import exp1, gammainc

from .quadrature import graded_rule
from .special import EULER_GAMMA, gamma_real, riemann_zeta

_SERIES_CUT = 0.5
_SERIES_TERMS = 24


def _series(X, alpha, weight):
    X = np.asarray(X, dtype=float)
    out = np.zeros_like(X)
    fact = 1.0
    for k in range(2, _SERIES_TERMS + 2):
        fact *= k
        out += (-1.0) ** k * weight(k) * X ** (k - alpha) / (fact * (k - alpha))
    return out


def phi2(X, alpha):
    """int_0^X x^(-alpha-1) (1 - e^-x (1 + x)) dx."""
    X = np.asarray(X, dtype=float)
    out = np.empty_like(X)
    small = X < _SERIES_CUT
    out[small] = _series(X[small], alpha, lambda k: k - 1.0)
    Xb = X[~small]
    h = -np.expm1(-Xb) - Xb * np.exp(-Xb)
    low = gammainc(2.0 - alpha, Xb) * gamma_real(2.0 - alpha)
    out[~small] = (low - Xb**-alpha * h) / alpha
    return out


def psi1(X, alpha):
    """int_0^X x^(-alpha-1) (x - 1 + e^-x) dx."""
    X = np.asarray(X, dtype=float)
    out = np.empty_like(X)
    small = X < _SERIES_CUT
    out[small] = _series(X[small], alpha, lambda k: 1.0)
    Xb = X[~small]
    g = Xb + np.expm1(-Xb)
    if alpha == 1.0:
        out[~small] = -g / Xb + exp1(Xb) + np.log(Xb) + EULER_GAMMA
    else:
        low = gammainc(2.0 - alpha, Xb) * gamma_real(2.0 - alpha)
        inner = (Xb ** (1.0 - alpha) * -np.expm1(-Xb) - low) / (1.0 - alpha)
        out[~small] = (inner - Xb**-alpha * g) / alpha
    return out


_LOGZ_MIN, _LOGZ_MAX, _PER_DECADE = -10.0, 10.0, 40


class _LogLogTable:
    """Spline of log F against log Z with power-law continuation at both ends."""

    def __init__(self, logz, logf):
        self.lo, self.hi = logz[0], logz[-1]
        self.spline = CubicSpline(logz, logf)
        d = self.spline(logz[[0, -1]], 1)
        self.slope_lo, self.slope_hi = float(d[0]), float(d[1])
        self.f_lo, self.f_hi = float(logf[0]), float(logf[-1])

    def __call__(self, Z):
        lz = np.log(np.asarray(Z, dtype=float))
        out = self.spline(np.clip(lz, self.lo, self.hi))
        out = np.where(lz < self.lo, self.f_lo + self.slope_lo * (lz - self.lo), out)
        out = np.where(lz > self.hi, self.f_hi + self.slope_hi * (lz - self.hi), out)
        return np.exp(out)


@lru_cache(maxsize=32)
def _tables(alpha):
    rule = graded_rule()
    n = int((_LOGZ_MAX - _LOGZ_MIN) * _PER_DECADE) + 1
    logz = np.linspace(_LOGZ_MIN, _LOGZ_MAX, n) * math.log(10.0)
    Z = np.exp(logz)
    X = Z[:, None] / rule.v[None, :]
    f2 = 2.0 * alpha * rule.integrate(rule.v[None, :] * phi2(X, alpha))
    f1 = alpha * rule.integrate(psi1(X, alpha))
    return _LogLogTable(logz, np.log(f2)), _LogLogTable(logz, np.log(f1))


_Z_TABLE_MAX = 10.0**_LOGZ_MAX


def tail_variance_factor(Z, alpha):
    """F2(Z); tends to Gamma(2 - alpha) as Z -> inf.

    Beyond the table, F2(Z) = Gamma(2 - alpha) - 2 Z^-alpha / (alpha + 2)
    up to terms of order e^-Z.
    """
    Z = np.asarray(Z, dtype=float)
    big = Z > _Z_TABLE_MAX
    Zb = np.where(big, Z, _Z_TABLE_MAX)
    far = gamma_real(2.0 - alpha) - 2.0 * Zb**-alpha / (alpha + 2.0)
    return np.where(big, far, _tables(alpha)[0](np.where(big, 1.0, Z)))


def tail_mean_factor(Z, alpha):
    """F1(Z).

    Beyond the table, F1(Z) = alpha psi1(Z) + Z^(1 - alpha) - alpha Z^-alpha / (alpha + 1)
    up to terms of order e^-Z.
    """
    Z = np.asarray(Z, dtype=float)
    big = Z > _Z_TABLE_MAX
    Zb = np.where(big, Z, _Z_TABLE_MAX)
    far = alpha * psi1(Zb, alpha) + Zb ** (1.0 - alpha) - alpha * Zb**-alpha / (alpha + 1.0)
    return np.where(big, far, _tables(alpha)[1](np.where(big, 1.0, Z)))


def drift_gap(gamma, n, alpha, T):
    """A(gamma, n) = int_gamma^inf a(r) dr - sum_{i>n} a(i), a(r) = (alpha r/T)^(-1/alpha).

    Both pieces diverge for alpha > 1; the difference is taken through the
    zeta continuation, sum_{i>n} i^-s = zeta(s) - sum_{i<=n} i^-s.
    """
    gamma = np.asarray(gamma, dtype=float)
    s = 1.0 / alpha
    kappa = (alpha / T) ** -s
    if alpha == 1.0:
        harmonic = float(np.sum(1.0 / np.arange(1, n + 1)))
        return kappa * (-np.log(gamma) + harmonic - EULER_GAMMA)
    partial = float(np.sum(np.arange(1, n + 1, dtype=float) ** -s))
    return kappa * (-(gamma ** (1.0 - s)) / (1.0 - s) - riemann_zeta(s) + partial)


def ts_tail_moments(gamma, n, rho, consts, T):
    """(mean rate, variance rate) of the clipped tail, per replication.

    The tail mean at time t is ``mean * k_t``; the covariance is
    ``var * R_G(t, s)``.
    """
    alpha = consts.alpha
    gamma = np.asarray(gamma, dtype=float)
    Y = consts.m_rho * (alpha * gamma / T) ** (-1.0 / alpha)
    x, w = rho.locations, rho.weights
    b = np.abs(x)
    Z = Y[..., None] / b
    var = np.sum(w * b**2 * tail_variance_factor(Z, alpha), axis=-1)
    if consts.symmetric:
        mean = np.zeros_like(gamma)
    else:
        clip = np.sum(w * x * tail_mean_factor(Z, alpha), axis=-1)
        mean = consts.m_rho * consts.k_prime * drift_gap(gamma, n, alpha, T) / T - clip
    return mean, var


def stable_tail_moments(gamma, n, consts, T):
    """(mean rate, variance rate) of the unclipped (stable) tail."""
    alpha = consts.alpha
    s = 1.0 / alpha
    kappa = (alpha / T) ** -s
    m = consts.m_rho
    gamma = np.asarray(gamma, dtype=float)
    var = m**2 * kappa**2 * gamma ** (1.0 - 2.0 * s) / ((2.0 * s - 1.0) * T)
    if consts.symmetric or consts.k_prime == 0.0:
        mean = np.zeros_like(gamma)
    elif alpha > 1.0:
        mean = m * consts.k_prime * drift_gap(gamma, n, alpha, T) / T
    else:
        mean = m * consts.k_prime * kappa * gamma ** (1.0 - s) / ((s - 1.0) * T)
    return mean, var
