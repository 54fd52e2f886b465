"""Characteristic exponents, marginal characteristic functions and codifference.

Exponent kinds
--------------
phi          Gamma(-a)((1-is)^a - 1 + i a s); (1-is)ln(1-is) + is at a = 1
psi          as phi for a in (1, 2); Gamma(-a)((1-is)^a - 1) for a < 1;
             ln(1+s^2)/2 - s arctan(s) at a = 1
varphi       Gamma(-a) cos(pi a/2) |s|^a (1 - i tan(pi a/2) sgn s); at a = 1
             -(pi/2 |s| + i s ln|s|) + i s
varphi_tilde varphi for a != 1, -(pi/2)|s| at a = 1
vartheta     int_0^inf (e^{ius} - 1 - ius) s^(-a-1) e^(-s) ds, by quadrature

Every CF is returned as exp(exponent) with the exponent computed directly,
so logarithms of CFs never need a branch choice.
"""

import math

import numpy as np

from .kernel import Regime, c_norm, kernel_lp_const, kernel_increment, unit_kernel
from .measure import abs_moment
from .quadrature import gauss_jacobi, gauss_legendre, graded_rule
from .special import gamma_real, principal_power_one_minus_is

KINDS = ("phi", "psi", "varphi", "varphi_tilde", "vartheta")

_SMALL = 0.05
_TAYLOR_TERMS = 14
_THETA_CUTOFF = 40.0  # e^-40 s^(1-a) is below 1e-16 of the integral for all a in (0, 2)


def _check_alpha(alpha):
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha={alpha} outside (0, 2)")


def _power_taylor(s, alpha):
    """(1-is)^a - 1 + i a s as a power series, for small |s|."""
    z = -1j * s
    out = np.zeros(s.shape, dtype=complex)
    coef = alpha
    zk = z
    for k in range(2, _TAYLOR_TERMS + 2):
        coef *= (alpha - k + 1) / k
        zk = zk * z
        out += coef * zk
    return out


def _phi_noninteger(s, alpha):
    out = np.empty(s.shape, dtype=complex)
    small = np.abs(s) < _SMALL
    out[small] = _power_taylor(s[small], alpha)
    sb = s[~small]
    out[~small] = principal_power_one_minus_is(sb, alpha) - 1.0 + 1j * alpha * sb
    return gamma_real(-alpha) * out


def _phi_one(s):
    out = np.empty(s.shape, dtype=complex)
    small = np.abs(s) < _SMALL
    z = -1j * s[small]
    acc = np.zeros(z.shape, dtype=complex)
    zk = z
    for k in range(2, _TAYLOR_TERMS + 2):
        zk = zk * z
        acc += (-1.0) ** k * zk / (k * (k - 1))
    out[small] = acc
    sb = s[~small]
    w = 1.0 - 1j * sb
    out[~small] = w * (0.5 * np.log1p(sb * sb) - 1j * np.arctan(sb)) + 1j * sb
    return out


def _oscillation_factor(z):
    """(e^{iz} - 1 - iz) / z^2, stable for small z."""
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < 1e-2
    zs = z[small]
    out[small] = -0.5 - 1j * zs / 6.0 + zs**2 / 24.0 + 1j * zs**3 / 120.0
    zb = z[~small]
    out[~small] = (np.expm1(1j * zb) - 1j * zb) / zb**2
    return out


def _vartheta(u, alpha, order=20):
    """Quadrature of int_0^inf (e^{ius} - 1 - ius) s^(-a-1) e^-s ds.

    The integrand is s^(1-a) u^2 f(us) e^-s with f smooth, so the first
    panel [0, a0] uses Gauss-Jacobi for the s^(1-a) weight; the rest is cut
    into Gauss-Legendre panels no wider than half an oscillation period.
    """
    u = np.asarray(u, dtype=float)
    flat = u.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    xj, wj = gauss_jacobi(order, 1.0 - alpha)
    xg, wg = gauss_legendre(order)
    mag = np.abs(flat)
    uniq, inverse = np.unique(mag, return_inverse=True)
    vals = np.zeros(uniq.shape, dtype=complex)
    for k, m in enumerate(uniq):
        if m == 0.0:
            continue
        a0 = 1.0 if m <= 2.0 else 2.0 / m
        s = 0.5 * a0 * (1.0 + xj)
        head = (0.5 * a0) ** (2.0 - alpha) * np.sum(wj * m * m * _oscillation_factor(m * s) * np.exp(-s))
        width = 1.0 if m <= math.pi else math.pi / m
        n_pan = int(math.ceil((_THETA_CUTOFF - a0) / width))
        edges = np.linspace(a0, _THETA_CUTOFF, n_pan + 1)
        half = 0.5 * np.diff(edges)
        nodes = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * xg[None, :]
        integrand = (np.expm1(1j * m * nodes) - 1j * m * nodes) * nodes ** (-alpha - 1.0) * np.exp(-nodes)
        vals[k] = head + np.sum(half * (integrand @ wg))
    out = vals[inverse]
    neg = flat < 0
    out[neg] = np.conj(out[neg])
    return out.reshape(u.shape)


def exponent(kind, s, alpha):
    """Characteristic exponent ``kind`` at real ``s`` (scalar or array)."""
    _check_alpha(alpha)
    if kind not in KINDS:
        raise ValueError(f"unknown exponent kind '{kind}', expected one of {KINDS}")
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if kind == "phi":
        out = _phi_one(s) if alpha == 1.0 else _phi_noninteger(s, alpha)
    elif kind == "psi":
        if alpha == 1.0:
            out = (0.5 * np.log1p(s * s) - s * np.arctan(s)).astype(complex)
        elif alpha > 1.0:
            out = _phi_noninteger(s, alpha)
        else:
            out = _phi_noninteger(s, alpha) - 1j * alpha * gamma_real(-alpha) * s
    elif kind in ("varphi", "varphi_tilde"):
        if alpha == 1.0:
            a = np.abs(s)
            if kind == "varphi_tilde":
                out = (-0.5 * math.pi * a).astype(complex)
            else:
                with np.errstate(divide="ignore", invalid="ignore"):
                    log_term = np.where(a > 0, s * np.log(np.where(a > 0, a, 1.0)), 0.0)
                out = -(0.5 * math.pi * a + 1j * log_term) + 1j * s
        else:
            tan = math.tan(0.5 * math.pi * alpha)
            scale = gamma_real(-alpha) * math.cos(0.5 * math.pi * alpha)
            out = scale * np.abs(s) ** alpha * (1.0 - 1j * tan * np.sign(s))
    else:
        out = _vartheta(s, alpha)
    return complex(out[0]) if scalar else out


def _atom_sum(kind, alpha, rho, args):
    """sum_j w_j exponent(kind, x_j * args) for an array of arguments."""
    x, w = rho.locations, rho.weights
    total = np.zeros(np.shape(args), dtype=complex)
    for xj, wj in zip(x, w):
        total += wj * exponent(kind, xj * np.asarray(args), alpha)
    return total


def _kernel_exponent(kind, alpha, rho, params, scale, t):
    """sum_j w_j int_0^t exponent(kind, scale x_j K(t, s)) ds via K(t, tv) = t^beta K(1, v)."""
    if params.regime is Regime.LEVY:
        return t * _atom_sum(kind, alpha, rho, scale)
    rule = graded_rule()
    k1 = unit_kernel(params, rule.v, rule.w)
    vals = _atom_sum(kind, alpha, rho, scale * t**params.beta * k1)
    return t * rule.integrate(vals)


def _cf(expo):
    return complex(np.exp(expo))


def cf_ts_exponent(y, t, rho, alpha):
    if t < 0:
        raise ValueError("t must be nonnegative")
    return t * complex(_atom_sum("phi", alpha, rho, float(y)))


def cf_ts(y, t, rho, alpha):
    """E exp(i y X_t^TS) = exp(t sum_j w_j phi(y x_j))."""
    return _cf(cf_ts_exponent(y, t, rho, alpha))


def cf_ftsm_exponent(y, t, params, rho):
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0 or y == 0:
        return 0j
    return complex(_kernel_exponent("phi", params.alpha, rho, params, float(y), t))


def cf_ftsm(y, t, params, rho):
    """E exp(i y L^H_t) = exp(sum_j w_j int_0^t phi(y x_j K(t, s)) ds)."""
    return _cf(cf_ftsm_exponent(y, t, params, rho))


def _require_symmetric_at_one(alpha, rho):
    if alpha == 1.0 and not rho.is_symmetric:
        raise ValueError("alpha = 1 requires a symmetric inner measure")


def cf_fsm_exponent(y, t, params, rho):
    _require_symmetric_at_one(params.alpha, rho)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0j
    c = kernel_lp_const(params, params.alpha)
    return c * t ** (params.alpha * params.H) * complex(_atom_sum("varphi_tilde", params.alpha, rho, float(y)))


def cf_fsm(y, t, params, rho):
    """E exp(i y L^{H,a}_t) = exp(C_{H,a,a} t^{aH} sum_j w_j varphi_tilde(y x_j))."""
    return _cf(cf_fsm_exponent(y, t, params, rho))


def cf_rescaled_short(y, t, params, rho, h):
    """exp(sum_j w_j int_0^t h psi(y x_j h^(-1/a) K(t, s)) ds); tends to cf_fsm as h -> 0."""
    if h <= 0:
        raise ValueError("h must be positive")
    _require_symmetric_at_one(params.alpha, rho)
    if t == 0 or y == 0:
        return 1.0 + 0j
    scale = float(y) * h ** (-1.0 / params.alpha)
    return _cf(h * _kernel_exponent("psi", params.alpha, rho, params, scale, t))


def cf_rescaled_long(y, params, rho, h):
    """CF of h^(-G) L^H_h: exp(h sum_j w_j int_0^1 vartheta(h^(-1/2) y x_j K(1, s)) ds).

    The factor h comes from s = h v in int_0^h ds; it is what makes the
    limit h -> inf equal exp(-y^2 Gamma(2-a) int x^2 rho / 2).
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if y == 0:
        return 1.0 + 0j
    return _cf(h * _kernel_exponent("vartheta", params.alpha, rho, params, float(y) * h**-0.5, 1.0))


def _increment_on_rule(params, t, rule):
    """K(t+1, s) - K(t, s) at s = rule.v."""
    return kernel_increment(params, t, 1.0, rule.v)


def codifference(theta1, theta2, t, params, rho):
    """Codifference of X = L_{t+1} - L_t and Y = L_1 - L_0.

    Only s in (0, 1) contributes: elsewhere K(1, s) = 0 and the joint and
    marginal exponents cancel.
    """
    if t < 1:
        raise ValueError("codifference needs t >= 1")
    if theta1 == 0 or theta2 == 0:
        return 0j
    alpha = params.alpha
    rule = graded_rule()
    if params.regime is Regime.LEVY:
        return 0j  # independent increments
    a = theta1 * _increment_on_rule(params, t, rule)
    b = theta2 * unit_kernel(params, rule.v, rule.w)
    joint = _atom_sum("phi", alpha, rho, a + b)
    sep = _atom_sum("phi", alpha, rho, a) + _atom_sum("phi", alpha, rho, b)
    return complex(-rule.integrate(joint - sep))


def codifference_asymptotic_constant(theta1, theta2, params, rho):
    """C(theta1, theta2) with codifference(theta1, theta2, t) ~ C t^(2(G-1)) as t -> inf.

    C = -i pi c beta theta1 / (Gamma(a) sin(pi a))
        * sum_j w_j x_j int_0^1 ((1 - i x_j theta2 K(1, s))^(a-1) - 1) s^-beta ds.
    """
    alpha = params.alpha
    if alpha == 1.0:
        raise ValueError("the asymptotic constant is not available for alpha = 1")
    if params.regime is Regime.LEVY:
        return 0j
    if theta2 == 0 or theta1 == 0:
        return 0j
    beta = params.beta
    rule = graded_rule()
    k1 = unit_kernel(params, rule.v, rule.w)
    total = np.zeros(rule.size, dtype=complex)
    for x, w in zip(rho.locations, rho.weights):
        total += w * x * (principal_power_one_minus_is(x * theta2 * k1, alpha - 1.0) - 1.0)
    integral = rule.integrate(total * rule.v**-beta)
    pref = -1j * math.pi * c_norm(params) * beta * theta1 / (gamma_real(alpha) * math.sin(math.pi * alpha))
    return complex(pref * integral)


def stable_scale(rho, alpha):
    """sigma_rho = -Gamma(-a) cos(pi a / 2) int |x|^a rho(dx)."""
    return -gamma_real(-alpha) * math.cos(0.5 * math.pi * alpha) * abs_moment(rho, alpha)


def covariation_tau(t, s, params, rho):
    """||L_t||^a + ||L_s||^a - ||L_t - L_s||^a for symmetric alpha-stable fSm values."""
    alpha = params.alpha
    if not 1.0 < alpha < 2.0:
        raise ValueError("covariation_tau needs alpha in (1, 2)")
    if not rho.is_symmetric:
        raise ValueError("covariation_tau needs a symmetric inner measure")
    if not 0 <= s <= t:
        raise ValueError("need 0 <= s <= t")
    c = kernel_lp_const(params, alpha)
    aH = alpha * params.H
    return stable_scale(rho, alpha) * c * (t**aH + s**aH - (t - s) ** aH)
