"""Finite discrete inner measures and the scalar constants derived from them."""

import math
import re
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .special import EULER_GAMMA, gamma_real, riemann_zeta

_SYM_TOL = 1e-12


def _check_alpha(alpha):
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha={alpha} outside (0, 2)")


class InnerMeasure:
    """Finite discrete measure sum_j w_j delta_{x_j} on R minus {0}.

    Parameters
    ----------
    atoms : sequence of (x, w)
        Nonzero, distinct locations with strictly positive weights.
    """

    def __init__(self, atoms: Sequence[Tuple[float, float]]):
        atoms = [(float(x), float(w)) for x, w in atoms]
        if not atoms:
            raise ValueError("an inner measure needs at least one atom")
        for x, w in atoms:
            if x == 0.0 or not math.isfinite(x):
                raise ValueError(f"atom location {x} must be finite and nonzero")
            if not (w > 0.0 and math.isfinite(w)):
                raise ValueError(f"atom weight {w} must be finite and positive")
        atoms.sort()
        xs = [x for x, _ in atoms]
        if len(set(xs)) != len(xs):
            raise ValueError("atom locations must be distinct")
        self._x = np.array(xs)
        self._w = np.array([w for _, w in atoms])
        self._x.setflags(write=False)
        self._w.setflags(write=False)
        self._symmetric = self._detect_symmetry()

    @property
    def locations(self):
        return self._x

    @property
    def weights(self):
        return self._w

    @property
    def atoms(self):
        return list(zip(self._x.tolist(), self._w.tolist()))

    def __len__(self):
        return self._x.size

    def __repr__(self):
        return f"InnerMeasure({self.atoms})"

    def __eq__(self, other):
        return isinstance(other, InnerMeasure) and self.atoms == other.atoms

    def __hash__(self):
        return hash(tuple(self.atoms))

    def _detect_symmetry(self):
        x, w = self._x, self._w
        if x.size % 2:
            return False
        # sorted ascending, so the mirror image of x[k] must sit at x[-1-k]
        if not np.array_equal(x, -x[::-1]):
            return False
        return bool(np.all(np.abs(w - w[::-1]) <= _SYM_TOL * np.maximum(w, w[::-1])))

    @property
    def is_symmetric(self):
        return self._symmetric

    def scaled(self, c):
        """The measure c * rho."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return InnerMeasure([(x, c * w) for x, w in self.atoms])

    def to_dict(self):
        return [{"x": x, "w": w} for x, w in self.atoms]


def rho1():
    """delta_{-1} + delta_{1}."""
    return InnerMeasure([(-1.0, 1.0), (1.0, 1.0)])


def rho2(alpha):
    """0.5^-alpha delta_{-0.5} + delta_{1}; |x|^alpha rho puts mass 1 on each atom."""
    _check_alpha(alpha)
    return InnerMeasure([(-0.5, 0.5**-alpha), (1.0, 1.0)])


_ATOM_RE = re.compile(r"^\s*([^:]+):([^:]+)\s*$")


def parse_measure(text, alpha=None):
    """Parse 'rho1', 'rho2', 'rho2(1.6)' or an atom list 'x1:w1,x2:w2'."""
    text = text.strip()
    if text == "rho1":
        return rho1()
    m = re.fullmatch(r"rho2(?:\(([^)]*)\))?", text)
    if m:
        a = float(m.group(1)) if m.group(1) else alpha
        if a is None:
            raise ValueError("rho2 needs alpha")
        return rho2(a)
    atoms = []
    for part in text.split(","):
        am = _ATOM_RE.match(part)
        if not am:
            raise ValueError(f"cannot parse atom '{part}', expected x:w")
        atoms.append((float(am.group(1)), float(am.group(2))))
    return InnerMeasure(atoms)


def abs_moment(rho, p):
    """sum_j w_j |x_j|^p."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return float(np.sum(rho.weights * np.abs(rho.locations) ** p))


def signed_weighted_moment(rho, p=1.0, log=False):
    """sum_j w_j x_j |x_j|^(p-1), or sum_j w_j x_j ln|x_j| when ``log``."""
    x, w = rho.locations, rho.weights
    if rho.is_symmetric:
        return 0.0
    if log:
        return float(np.sum(w * x * np.log(np.abs(x))))
    return float(np.sum(w * x * np.abs(x) ** (p - 1.0)))


@dataclass(frozen=True)
class SeriesConstants:
    m_rho: float
    k_prime: float
    z_T: float
    alpha: float
    horizon_T: float
    symmetric: bool

    def check_alpha(self, alpha):
        if alpha != self.alpha:
            raise ValueError(f"constants were built for alpha={self.alpha}, not {alpha}")


def series_constants(rho, alpha, T):
    """m(rho), k' and the centring drift z_T of the shot-noise series.

    For alpha != 1 the drift is m kappa zeta(1/alpha) k' / T - Gamma(1-alpha) int x rho,
    with kappa = (alpha/T)^(-1/alpha); for alpha = 1 it is
    (ln(m T) + 2 gamma) int x rho - int x ln|x| rho.
    """
    _check_alpha(alpha)
    if T <= 0:
        raise ValueError("horizon T must be positive")
    m_alpha = abs_moment(rho, alpha)
    m = m_alpha ** (1.0 / alpha)
    if rho.is_symmetric:
        return SeriesConstants(m, 0.0, 0.0, alpha, float(T), True)
    k_prime = signed_weighted_moment(rho, alpha) / m_alpha
    first = signed_weighted_moment(rho, 1.0)
    if alpha == 1.0:
        z = (math.log(m * T) + 2.0 * EULER_GAMMA) * first - signed_weighted_moment(rho, log=True)
    else:
        kappa = (alpha / T) ** (-1.0 / alpha)
        z = m * kappa * riemann_zeta(1.0 / alpha) * k_prime / T - gamma_real(1.0 - alpha) * first
    return SeriesConstants(m, k_prime, z, alpha, float(T), False)


def short_time_drift(rho, alpha, h):
    """(b_{h,alpha}, b): the drift removed in the short-time limit.

    b_{h,alpha} is h Gamma(1-alpha) int x rho for alpha < 1, -(1 + ln h) int x rho
    for alpha = 1 and 0 for alpha > 1. The h-free constant b is
    Gamma(1-alpha) int x rho for alpha < 1 and 0 otherwise (alpha = 1 limits
    assume a symmetric rho).
    """
    _check_alpha(alpha)
    if h <= 0:
        raise ValueError("h must be positive")
    first = signed_weighted_moment(rho, 1.0)
    if alpha > 1.0 or first == 0.0:
        return 0.0, 0.0
    if alpha == 1.0:
        return -(1.0 + math.log(h)) * first, 0.0
    b = gamma_real(1.0 - alpha) * first
    return h * b, b


def ts_variance(rho, alpha):
    """Gamma(2 - alpha) int x^2 rho(dx) = E[(X_1^TS)^2]."""
    _check_alpha(alpha)
    return gamma_real(2.0 - alpha) * abs_moment(rho, 2.0)


def v_sampling_weights(rho, alpha):
    """Atoms with probabilities w_j |x_j|^alpha / m(rho)^alpha."""
    _check_alpha(alpha)
    mass = rho.weights * np.abs(rho.locations) ** alpha
    probs = mass / mass.sum()
    return list(zip(rho.locations.tolist(), probs.tolist()))
