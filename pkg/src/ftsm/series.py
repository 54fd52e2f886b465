"""Shot-noise series simulation of TS, fTSm, fSm and the fBm approximation.

A :class:`SeriesDriver` freezes the random sequences (Gamma_i, E_i, U_i,
V_i, T_i) for a block of replications. Every process is a deterministic
function of a driver, so TS, fTSm and fSm paths built from one driver are
coupled term by term.

The series is truncated after ``n_terms`` terms. By default the discarded
tail is replaced by a Gaussian process with its exact conditional mean and
covariance given Gamma_n (see :mod:`ftsm.remainder`); ``remainder="none"``
returns the plain truncated sum.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import rng as _rng
from ._backend import kernel_weighted_sum
from .kernel import KernelParams, Regime, covariance_shape, kernel_primitive, kernel_table
from .measure import InnerMeasure, SeriesConstants, rho1, v_sampling_weights
from .remainder import stable_tail_moments, ts_tail_moments
from .special import riemann_zeta

REMAINDERS = ("gaussian", "none")


@dataclass(frozen=True, eq=False)
class SeriesDriver:
    """Frozen random sequences for replications ``rep_offset .. rep_offset + n_reps - 1``.

    All sequence arrays have shape (n_reps, n_terms).
    """

    gamma_arrivals: np.ndarray
    exp_marks: np.ndarray
    unif_marks: np.ndarray
    v_marks: np.ndarray
    times: np.ndarray
    n_terms: int
    horizon_T: float
    seed: int
    alpha: float
    rho: InnerMeasure
    rep_offset: int = 0
    keys: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_reps(self):
        return self.gamma_arrivals.shape[0]

    def gaussian(self, size):
        """Standard normals of shape (n_reps, size) from each replication's own stream."""
        out = np.empty((self.n_reps, size))
        for r in range(self.n_reps):
            gen = _rng.substream(self.seed, self.rep_offset + r, _rng.GAUSS, key=self.keys[r])
            out[r] = gen.standard_normal(size)
        return out

    @cached_property
    def signs(self):
        return np.sign(self.v_marks)

    @cached_property
    def stable_jumps(self):
        """m(rho) (alpha Gamma_i / T)^(-1/alpha) without sign."""
        m = v_sampling_weights_norm(self.rho, self.alpha)
        return m * (self.alpha * self.gamma_arrivals / self.horizon_T) ** (-1.0 / self.alpha)

    @cached_property
    def marks(self):
        """E_i U_i^(1/alpha) |V_i|."""
        return self.exp_marks * self.unif_marks ** (1.0 / self.alpha) * np.abs(self.v_marks)

    @cached_property
    def _order(self):
        return np.argsort(self.times, axis=1, kind="stable")

    @cached_property
    def sorted_times(self):
        return np.take_along_axis(self.times, self._order, axis=1)

    def sort_terms(self, arr):
        return np.take_along_axis(arr, self._order, axis=1)


def v_sampling_weights_norm(rho, alpha):
    return float(np.sum(rho.weights * np.abs(rho.locations) ** alpha)) ** (1.0 / alpha)


def make_driver(seed, T, n_terms, rho, alpha, n_reps=1, rep_offset=0):
    """Draw the five series sequences for a block of replications.

    Replication ``r`` uses Philox key derived from (seed, r) and one
    counter block per sequence, so any block split gives the same numbers.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    if T <= 0:
        raise ValueError("horizon T must be positive")
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha={alpha} outside (0, 2)")
    atoms = v_sampling_weights(rho, alpha)
    locs = np.array([x for x, _ in atoms])
    cdf = np.cumsum([p for _, p in atoms])
    cdf[-1] = 1.0
    shape = (n_reps, n_terms)
    arrivals = np.empty(shape)
    expo = np.empty(shape)
    unif = np.empty(shape)
    vm = np.empty(shape)
    times = np.empty(shape)
    keys = np.empty((n_reps, 2), dtype=np.uint64)
    for r in range(n_reps):
        key = _rng.replication_key(seed, rep_offset + r)
        keys[r] = key
        arrivals[r] = np.cumsum(_rng.substream(seed, rep_offset + r, _rng.ARRIVALS, key).standard_exponential(n_terms))
        expo[r] = _rng.substream(seed, rep_offset + r, _rng.EXP_MARKS, key).standard_exponential(n_terms)
        unif[r] = _rng.open_unit(_rng.substream(seed, rep_offset + r, _rng.UNIF_MARKS, key), n_terms)
        u = _rng.substream(seed, rep_offset + r, _rng.V_MARKS, key).random(n_terms)
        vm[r] = locs[np.searchsorted(cdf, u, side="right").clip(max=len(locs) - 1)]
        times[r] = T * _rng.open_unit(_rng.substream(seed, rep_offset + r, _rng.TIMES, key), n_terms)
    return SeriesDriver(arrivals, expo, unif, vm, times, int(n_terms), float(T), int(seed), float(alpha), rho,
                        int(rep_offset), keys)


@dataclass
class Path:
    """Sample paths on a common grid; ``values`` has shape (n_reps, len(grid))."""

    grid: np.ndarray
    values: np.ndarray
    kind: str
    params: dict
    seed: int
    rep_offset: int = 0
    flags: dict = field(default_factory=dict)

    @property
    def n_reps(self):
        return self.values.shape[0]

    def single(self):
        """Values of a one-replication path as a 1-D array."""
        if self.n_reps != 1:
            raise ValueError("path holds several replications")
        return self.values[0]


def _check_grid(grid, T):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 0 or grid[-1] > T * (1 + 1e-12):
        raise ValueError(f"grid must lie in [0, {T}]")
    return grid


def _effective(params):
    """(beta, G) with the Levy case pinned to exactly (0, 1/2)."""
    if params.regime is Regime.LEVY:
        return 0.0, 0.5
    return params.beta, params.G


def _k_of_t(params, grid):
    if params.regime is Regime.LEVY:
        return grid.copy()
    return np.array([kernel_primitive(params, t) for t in grid])


def _gauss_field(driver, grid, G):
    """Gaussian paths with covariance R_G(t, s) on the grid, zero at t = 0."""
    pos = grid > 0
    tp = grid[pos]
    cov = covariance_shape(G, tp[:, None], tp[None, :])
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(cov)
        L = vecs * np.sqrt(np.clip(vals, 0.0, None))
    z = driver.gaussian(tp.size)
    out = np.zeros((driver.n_reps, grid.size))
    out[:, pos] = z @ L.T
    return out


def _weighted_sums(driver, params, grid, *jumps):
    if grid.size == 1 and grid[0] >= driver.horizon_T:
        # every time contributes, so sorting buys no early exit
        weights = np.stack(jumps, axis=-1)
        return kernel_weighted_sum(weights, driver.times, grid, kernel_table(params))
    weights = np.stack([driver.sort_terms(j) for j in jumps], axis=-1)
    return kernel_weighted_sum(weights, driver.sorted_times, grid, kernel_table(params))


def _compensator_sum(consts, n, T):
    """sum_{i<=n} m (alpha i / T)^(-1/alpha)."""
    i = np.arange(1, n + 1, dtype=float)
    return consts.m_rho * float(np.sum((consts.alpha * i / T) ** (-1.0 / consts.alpha)))


def tail_bound(driver):
    """Largest possible discarded jump, m(rho) (alpha n / T)^(-1/alpha)."""
    m = v_sampling_weights_norm(driver.rho, driver.alpha)
    return m * (driver.alpha * driver.n_terms / driver.horizon_T) ** (-1.0 / driver.alpha)


def _check_consts(driver, consts):
    consts.check_alpha(driver.alpha)
    if consts.horizon_T != driver.horizon_T:
        raise ValueError("constants and driver use different horizons T")


def _provenance(driver, params, kind, **extra):
    p = {"kind": kind, "alpha": driver.alpha, "T": driver.horizon_T, "n_terms": driver.n_terms,
         "rho": driver.rho.to_dict()}
    if params is not None:
        p["H"] = params.H
    p.update(extra)
    return p


def _flags(driver, params, remainder):
    flags = {"tail_bound": tail_bound(driver), "remainder": remainder}
    if params is not None and params.regime is Regime.ROUGH:
        flags["unbounded_regime"] = True
    return flags


def _clipped_process(driver, params, consts, grid, kind, remainder):
    _check_consts(driver, consts)
    if remainder not in REMAINDERS:
        raise ValueError(f"remainder must be one of {REMAINDERS}")
    T = driver.horizon_T
    grid = _check_grid(grid, T)
    beta, G = _effective(params)
    jumps = np.minimum(driver.stable_jumps, driver.marks) * driver.signs
    values = _weighted_sums(driver, params, grid, jumps)[:, :, 0]
    kt = _k_of_t(params, grid)
    if not consts.symmetric:
        drift = -consts.k_prime * _compensator_sum(consts, driver.n_terms, T) / T + consts.z_T
        values = values + drift * kt
    if remainder == "gaussian":
        mean, var = ts_tail_moments(driver.gamma_arrivals[:, -1], driver.n_terms, driver.rho, consts, T)
        values = values + mean[:, None] * kt + np.sqrt(var)[:, None] * _gauss_field(driver, grid, G)
    return Path(grid, values, kind, _provenance(driver, params if kind != "ts" else None, kind), driver.seed,
                driver.rep_offset, _flags(driver, params, remainder))


def simulate_ts(driver, consts, grid, remainder="gaussian"):
    """TS Levy process X^TS on ``grid`` from the clipped series."""
    params = KernelParams(1.0 / driver.alpha, driver.alpha)
    return _clipped_process(driver, params, consts, grid, "ts", remainder)


def simulate_ftsm(driver, params, consts, grid, remainder="gaussian"):
    """fTSm L^H on ``grid``: the TS series with K(t, T_i) in place of 1(T_i <= t)."""
    if params.alpha != driver.alpha:
        raise ValueError("params.alpha differs from the driver's alpha")
    return _clipped_process(driver, params, consts, grid, "ftsm", remainder)


def simulate_fsm(driver, params, consts, grid, remainder="gaussian"):
    """fSm L^{H,alpha} on ``grid`` from the unclipped stable series."""
    if params.alpha != driver.alpha:
        raise ValueError("params.alpha differs from the driver's alpha")
    _check_consts(driver, consts)
    if driver.alpha == 1.0 and not consts.symmetric:
        raise ValueError("fSm with alpha = 1 requires a symmetric inner measure")
    if remainder not in REMAINDERS:
        raise ValueError(f"remainder must be one of {REMAINDERS}")
    T = driver.horizon_T
    grid = _check_grid(grid, T)
    _, G = _effective(params)
    values = _weighted_sums(driver, params, grid, driver.stable_jumps * driver.signs)[:, :, 0]
    kt = _k_of_t(params, grid)
    alpha = driver.alpha
    if alpha > 1.0 and not consts.symmetric:
        kappa = (alpha / T) ** (-1.0 / alpha)
        drift = consts.k_prime * (consts.m_rho * kappa * riemann_zeta(1.0 / alpha)
                                  - _compensator_sum(consts, driver.n_terms, T)) / T
        values = values + drift * kt
    if remainder == "gaussian":
        mean, var = stable_tail_moments(driver.gamma_arrivals[:, -1], driver.n_terms, consts, T)
        values = values + mean[:, None] * kt + np.sqrt(var)[:, None] * _gauss_field(driver, grid, G)
    return Path(grid, values, "fsm", _provenance(driver, params, "fsm"), driver.seed, driver.rep_offset,
                _flags(driver, params, remainder))


def coupled_short_time_diff(driver, params, consts, h, grid):
    """sum_i [(m (alpha Gamma_i/T)^(-1/alpha) - h^(-1/alpha) E_i U_i^(1/alpha) |V_i|) v 0] sgn(V_i) K(t, T_i).

    The coupled gap between fSm and the rescaled fTSm for symmetric rho; it
    vanishes term by term as h -> 0. Plain truncated series, no tail term.
    """
    _check_consts(driver, consts)
    if not consts.symmetric:
        raise ValueError("the coupled short-time difference is implemented for symmetric rho only")
    if h <= 0:
        raise ValueError("h must be positive")
    grid = _check_grid(grid, driver.horizon_T)
    gap = np.maximum(driver.stable_jumps - h ** (-1.0 / driver.alpha) * driver.marks, 0.0) * driver.signs
    values = _weighted_sums(driver, params, grid, gap)[:, :, 0]
    return Path(grid, values, "coupled_diff", _provenance(driver, params, "coupled_diff", h=h), driver.seed,
                driver.rep_offset, _flags(driver, params, "none"))


def fbm_normalisation(alpha, N, T):
    """(2 alpha N / ((2 + alpha) T))^(-1/2): makes E[B_t^2] = t^2G."""
    return (2.0 * alpha * N / ((2.0 + alpha) * T)) ** -0.5


def simulate_fbm_approx(seed, params, N, grid, n_reps=1, rep_offset=0, T=None):
    """Normalised N-term sum of E_i U_i^(1/alpha) eps_i K(t, T_i) with Rademacher eps_i."""
    grid = np.asarray(grid, dtype=float)
    T = float(grid[-1]) if T is None else float(T)
    grid = _check_grid(grid, T)
    driver = make_driver(seed, T, N, rho1(), params.alpha, n_reps=n_reps, rep_offset=rep_offset)
    weights = driver.exp_marks * driver.unif_marks ** (1.0 / params.alpha) * driver.signs
    values = fbm_normalisation(params.alpha, N, T) * _weighted_sums(driver, params, grid, weights)[:, :, 0]
    return Path(grid, values, "fbm_approx", _provenance(driver, params, "fbm_approx"), int(seed), rep_offset,
                _flags(driver, params, "none"))


def default_workers():
    try:
        return max(1, int(os.environ.get("FTSM_WORKERS", "1")))
    except ValueError:
        return 1


def replicate(fn, n_reps, chunk=1000, workers=None):
    """Run ``fn(rep_offset, count)`` over replication blocks and stack the results.

    Blocks are fixed by ``chunk`` alone, so the output does not depend on
    the number of worker threads.
    """
    workers = default_workers() if workers is None else workers
    blocks = [(s, min(chunk, n_reps - s)) for s in range(0, n_reps, chunk)]
    if workers <= 1 or len(blocks) == 1:
        parts = [fn(s, c) for s, c in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda b: fn(*b), blocks))
    return np.concatenate(parts, axis=0)
