"""Monte Carlo and closed-form verification checks.

Each check returns a :class:`VerificationReport`. Theoretical values always
come from closed forms in :mod:`ftsm.kernel`, :mod:`ftsm.measure` and
:mod:`ftsm.charfn`, never from the sample being judged. Standard errors come
from replication-level variation: every estimator is a smooth function of
per-replication statistics and its error is propagated through the
influence function.

Replications are stacked in index order and reduced with a pairwise tree
sum, so estimates are bit-identical for any number of worker threads.
"""

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import norm

from . import _backend
from .charfn import cf_fsm, cf_ftsm, cf_ts
from .kernel import KernelParams, Regime, covariance_shape, kernel_lp_const, lp_integrable
from .measure import abs_moment, series_constants, ts_variance
from .series import (
    make_driver,
    replicate,
    simulate_fsm,
    simulate_ftsm,
    simulate_ts,
    v_sampling_weights_norm,
)
from .special import gamma_real

DEFAULT_THRESHOLD = 4.0
MIN_TERMS = 500
CLIP_FRACTION = 0.25
_CHUNK_ELEMENTS = 1_000_000
_BOOTSTRAP_BELOW = 5000
SUITES = ("covariance", "qv", "lrd", "gauss", "cf", "holder")


@dataclass
class VerificationReport:
    """Outcome of one statistical or deterministic check.

    Without a ``tolerance`` the check passes iff ``|z_score| <= threshold``.
    With one it passes iff ``|estimate - theoretical| <= tolerance``. In both
    cases any sub-statistics listed in ``details["gates"]`` must pass too.
    """

    name: str
    theoretical: float
    estimate: float
    std_error: float
    z_score: float
    passed: bool
    n_reps: int
    runtime_s: float
    threshold: float = DEFAULT_THRESHOLD
    tolerance: Optional[float] = None
    provenance: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def _z(estimate, theoretical, se):
    diff = estimate - theoretical
    if se > 0:
        return float(diff / se)
    return 0.0 if diff == 0 else math.copysign(math.inf, diff)


def _provenance(seed, params=None, rho=None, **extra):
    p = {"seed": int(seed), "backend": _backend.BACKEND}
    if params is not None:
        p["H"] = params.H
        p["alpha"] = params.alpha
    if rho is not None:
        p["rho"] = rho.to_dict()
    p.update(extra)
    return p


def bonferroni_threshold(m, threshold=DEFAULT_THRESHOLD):
    """Per-test |z| bound giving the family the two-sided level of a single ``threshold`` test."""
    if m <= 1:
        return float(threshold)
    return float(norm.isf(norm.sf(threshold) / m))


# ---------------------------------------------------------------- reductions

def tree_sum(x):
    """Pairwise sum along axis 0; the order depends only on the array length."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] == 0:
        return np.zeros(x.shape[1:])
    while x.shape[0] > 1:
        half = x.shape[0] // 2
        head = x[: 2 * half : 2] + x[1 : 2 * half : 2]
        x = np.concatenate([head, x[2 * half :]], axis=0) if x.shape[0] % 2 else head
    return x[0]


def tree_mean(x):
    x = np.asarray(x, dtype=float)
    return tree_sum(x) / x.shape[0]


def _mean_se(x):
    """Mean along axis 0 and its standard error."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    mu = tree_mean(x)
    var = tree_sum((x - mu) ** 2) / (n - 1)
    return mu, np.sqrt(var / n)


def _slope(logx, logy):
    """Least-squares slope and the weights c with slope = sum c_k logy_k."""
    logx = np.asarray(logx, dtype=float)
    c = (logx - logx.mean()) / np.sum((logx - logx.mean()) ** 2)
    return float(np.dot(c, logy)), c


def _log_slope_with_se(logx, per_rep):
    """Slope of log(mean) against ``logx`` with an influence-function standard error.

    ``per_rep`` has shape (n_reps, K): one row of statistics per replication.
    """
    means = tree_mean(per_rep)
    slope, c = _slope(logx, np.log(means))
    infl = (per_rep - means) / means @ c
    n = per_rep.shape[0]
    se = float(np.sqrt(tree_sum(infl**2) / (n - 1) / n))
    return slope, se, means


# ---------------------------------------------------------------- sampling

def terms_for_horizon(rho, alpha, T, clip=CLIP_FRACTION, minimum=MIN_TERMS):
    """Series length whose largest discarded jump is at most ``clip`` times the smallest |x_j|.

    Keeping the truncation level fixed in jump units makes the Gaussian tail
    carry the same small share of the higher cumulants at every horizon.
    """
    m = v_sampling_weights_norm(rho, alpha)
    level = clip * float(np.min(np.abs(rho.locations)))
    n = T / alpha * (level / m) ** (-alpha)
    return int(max(minimum, math.ceil(n)))


def sample_paths(kind, params, rho, T, grid, n_reps, seed, n_terms=None, workers=None, remainder="gaussian"):
    """Values of ``n_reps`` paths of ``kind`` ('ts', 'ftsm', 'fsm') on ``grid``; shape (n_reps, len(grid))."""
    alpha = params.alpha
    n_terms = terms_for_horizon(rho, alpha, T) if n_terms is None else int(n_terms)
    consts = series_constants(rho, alpha, T)
    grid = np.asarray(grid, dtype=float)

    def block(offset, count):
        d = make_driver(seed, T, n_terms, rho, alpha, n_reps=count, rep_offset=offset)
        if kind == "ts":
            return simulate_ts(d, consts, grid, remainder).values
        if kind == "ftsm":
            return simulate_ftsm(d, params, consts, grid, remainder).values
        if kind == "fsm":
            return simulate_fsm(d, params, consts, grid, remainder).values
        raise ValueError(f"unknown process kind {kind!r}")

    chunk = max(1, min(1000, _CHUNK_ELEMENTS // n_terms))
    return replicate(block, n_reps, chunk=chunk, workers=workers)


# ---------------------------------------------------------------- checks

def check_covariance(params, rho, grid, n_reps, seed, n_terms=None, threshold=DEFAULT_THRESHOLD, workers=None):
    """Empirical covariance of fTSm on ``grid`` against R_G(t, s) ts_variance.

    One report per ordered grid pair; the per-pair bound is Bonferroni
    adjusted over the distinct pairs.
    """
    if n_reps < 100:
        raise ValueError("check_covariance needs n_reps >= 100")
    start = time.perf_counter()
    grid = np.asarray(grid, dtype=float)
    T = float(grid[-1])
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    X = sample_paths("ftsm", params, rho, T, grid, n_reps, seed, n_terms, workers)
    runtime = time.perf_counter() - start
    G = 0.5 if params.regime is Regime.LEVY else params.G
    tv = ts_variance(rho, params.alpha)
    k = grid.size
    bound = bonferroni_threshold(k * (k + 1) // 2, threshold)
    Xc = X - tree_mean(X)
    prov = _provenance(seed, params, rho, n_terms=n_terms, T=T)
    reports = []
    for a in range(k):
        for b in range(k):
            prod = Xc[:, a] * Xc[:, b]
            est, se = _mean_se(prod)
            est = float(est) * n_reps / (n_reps - 1)
            theo = float(covariance_shape(G, grid[a], grid[b]) * tv)
            z = _z(est, theo, float(se))
            reports.append(VerificationReport(
                f"covariance(t={grid[a]:g},s={grid[b]:g})", theo, est, float(se), z, abs(z) <= bound, n_reps,
                runtime, bound, provenance=prov))
    return reports


def check_quadratic_variation(params, rho, T, N_grid, n_reps, seed, n_terms=None, tolerance=0.05,
                              threshold=DEFAULT_THRESHOLD, workers=None):
    """Mean of sum_k (L_{(k+1)T/N} - L_{kT/N})^2 over N = 16, 32, ..., ``N_grid``.

    The headline statistic is the fitted log-log exponent in N, judged
    against 1 - 2G within ``tolerance``. Each N also gates on its mean
    matching N^(1-2G) T^(2G) ts_variance (Bonferroni over the N values).
    All N share the paths of the finest grid.
    """
    if params.regime is Regime.ROUGH:
        raise ValueError("quadratic-variation check needs the long-memory or Levy regime (H >= 1/alpha)")
    N_grid = int(N_grid)
    if N_grid < 32 or N_grid & (N_grid - 1):
        raise ValueError("N_grid must be a power of two >= 32")
    start = time.perf_counter()
    Ns = [2**j for j in range(4, int(math.log2(N_grid)) + 1)]
    grid = np.linspace(0.0, T, N_grid + 1)
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    X = sample_paths("ftsm", params, rho, T, grid, n_reps, seed, n_terms, workers)
    per_rep = np.column_stack([np.sum(np.diff(X[:, :: N_grid // N], axis=1) ** 2, axis=1) for N in Ns])
    slope, se, means = _log_slope_with_se(np.log(Ns), per_rep)
    runtime = time.perf_counter() - start
    G = 0.5 if params.regime is Regime.LEVY else params.G
    tv = ts_variance(rho, params.alpha)
    bound = bonferroni_threshold(len(Ns), threshold)
    gates = []
    for j, N in enumerate(Ns):
        _, se_j = _mean_se(per_rep[:, j])
        target = N ** (1.0 - 2.0 * G) * T ** (2.0 * G) * tv
        z = _z(float(means[j]), target, float(se_j))
        gates.append({"N": N, "theoretical": target, "estimate": float(means[j]), "std_error": float(se_j),
                      "z_score": z, "passed": abs(z) <= bound})
    theo = 1.0 - 2.0 * G
    ok = abs(slope - theo) <= tolerance and all(g["passed"] for g in gates)
    return VerificationReport("quadratic_variation_exponent", theo, slope, se, _z(slope, theo, se), ok, n_reps,
                              runtime, bound, tolerance, _provenance(seed, params, rho, n_terms=n_terms, T=T),
                              {"gates": gates})


def lrd_covariance(params, rho, t, h):
    """Cov(L_h, L_{t+h} - L_t) = (1/2)((t+h)^2G - 2 t^2G + (t-h)^2G) ts_variance, for t >= h."""
    G = params.G
    t = np.asarray(t, dtype=float)
    return 0.5 * ((t + h) ** (2 * G) - 2.0 * t ** (2 * G) + np.abs(t - h) ** (2 * G)) * ts_variance(rho, params.alpha)


def check_lrd_slope(params, rho, h_lag, t_max, n_reps, seed, mc_times=(2.0, 8.0, 32.0), n_terms=None,
                    tolerance=0.1, threshold=DEFAULT_THRESHOLD, workers=None):
    """Decay of the increment covariance Cov(L_h, L_{t+h} - L_t).

    The headline is the log-log slope of the closed-form curve over
    t in [10, ``t_max``] against 2(G - 1) within ``tolerance``. The Monte
    Carlo gates compare the sample covariance with the exact value at
    ``mc_times``; the prefactor (1/2) G (2G - 1) h^2 ts_variance of the
    asymptote is reported alongside.
    """
    if params.regime is Regime.LEVY:
        raise ValueError("increments of a Levy process are uncorrelated; there is no decay to fit")
    if t_max <= 10.0:
        raise ValueError("t_max must exceed 10")
    start = time.perf_counter()
    G = params.G
    tv = ts_variance(rho, params.alpha)
    ts = np.geomspace(10.0, t_max, 25)
    curve = lrd_covariance(params, rho, ts, h_lag)
    slope, _ = _slope(np.log(ts), np.log(np.abs(curve)))
    theo = 2.0 * (G - 1.0)
    mc_times = [float(t) for t in mc_times if t >= h_lag]
    T = max(mc_times) + h_lag
    grid = np.unique(np.array([h_lag] + [x for t in mc_times for x in (t, t + h_lag)]))
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    X = sample_paths("ftsm", params, rho, T, grid, n_reps, seed, n_terms, workers)
    col = {float(g): j for j, g in enumerate(grid)}
    bound = bonferroni_threshold(len(mc_times), threshold)
    x0 = X[:, col[float(h_lag)]]
    gates = []
    for t in mc_times:
        incr = X[:, col[t + h_lag]] - X[:, col[t]]
        prod = (x0 - tree_mean(x0)) * (incr - tree_mean(incr))
        est, se = _mean_se(prod)
        est = float(est) * n_reps / (n_reps - 1)
        target = float(lrd_covariance(params, rho, t, h_lag))
        z = _z(est, target, float(se))
        gates.append({"t": t, "theoretical": target, "estimate": est, "std_error": float(se), "z_score": z,
                      "passed": abs(z) <= bound})
    runtime = time.perf_counter() - start
    ok = abs(slope - theo) <= tolerance and all(g["passed"] for g in gates)
    details = {"gates": gates, "prefactor": 0.5 * G * (2 * G - 1) * h_lag**2 * tv,
               "sign": "positive" if G > 0.5 else "negative"}
    return VerificationReport("lrd_slope", theo, slope, 0.0, math.nan, ok, n_reps, runtime, bound,
                              tolerance, _provenance(seed, params, rho, n_terms=n_terms, T=T, h_lag=h_lag),
                              details)


def _moment_stats(x):
    """Skewness, excess kurtosis and variance with influence-function standard errors."""
    x = np.asarray(x, dtype=float)
    n = x.size
    d = x - tree_mean(x)
    m2, m3, m4 = (float(tree_mean(d**k)) for k in (2, 3, 4))
    if_m2 = d**2 - m2
    if_m3 = d**3 - m3 - 3.0 * m2 * d
    if_m4 = d**4 - m4 - 4.0 * m3 * d
    skew = m3 / m2**1.5
    kurt = m4 / m2**2 - 3.0
    if_skew = if_m3 / m2**1.5 - 1.5 * m3 * if_m2 / m2**2.5
    if_kurt = if_m4 / m2**2 - 2.0 * m4 * if_m2 / m2**3

    def se(v):
        return float(np.sqrt(tree_sum(v**2) / (n - 1) / n))

    return {"skewness": (skew, se(if_skew)), "kurtosis": (kurt, se(if_kurt)), "variance": (m2, se(if_m2))}


def _bootstrap_se(x, seed, n_boot=400):
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0xB0075])))
    stats = np.empty((n_boot, 3))
    for b in range(n_boot):
        s = _moment_stats(x[gen.integers(0, x.size, x.size)])
        stats[b] = [s["skewness"][0], s["kurtosis"][0], s["variance"][0]]
    return stats.std(axis=0, ddof=1)


def excess_kurtosis(params, rho, h):
    """Excess kurtosis of L_h: Gamma(4 - alpha) int x^4 rho C_{H,alpha,4} / (ts_variance^2 h)."""
    alpha = params.alpha
    if params.regime is not Regime.LEVY and not lp_integrable(params, 4.0):
        return math.inf
    c4 = 1.0 if params.regime is Regime.LEVY else kernel_lp_const(params, 4.0)
    return gamma_real(4.0 - alpha) * abs_moment(rho, 4.0) * c4 / (ts_variance(rho, alpha) ** 2 * h)


def check_long_time_gaussianity(params, rho, h, n_reps, seed, n_terms=None, threshold=DEFAULT_THRESHOLD,
                                workers=None, against="limit"):
    """Skewness and excess kurtosis of h^-G L_h.

    With ``against="limit"`` the headline z-score is the excess kurtosis
    against the Gaussian limit 0; with ``against="exact"`` it is judged
    against the exact finite-h value (useful at small h, where the law is
    still visibly non-Gaussian). Gates: skewness against 0 for symmetric
    rho, and the variance against ts_variance (exact at every h). Standard
    errors use the asymptotic influence-function formula, or a bootstrap
    below 5000 replications.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    if against not in ("limit", "exact"):
        raise ValueError("against must be 'limit' or 'exact'")
    start = time.perf_counter()
    T = float(h)
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    G = 0.5 if params.regime is Regime.LEVY else params.G
    x = sample_paths("ftsm", params, rho, T, [T], n_reps, seed, n_terms, workers)[:, 0] * h**-G
    stats = _moment_stats(x)
    if n_reps < _BOOTSTRAP_BELOW:
        boot = _bootstrap_se(x, seed)
        stats = {k: (stats[k][0], float(s)) for k, s in zip(("skewness", "kurtosis", "variance"), boot)}
    runtime = time.perf_counter() - start
    tv = ts_variance(rho, params.alpha)
    kurt, kurt_se = stats["kurtosis"]
    checks = [("variance", tv)]
    if rho.is_symmetric or against == "limit":
        checks.insert(0, ("skewness", 0.0))
    gates = []
    for name, target in checks:
        est, se = stats[name]
        z = _z(est, target, se)
        gates.append({"name": name, "theoretical": target, "estimate": est, "std_error": se, "z_score": z,
                      "passed": abs(z) <= threshold})
    exact = excess_kurtosis(params, rho, h)
    theo = 0.0 if against == "limit" else exact
    z = _z(kurt, theo, kurt_se)
    ok = abs(z) <= threshold and all(g["passed"] for g in gates)
    details = {"gates": gates, "h": h, "exact_kurtosis": exact, "against": against,
               "se_method": "bootstrap" if n_reps < _BOOTSTRAP_BELOW else "asymptotic"}
    name = "long_time_gaussianity" if against == "limit" else "kurtosis_law"
    return VerificationReport(f"{name}(h={h:g})", theo, kurt, kurt_se, z, ok, n_reps, runtime,
                              threshold, provenance=_provenance(seed, params, rho, n_terms=n_terms, T=T),
                              details=details)


def gaussianity_profile(params, rho, h_values, n_reps, seed, threshold=DEFAULT_THRESHOLD, workers=None):
    """Kurtosis reports at increasing h plus whether |kurtosis| decreases along them.

    Returns ``(reports, monotone)``. The largest h is judged against the
    Gaussian limit, the others against their exact finite-h kurtosis.
    Every h uses the same seed.
    """
    h_values = sorted(float(h) for h in h_values)
    reports = [check_long_time_gaussianity(params, rho, h, n_reps, seed, threshold=threshold, workers=workers,
                                           against="limit" if h == h_values[-1] else "exact")
               for h in h_values]
    kurt = [abs(r.estimate) for r in reports]
    monotone = all(a > b for a, b in zip(kurt, kurt[1:]))
    return reports, monotone


def check_empirical_cf(kind, params, rho, t, y_grid, n_reps, seed, n_terms=None, max_gap=0.02, n_boot=200,
                       workers=None):
    """sup_y |empirical CF - closed-form CF| of the series sampler at time ``t``.

    ``kind`` selects the process and its oracle: 'ftsm' (cf_ftsm), 'ts'
    (cf_ts) or 'fsm' (cf_fsm). A Gaussian multiplier bootstrap gives the
    spread of the sup statistic under pure sampling noise; its 99.9%
    quantile is reported as the band.
    """
    if n_reps < 10_000:
        raise ValueError("check_empirical_cf needs n_reps >= 10000")
    start = time.perf_counter()
    y = np.asarray(y_grid, dtype=float)
    T = float(t)
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    x = sample_paths(kind, params, rho, T, [T], n_reps, seed, n_terms, workers)[:, 0]
    E = np.exp(1j * x[:, None] * y[None, :])
    ecf = tree_mean(E.real) + 1j * tree_mean(E.imag)
    if kind == "ftsm":
        oracle = np.array([cf_ftsm(v, T, params, rho) for v in y])
    elif kind == "ts":
        oracle = np.array([cf_ts(v, T, rho, params.alpha) for v in y])
    else:
        oracle = np.array([cf_fsm(v, T, params, rho) for v in y])
    gap = float(np.max(np.abs(ecf - oracle)))
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0xCF])))
    xi = gen.standard_normal((n_boot, n_reps))
    noise = np.abs(xi @ (E - ecf)) / n_reps
    sup = noise.max(axis=1)
    runtime = time.perf_counter() - start
    se = float(sup.std(ddof=1))
    details = {"band_999": float(np.quantile(sup, 0.999)), "band_median": float(np.median(sup)),
               "y_grid": y, "abs_gap": np.abs(ecf - oracle)}
    return VerificationReport(f"empirical_cf[{kind}](t={t:g})", 0.0, gap, se, _z(gap, 0.0, se), gap <= max_gap,
                              n_reps, runtime, DEFAULT_THRESHOLD, max_gap,
                              _provenance(seed, params, rho, n_terms=n_terms, T=T, kind=kind), details)


def estimate_holder_roughness(path, tolerance=0.05, max_lag_fraction=0.25):
    """Variogram exponent of a path set on a uniform grid.

    Fits log E|L_{t+k dt} - L_t|^2 against log(k dt) over dyadic lags k and
    judges the slope against 2G. Increments at each lag are averaged over
    positions within a path; the standard error comes from variation
    across replications. The almost-sure Hoelder exponent G - 1/2 is
    reported in ``details``.
    """
    start = time.perf_counter()
    prov = path.params
    alpha = float(prov["alpha"])
    params = KernelParams(float(prov.get("H", 1.0 / alpha)), alpha)
    if params.regime is Regime.ROUGH or path.flags.get("unbounded_regime"):
        raise ValueError("Hoelder estimation rejects rough-regime paths (H < 1/alpha)")
    grid = np.asarray(path.grid, dtype=float)
    steps = np.diff(grid)
    if steps.size < 8 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("path grid must be uniform with at least 9 points")
    dt = steps[0]
    X = path.values
    lags = [2**j for j in range(int(math.log2(max(1, int(steps.size * max_lag_fraction)))) + 1)]
    per_rep = np.column_stack([np.mean((X[:, k:] - X[:, :-k]) ** 2, axis=1) for k in lags])
    slope, se, _ = _log_slope_with_se(np.log(np.array(lags) * dt), per_rep)
    G = 0.5 if params.regime is Regime.LEVY else params.G
    theo = 2.0 * G
    runtime = time.perf_counter() - start
    details = {"lags": lags, "dt": dt, "holder_exponent": slope / 2.0 - 0.5, "gates": []}
    return VerificationReport("holder_variogram_exponent", theo, slope, se, _z(slope, theo, se),
                              abs(slope - theo) <= tolerance, path.n_reps, runtime, DEFAULT_THRESHOLD, tolerance,
                              _provenance(path.seed, params, None, kind=path.kind), details)


def simulate_path_set(kind, params, rho, grid, n_reps, seed, T=None, n_terms=None, workers=None):
    """A :class:`~ftsm.series.Path` of ``n_reps`` replications, for the path-set checks."""
    from .series import Path

    grid = np.asarray(grid, dtype=float)
    T = float(grid[-1]) if T is None else float(T)
    n_terms = terms_for_horizon(rho, params.alpha, T) if n_terms is None else n_terms
    values = sample_paths(kind, params, rho, T, grid, n_reps, seed, n_terms, workers)
    prov = {"kind": kind, "alpha": params.alpha, "H": params.H, "T": T, "n_terms": n_terms, "rho": rho.to_dict()}
    flags = {"unbounded_regime": True} if params.regime is Regime.ROUGH else {}
    return Path(grid, values, kind, prov, int(seed), 0, flags)


# ---------------------------------------------------------------- suite

def _suite_defaults():
    from .measure import rho1, rho2

    p = KernelParams(0.8, 1.6)
    return p, rho1(), rho2(1.6)


def run_suite(suite, seed, scale=1.0, workers=None):
    """Run one named check group (or 'all') at its default size; returns a list of reports.

    ``scale`` multiplies every replication count (values below 1 give a
    quick smoke run with reduced power).
    """
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    p, r1, r2 = _suite_defaults()

    def reps(n, floor=100):
        return max(floor, int(round(n * scale)))

    out = []
    for name in names:
        if name == "covariance":
            out += check_covariance(p, r2, np.linspace(0.2, 1.0, 5), reps(20_000), seed, workers=workers)
        elif name == "qv":
            out.append(check_quadratic_variation(p, r1, 1.0, 512, reps(2000), seed, workers=workers))
        elif name == "lrd":
            out.append(check_lrd_slope(p, r1, 1.0, 1e3, reps(20_000), seed, workers=workers))
        elif name == "gauss":
            reports, monotone = gaussianity_profile(p, r1, (1.0, 10.0, 1e3), reps(50_000, 1000), seed,
                                                    workers=workers)
            out += reports
            kurt = [r.estimate for r in reports]
            out.append(VerificationReport("kurtosis_monotone(h=1,10,1000)", 0.0, float(monotone), 0.0, 0.0,
                                          bool(monotone), reports[0].n_reps,
                                          sum(r.runtime_s for r in reports), DEFAULT_THRESHOLD,
                                          provenance=_provenance(seed, p, r1),
                                          details={"kurtosis": kurt,
                                                   "std_error": [r.std_error for r in reports]}))
        elif name == "cf":
            y = np.linspace(-3.0, 3.0, 61)
            out.append(check_empirical_cf("ftsm", p, r2, 1.0, y, reps(50_000, 10_000), seed, workers=workers))
            levy = KernelParams(1.0 / 1.6, 1.6)
            out.append(check_empirical_cf("ts", levy, r2, 1.0, y, reps(50_000, 10_000), seed, workers=workers))
        elif name == "holder":
            path = simulate_path_set("ftsm", p, r1, np.linspace(0.0, 1.0, 257), reps(2000), seed,
                                     workers=workers)
            out.append(estimate_holder_roughness(path))
    return out


def format_table(reports: Sequence[VerificationReport]):
    """Fixed-width text table of reports."""
    head = f"{'check':44s} {'theory':>12s} {'estimate':>12s} {'se':>10s} {'z':>8s}  result"
    lines = [head, "-" * len(head)]
    for r in reports:
        lines.append(f"{r.name[:44]:44s} {r.theoretical:12.5g} {r.estimate:12.5g} {r.std_error:10.3g} "
                     f"{r.z_score:8.2f}  {'PASS' if r.passed else 'FAIL'}".replace("     nan", "     n/a"))
    return "\n".join(lines)
