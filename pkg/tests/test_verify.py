import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import norm

from ftsm.kernel import KernelParams
from ftsm.measure import rho1, rho2, ts_variance
from ftsm.verify import (
    VerificationReport,
    _bootstrap_se,
    _moment_stats,
    bonferroni_threshold,
    check_covariance,
    check_empirical_cf,
    check_long_time_gaussianity,
    check_lrd_slope,
    check_quadratic_variation,
    estimate_holder_roughness,
    excess_kurtosis,
    format_table,
    gaussianity_profile,
    lrd_covariance,
    run_suite,
    sample_paths,
    simulate_path_set,
    terms_for_horizon,
    tree_mean,
    tree_sum,
)

P = KernelParams(0.8, 1.6)
LEVY = KernelParams(1 / 1.6, 1.6)


def _consistent(report):
    bound = report.threshold
    if report.tolerance is None:
        own = abs(report.z_score) <= bound
    else:
        own = abs(report.estimate - report.theoretical) <= report.tolerance
    gates = all(g["passed"] for g in report.details.get("gates", []))
    return report.passed == (own and gates)


@given(arrays(np.float64, st.integers(1, 300), elements=st.floats(-1e6, 1e6)))
def test_tree_sum_matches_sum(x):
    assert tree_sum(x) == pytest.approx(math.fsum(x), abs=1e-6)
    assert tree_mean(x) == pytest.approx(math.fsum(x) / x.size, abs=1e-6)


def test_tree_sum_axis_and_empty():
    x = np.arange(12.0).reshape(6, 2)
    assert np.array_equal(tree_sum(x), x.sum(axis=0))
    assert tree_sum(np.zeros((0, 3))).shape == (3,)


def test_bonferroni_threshold():
    assert bonferroni_threshold(1) == 4.0
    b = bonferroni_threshold(15)
    assert norm.sf(b) * 15 == pytest.approx(norm.sf(4.0), rel=1e-9)
    assert bonferroni_threshold(30) > b > 4.0


def test_terms_for_horizon():
    assert terms_for_horizon(rho1(), 1.6, 1.0) == 500
    n3 = terms_for_horizon(rho1(), 1.6, 1e3)
    assert n3 > 10_000
    assert terms_for_horizon(rho1(), 1.6, 2e3) == pytest.approx(2 * n3, rel=1e-3)


def test_moment_stats_against_bootstrap():
    x = np.random.default_rng(0).gamma(4.0, size=4000)
    stats = _moment_stats(x)
    boot = _bootstrap_se(x, seed=1, n_boot=300)
    for k, name in enumerate(("skewness", "kurtosis", "variance")):
        assert stats[name][1] == pytest.approx(boot[k], rel=0.25)
    assert stats["skewness"][0] == pytest.approx(2 / math.sqrt(4.0), abs=5 * stats["skewness"][1])
    assert stats["kurtosis"][0] == pytest.approx(6 / 4.0, abs=5 * stats["kurtosis"][1])


def test_sample_paths_shape_and_determinism():
    grid = np.linspace(0, 1, 5)
    a = sample_paths("ftsm", P, rho2(1.6), 1.0, grid, 30, 3, n_terms=100)
    b = sample_paths("ftsm", P, rho2(1.6), 1.0, grid, 30, 3, n_terms=100, workers=2)
    assert a.shape == (30, 5) and np.array_equal(a, b)
    with pytest.raises(ValueError):
        sample_paths("brownian", P, rho1(), 1.0, grid, 3, 3)


def test_covariance_reports():
    reps = check_covariance(P, rho2(1.6), np.linspace(0.2, 1.0, 5), 3000, 11, n_terms=300)
    assert len(reps) == 25
    tv = ts_variance(rho2(1.6), 1.6)
    by_name = {r.name: r for r in reps}
    r = next(v for k, v in by_name.items() if "1" in k and "0.6" in k)
    assert r.theoretical == pytest.approx(0.5 * (1 + 0.6**1.35 - 0.4**1.35) * tv)
    assert all(_consistent(r) for r in reps)
    assert all(r.passed for r in reps)
    assert all(r.threshold == pytest.approx(bonferroni_threshold(15)) for r in reps)
    json.dumps([r.to_dict() for r in reps])


def test_covariance_levy_case_is_min():
    reps = check_covariance(LEVY, rho1(), [0.5, 1.0], 2000, 12, n_terms=200)
    tv = ts_variance(rho1(), 1.6)
    theo = sorted(r.theoretical for r in reps)
    assert theo == pytest.approx([0.5 * tv, 0.5 * tv, 0.5 * tv, tv])
    assert all(r.passed for r in reps)
    with pytest.raises(ValueError):
        check_covariance(P, rho1(), [0.5, 1.0], 50, 1)


def test_quadratic_variation_small():
    r = check_quadratic_variation(P, rho1(), 1.0, 64, 400, 13, n_terms=300)
    assert r.theoretical == pytest.approx(1 - 2 * P.G)
    assert _consistent(r) and r.passed
    gates = r.details["gates"]
    assert [g["N"] for g in gates] == [16, 32, 64]
    ratio = gates[1]["theoretical"] / gates[0]["theoretical"]
    assert ratio == pytest.approx(2 ** (1 - 2 * P.G))


def test_quadratic_variation_levy_is_flat():
    r = check_quadratic_variation(LEVY, rho1(), 2.0, 64, 400, 14, n_terms=300)
    tv = ts_variance(rho1(), 1.6)
    assert r.theoretical == 0.0
    assert all(g["theoretical"] == pytest.approx(2.0 * tv) for g in r.details["gates"])
    assert r.passed


def test_quadratic_variation_errors():
    with pytest.raises(ValueError):
        check_quadratic_variation(KernelParams(0.5, 1.6), rho1(), 1.0, 64, 100, 1)
    with pytest.raises(ValueError):
        check_quadratic_variation(P, rho1(), 1.0, 48, 100, 1)


def test_lrd_covariance_and_slope():
    tv = ts_variance(rho1(), 1.6)
    assert lrd_covariance(P, rho1(), 1.0, 1.0) == pytest.approx(0.5 * (2 ** 1.35 - 2) * tv)
    big = 1e5
    asym = 0.5 * P.G * (2 * P.G - 1) * big ** (2 * P.G - 2) * 2 * tv
    assert lrd_covariance(P, rho1(), big, 1.0) == pytest.approx(asym, rel=1e-4)
    r = check_lrd_slope(P, rho1(), 1.0, 1e3, 2000, 15, n_terms=500)
    assert abs(r.estimate - (2 * P.G - 2)) <= 0.1 and r.passed and _consistent(r)
    assert math.isnan(r.z_score)
    with pytest.raises(ValueError):
        check_lrd_slope(LEVY, rho1(), 1.0, 1e3, 100, 1)


def test_excess_kurtosis():
    k1 = excess_kurtosis(P, rho1(), 1.0)
    assert excess_kurtosis(P, rho1(), 10.0) == pytest.approx(k1 / 10)
    # Levy case: cumulant ratio Gamma(4-a) m4 / (Gamma(2-a) m2)^2
    assert excess_kurtosis(LEVY, rho1(), 1.0) == pytest.approx(math.gamma(2.4) * 2 / (math.gamma(0.4) * 2) ** 2)
    assert excess_kurtosis(KernelParams(0.3, 1.6), rho1(), 1.0) == math.inf
    assert math.isfinite(excess_kurtosis(KernelParams(0.4, 1.6), rho1(), 1.0))


def test_long_time_gaussianity_small():
    r = check_long_time_gaussianity(P, rho1(), 1.0, 4000, 16, n_terms=300, against="exact")
    assert r.name.startswith("kurtosis_law") and _consistent(r) and r.passed
    assert {g["name"] for g in r.details["gates"]} == {"skewness", "variance"}
    with pytest.raises(ValueError):
        check_long_time_gaussianity(P, rho1(), 1.0, 100, 1, against="other")


def test_gaussianity_profile_small():
    reports, monotone = gaussianity_profile(P, rho1(), (1.0, 50.0), 3000, 17)
    assert reports[0].name.startswith("kurtosis_law") and reports[-1].name.startswith("long_time")
    assert isinstance(monotone, bool)


def test_empirical_cf_small():
    y = np.linspace(-3, 3, 31)
    r = check_empirical_cf("ftsm", P, rho2(1.6), 1.0, y, 10_000, 18, n_terms=300)
    assert r.tolerance == 0.02 and _consistent(r)
    assert r.estimate == pytest.approx(max(r.details["abs_gap"]))
    assert r.details["abs_gap"][len(y) // 2] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        check_empirical_cf("ftsm", P, rho2(1.6), 1.0, y, 100, 18)


def test_holder_estimates():
    path = simulate_path_set("ftsm", P, rho1(), np.linspace(0, 1, 129), 400, 19, n_terms=500)
    r = estimate_holder_roughness(path)
    assert r.theoretical == pytest.approx(2 * P.G) and r.passed
    assert r.details["holder_exponent"] == pytest.approx(r.estimate / 2 - 0.5)
    levy = simulate_path_set("ts", LEVY, rho1(), np.linspace(0, 1, 129), 400, 20, n_terms=500)
    rl = estimate_holder_roughness(levy)
    assert rl.theoretical == 1.0 and rl.passed


def test_holder_refinement_invariance():
    coarse = simulate_path_set("ftsm", P, rho1(), np.linspace(0, 1, 65), 300, 21, n_terms=500)
    fine = simulate_path_set("ftsm", P, rho1(), np.linspace(0, 1, 257), 300, 21, n_terms=500)
    a, b = estimate_holder_roughness(coarse), estimate_holder_roughness(fine)
    assert abs(a.estimate - b.estimate) <= 0.05


def test_holder_errors():
    rough = simulate_path_set("ftsm", KernelParams(0.5, 1.6), rho1(), np.linspace(0, 1, 17), 5, 1, n_terms=50)
    with pytest.raises(ValueError):
        estimate_holder_roughness(rough)
    uneven = simulate_path_set("ftsm", P, rho1(), np.r_[0, np.geomspace(0.01, 1, 16)], 5, 1, n_terms=50)
    with pytest.raises(ValueError):
        estimate_holder_roughness(uneven)


def test_report_serialisation_and_table():
    r = VerificationReport("x", 0.0, 1.0, 0.0, math.inf, False, 10, 0.1, details={"a": np.array([1.0, np.nan])})
    d = r.to_dict()
    assert d["z_score"] == "inf" and d["details"]["a"][1] == "nan"
    json.dumps(d)
    table = format_table([r, VerificationReport("y", 0.0, 0.0, 0.0, math.nan, True, 1, 0.0)])
    assert "FAIL" in table and "PASS" in table and "n/a" in table


def test_run_suite_smoke():
    reps = run_suite("holder", 1, scale=0.1)
    assert len(reps) == 1 and reps[0].n_reps == 200
    with pytest.raises(ValueError):
        run_suite("nope", 1)
