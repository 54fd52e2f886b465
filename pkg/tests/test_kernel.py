import math

import mpmath as mp
import numpy as np
import pytest
from conftest import FIGURE_PARAMS, mp_c_norm, mp_kernel
from hypothesis import assume, given
from hypothesis import strategies as st

from ftsm._kernels_py import table_kernel
from ftsm.kernel import (
    KernelParams,
    Regime,
    c_norm,
    covariance_shape,
    g_exponent,
    inner_product,
    kernel_eval,
    kernel_increment,
    kernel_lp_const,
    kernel_lp_integral,
    kernel_primitive,
    kernel_table,
    lp_integrable,
    regularized_kernel,
    unit_kernel,
)


@st.composite
def valid_params(draw, regimes=("long", "rough")):
    alpha = draw(st.floats(0.3, 1.95))
    regime = draw(st.sampled_from(regimes))
    off = draw(st.floats(0.03, 0.47))
    H = 1 / alpha + (off if regime == "long" else -off)
    return KernelParams(H, alpha)


def test_params_validation_and_regime():
    with pytest.raises(ValueError, match="outside"):
        KernelParams(2.0, 1.6)
    with pytest.raises(ValueError):
        KernelParams(0.8, 2.0)
    assert KernelParams(0.8, 1.6).regime is Regime.LONG_MEMORY
    assert KernelParams(0.625, 1.6).regime is Regime.LEVY
    assert KernelParams(0.6, 1.9).regime is Regime.LONG_MEMORY
    assert KernelParams(0.5, 1.6).regime is Regime.ROUGH


def test_g_exponent_examples():
    assert g_exponent(KernelParams(1 / 1.3, 1.3)) == pytest.approx(0.5)
    assert g_exponent(KernelParams(0.8, 1.6)) == pytest.approx(0.675, abs=1e-15)
    assert g_exponent(KernelParams(1.6, 0.7)) == pytest.approx(0.67142857142857, abs=1e-13)


@pytest.mark.parametrize("H,alpha", FIGURE_PARAMS + [(0.5, 1.6), (1.3, 0.9)])
def test_c_norm_matches_gamma_oracle(H, alpha):
    assert c_norm(KernelParams(H, alpha)) == pytest.approx(float(mp_c_norm(H, alpha)), rel=1e-12)


def test_c_norm_levy_raises_and_limit_is_two_sided():
    with pytest.raises(ValueError):
        c_norm(KernelParams(0.625, 1.6))
    lo = c_norm(KernelParams(0.625 - 1e-6, 1.6))
    hi = c_norm(KernelParams(0.625 + 1e-6, 1.6))
    assert lo > 0 and hi > 0
    assert abs(lo - hi) <= 1e-4


def test_lp_integrable_examples():
    for H, a in FIGURE_PARAMS:
        p = KernelParams(H, a)
        assert lp_integrable(p, 2.0)
        assert lp_integrable(p, a)
    assert not lp_integrable(KernelParams(0.8, 1.6), 8.0)


def test_kernel_examples():
    levy = KernelParams(0.625, 1.6)
    assert kernel_eval(levy, 1.0, 0.5) == 1.0
    p = KernelParams(0.8, 1.6)
    assert kernel_eval(p, 1.0, 1.5) == 0.0
    assert kernel_eval(p, 1.0, 0.5) == pytest.approx(mp_kernel(0.8, 1.6, 1.0, 0.5), rel=1e-11)


def test_kernel_infinite_tags():
    assert kernel_eval(KernelParams(0.8, 1.6), 1.0, 0.0) == math.inf
    rough = KernelParams(0.5, 1.6)
    assert kernel_eval(rough, 1.0, 1.0) == math.inf
    assert kernel_eval(rough, 1.0, 0.0) == math.inf
    assert math.isfinite(kernel_eval(rough, 1.0, 0.3))
    with pytest.raises(ValueError):
        kernel_eval(rough, 0.0, 0.3)


@pytest.mark.parametrize("H,alpha", FIGURE_PARAMS + [(0.5, 1.6), (1.2, 1.1)])
@pytest.mark.parametrize("s", [1e-4, 0.2, 0.5, 0.9, 0.999])
def test_kernel_matches_mpmath(H, alpha, s):
    p = KernelParams(H, alpha)
    assert kernel_eval(p, 1.0, s) == pytest.approx(mp_kernel(H, alpha, 1.0, s), rel=1e-9)


@given(valid_params(), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.01, 0.99))
def test_scaling_law(p, h, t, frac):
    s = frac * t * h
    lhs = kernel_eval(p, h * t, s)
    rhs = h**p.beta * kernel_eval(p, t, s / h)
    assert lhs == pytest.approx(rhs, rel=1e-7)


@given(valid_params(("long",)), st.floats(0.2, 5.0))
def test_long_memory_kernel_nonnegative_decreasing(p, t):
    s = np.linspace(0.001, 0.999, 60) * t
    k = kernel_eval(p, t, s)
    assert np.all(k >= 0)
    assert np.all(np.diff(k) <= 1e-12 * k[:-1])


@given(valid_params(("long", "rough")))
def test_c2_is_one(p):
    assert kernel_lp_const(p, 2.0) == pytest.approx(1.0, abs=1e-6)


def test_lp_const_examples():
    assert kernel_lp_const(KernelParams(0.625, 1.6), 3.0) == 1.0
    p = KernelParams(0.8, 1.6)
    with mp.workdps(20):
        c1 = mp.quad(lambda s: mp_kernel(0.8, 1.6, 1, s, dps=20), [0, 0.01, 0.5, 1])
    assert kernel_lp_const(p, 1.0) == pytest.approx(float(c1), rel=1e-7)
    assert kernel_lp_integral(p, 2.0, 1.0) == pytest.approx(kernel_lp_const(p, 1.0) * 2**1.175, rel=1e-9)
    with pytest.raises(ValueError):
        kernel_lp_const(p, 8.0)


@pytest.mark.parametrize("H,alpha", FIGURE_PARAMS)
@pytest.mark.parametrize("pw", ["one", "alpha", "two"])
def test_lp_scaling_t_invariance(H, alpha, pw):
    p = KernelParams(H, alpha)
    q = {"one": 1.0, "alpha": alpha, "two": 2.0}[pw]
    vals = [kernel_lp_integral(p, t, q) / t ** (q * p.beta + 1) for t in (0.5, 1.0, 2.0)]
    assert max(vals) - min(vals) <= 1e-6 * abs(vals[1])


def test_kernel_primitive_examples():
    assert kernel_primitive(KernelParams(0.625, 1.6), 2.5) == pytest.approx(2.5)
    assert kernel_primitive(KernelParams(0.8, 1.6), 0.0) == 0.0
    p = KernelParams(0.8, 1.6)
    assert kernel_primitive(p, 2.0) == pytest.approx(kernel_lp_const(p, 1.0) * 2**1.175, rel=1e-14)


@pytest.mark.parametrize("H,alpha", FIGURE_PARAMS)
def test_inner_product_grid(H, alpha):
    p = KernelParams(H, alpha)
    grid = [0.2, 0.5, 1.0, 1.7, 3.0]
    for t in grid:
        for s in grid:
            assert inner_product(p, t, s) == pytest.approx(float(covariance_shape(p.G, t, s)), abs=1e-6)


def test_inner_product_examples():
    p = KernelParams(0.8, 1.6)
    assert inner_product(p, 1.0, 1.0) == pytest.approx(1.0, abs=1e-6)
    assert inner_product(p, 1.0, 0.5) == pytest.approx(0.5, abs=1e-6)
    assert inner_product(p, 1.0, 1e-6) < 1e-3


def test_regularized_kernel():
    p = KernelParams(0.8, 1.6)
    exact = kernel_eval(p, 1.0, 0.5)
    gaps = [abs(regularized_kernel(p, n, 0.0, 1.0, 0.5)[0] - exact) for n in (1, 10, 100, 1000)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    v0, _ = regularized_kernel(p, 10, 0.0, 1.0, 0.5)
    v3, _ = regularized_kernel(p, 10, 0.3, 1.0, 0.5)
    assert v3 - v0 == pytest.approx(0.3, abs=1e-15)
    _, d = regularized_kernel(p, 10, 0.0, 1.0, 0.5)
    closed = c_norm(p) * p.beta * (1 + 0.1 - 0.5) ** (p.beta - 1) * (1 / 0.5) ** p.beta
    assert d == pytest.approx(closed, rel=1e-14)
    errs = []
    for delta in (1e-2, 5e-3):
        fd = (regularized_kernel(p, 10, 0.0, 1 + delta, 0.5)[0] - regularized_kernel(p, 10, 0.0, 1 - delta, 0.5)[0])
        errs.append(abs(fd / (2 * delta) - d))
    assert errs[1] < errs[0] / 3  # O(delta^2)
    with pytest.raises(ValueError):
        regularized_kernel(KernelParams(0.5, 1.6), 10, 0.0, 1.0, 0.5)


@given(valid_params(), st.floats(1.0, 500.0), st.floats(0.001, 0.999))
def test_kernel_increment(p, t, frac):
    s = np.array([frac * t])
    direct = kernel_eval(p, t + 1.0, s) - kernel_eval(p, t, s)
    inc = kernel_increment(p, t, 1.0, s)
    assert inc[0] == pytest.approx(direct[0], rel=1e-8, abs=1e-12 * abs(kernel_eval(p, t, s)[0]))


@given(valid_params(), st.floats(-30, 30))
def test_table_matches_exact_kernel(p, xi):
    v = 1.0 / (1.0 + math.exp(-xi))
    assume(0.0 < v < 1.0)
    exact = float(unit_kernel(p, np.array([v]), np.array([1.0 - v]))[0])  # same rounded s as the table sees
    tab = float(table_kernel(1.0, np.array([v]), kernel_table(p))[0])
    assert tab == pytest.approx(exact, rel=1e-9)


def test_table_scales_with_t():
    p = KernelParams(1.6, 0.7)
    s = np.array([0.3, 1.1, 2.4])
    assert np.allclose(table_kernel(2.5, s, kernel_table(p)), kernel_eval(p, 2.5, s), rtol=1e-10)
