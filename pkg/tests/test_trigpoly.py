import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyweight.errors import AliasingWarning, PolyweightError
from polyweight.quad import fourier_coefficient
from polyweight.trigpoly import (TrigPoly, chebyshev_eval, chebyshev_log_eval, counterexample_evaluator,
                                 fourier_partial_sum, interpolation_roundtrip, sample_grid)
from polyweight.weights import omega

coeffs = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=25)


def test_eval_examples():
    assert TrigPoly.cos(3)(0.0) == pytest.approx(1.0)
    assert TrigPoly.sin(2)(math.pi / 4) == pytest.approx(1.0)
    assert TrigPoly.constant(1.0)(np.array([0.3, -2.0])) == pytest.approx([1.0, 1.0])


def test_eval_horner_branch_matches_direct():
    rng = np.random.default_rng(1)
    T = TrigPoly.from_vector(rng.standard_normal(401), 200)
    t = np.linspace(-math.pi, math.pi, 30001)  # large enough for the Horner path
    direct = np.array([T(x) for x in t[::1000]])
    assert np.allclose(T(t)[::1000], direct, rtol=1e-11, atol=1e-11)


def test_derivative_examples():
    d = TrigPoly.cos(3).derivative()
    assert np.array_equal(d.b, [0, 0, 0, -3]) and not np.any(d.a)
    assert not np.any(TrigPoly.constant(5.0).derivative().a)
    dd = TrigPoly.cos(7).derivative().derivative()
    assert np.array_equal(dd.a, -49 * TrigPoly.cos(7).a)


@given(coeffs, coeffs)
def test_derivative_coefficient_map(a, b):
    T = TrigPoly(a, b)
    D = T.derivative()
    k = np.arange(len(D.a))
    assert np.array_equal(D.a, k * T.b) and np.array_equal(D.b, -k * T.a)


@given(coeffs, coeffs)
def test_interpolation_roundtrip(a, b):
    T = TrigPoly(a, b)
    R = interpolation_roundtrip(T)
    scale = max(1.0, float(np.max(np.abs(T.vector()))))
    assert np.allclose(R.vector(len(T.a) - 1), T.vector(), atol=1e-12 * scale)


@given(st.integers(0, 20), st.lists(st.floats(-5, 5), min_size=41, max_size=41))
def test_vector_roundtrip(n, v):
    v = np.array(v[: 2 * n + 1])
    assert np.array_equal(TrigPoly.from_vector(v, n).vector(n), v)


# Chebyshev

def test_chebyshev_eval_examples():
    assert chebyshev_eval(3, 0.5) == pytest.approx(-1.0, abs=1e-15)
    assert chebyshev_eval(17, 1.0) == 1.0
    assert chebyshev_eval(2, 2.0) == pytest.approx(7.0, rel=1e-15)


def test_chebyshev_eval_overflow():
    with pytest.raises(PolyweightError) as e:
        chebyshev_eval(10000, 2.0)
    assert e.value.code == "overflow"


def _mp_cheb_log(n, x):
    mpmath.mp.prec = 200
    x = mpmath.mpf(x)
    t0, t1 = mpmath.mpf(1), x
    for _ in range(n - 1):
        t0, t1 = t1, 2 * x * t1 - t0
    return float(mpmath.log(t1))


def test_chebyshev_log_eval_examples():
    lt, _ = chebyshev_log_eval(64, 2.0)
    assert lt == pytest.approx(_mp_cheb_log(64, 2.0), rel=1e-14)
    assert lt == pytest.approx(64 * math.log(2 + math.sqrt(3)) - math.log(2), rel=1e-14)
    assert math.exp(chebyshev_log_eval(10, 1.01)[0]) == pytest.approx(2.176, abs=1e-3)
    x = 1 + 1 / 25
    lt, ld = chebyshev_log_eval(5, x)
    assert math.exp(ld - lt) >= 5 / (4 * math.sqrt(x * x - 1))


def test_chebyshev_log_eval_domain():
    with pytest.raises(PolyweightError) as e:
        chebyshev_log_eval(3, 1.0)
    assert e.value.code == "domain"


def test_chebyshev_log_eval_near_one_series():
    for n in (3, 50, 1000):
        for d in (1e-9, 1e-12, 1e-15):
            xf = 1.0 + d
            lt, ld = chebyshev_log_eval(n, xf)
            mpmath.mp.prec = 200
            x = mpmath.mpf(xf)
            y = mpmath.acosh(x)
            assert lt == pytest.approx(float(mpmath.log(mpmath.cosh(n * y))), rel=1e-9, abs=1e-15)
            assert ld == pytest.approx(float(mpmath.log(n * mpmath.sinh(n * y) / mpmath.sinh(y))), rel=1e-9)


@given(st.integers(1, 50), st.floats(1e-6, 1.0))
def test_chebyshev_direct_vs_log(n, d):
    x = 1.0 + d
    assert math.exp(chebyshev_log_eval(n, x)[0]) == pytest.approx(chebyshev_eval(n, x), rel=1e-12)


def test_chebyshev_bounded_on_interval():
    rng = np.random.default_rng(0)
    for x in rng.uniform(-1, 1, 2000):
        n = int(rng.integers(0, 201))
        assert abs(chebyshev_eval(n, x)) <= 1 + 1e-12


def test_chebyshev_p4_bound():
    for n in np.unique(np.geomspace(3, 1e6, 60).astype(int)):
        assert math.exp(chebyshev_log_eval(int(n), 1 + 1 / n ** 2)[0]) <= 2.2
    # n^2 (x - 1) = 1 exactly, so the value sits near the limit cosh(sqrt 2)
    n = 2 ** 20
    assert math.exp(chebyshev_log_eval(n, 1 + 2.0 ** -40)[0]) == pytest.approx(math.cosh(math.sqrt(2)), rel=1e-9)


@given(st.integers(2, 400), st.floats(0.0, 4.0))
def test_chebyshev_p5_ratio(n, s):
    x = 1 + 1 / n ** 2 + s
    lt, ld = chebyshev_log_eval(n, x)
    assert math.exp(ld - lt) >= n / (4 * math.sqrt(x * x - 1)) * (1 - 1e-12)


# counterexample evaluator

def test_counterexample_examples():
    K, a = 40, 0.3
    Q = counterexample_evaluator(K, a)
    sg, lq = Q.signlog(np.array([0.0, math.pi / 2]))
    assert lq[0] == pytest.approx(chebyshev_log_eval(K, 1 + a * a)[0], rel=1e-14)
    assert sg[0] == 1.0
    assert math.exp(lq[1]) <= 1 + 1e-12
    assert abs(math.exp(lq[1]) - abs(chebyshev_eval(K, a * a))) < 1e-12
    _, ld = Q.deriv().signlog(np.array([0.0]))
    assert ld[0] == -math.inf


def test_counterexample_matches_direct_small_degree():
    K, a = 6, 0.4
    Q = counterexample_evaluator(K, a)
    t = np.linspace(-math.pi, math.pi, 401)
    x = 1 + a * a - np.sin(t) ** 2
    direct = np.cos(K * np.arccos(np.clip(x, -1, 1)))
    direct = np.where(x > 1, np.cosh(K * np.arccosh(np.maximum(x, 1))), direct)
    sg, lq = Q.signlog(t)
    vals = sg * np.exp(lq)
    keep = np.abs(direct) > 1e-280
    assert np.allclose(vals[keep], direct[keep], rtol=1e-10, atol=1e-12)


@given(st.integers(1, 5000), st.floats(0.01, 0.9), st.floats(-3.0, 3.0))
def test_counterexample_log_derivative(K, a, t):
    Q = counterexample_evaluator(K, a)
    h = 1e-4 / K
    ts = t + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    sg, lq = Q.signlog(ts)
    sd, ld = Q.deriv().signlog(ts[2:3])
    if not np.all(np.isfinite(lq)) or not np.isfinite(ld[0]) or np.any(sg != sg[2]):
        return
    fd = (lq[0] - 8 * lq[1] + 8 * lq[3] - lq[4]) / (12 * h)
    exact = sd[0] * sg[2] * math.exp(ld[0] - lq[2])
    if abs(exact) * h > 1e-3 or abs(exact) < 1e-3 * K:
        return  # too close to a zero of Q, or a flat spot where the difference is all rounding
    assert fd == pytest.approx(exact, rel=1e-5)


# partial sums

def test_partial_sum_examples():
    f = np.cos(5 * sample_grid(64))
    P = fourier_partial_sum(f, 8)
    assert np.allclose(P.vector(8), TrigPoly.cos(5).vector(8), atol=1e-14)
    Z = fourier_partial_sum(f, 4)
    assert np.allclose(Z.vector(4), 0.0, atol=1e-14)


def test_partial_sum_coefficient_matches_quadrature():
    w = omega("power", 1, "sin")
    P = fourier_partial_sum(np.exp(w.log(sample_grid(1 << 16))), 8)
    assert P.a[8] == pytest.approx(fourier_coefficient(w, 8), rel=1e-8)
    assert P.a[7] == pytest.approx(fourier_coefficient(w, 7), abs=1e-14)  # odd indices vanish


def test_partial_sum_constant_term_convention():
    f = 3.0 + np.cos(sample_grid(32))
    P = fourier_partial_sum(f, 2)
    assert P.a[0] == pytest.approx(3.0) and P.a[1] == pytest.approx(1.0)


def test_partial_sum_aliasing_warning():
    t = sample_grid(64)
    f = np.cos(30 * t)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        fourier_partial_sum(f, 4)
    assert any(issubclass(r.category, AliasingWarning) for r in rec)


def test_partial_sum_preconditions():
    with pytest.raises(PolyweightError):
        fourier_partial_sum(np.ones(8), 4)
    with pytest.raises(PolyweightError):
        fourier_partial_sum(np.array([1.0, np.nan, 0.0, 1.0]), 1)


def test_real_roots_of_cosine():
    r = np.sort(TrigPoly.cos(3).real_roots())
    expect = np.sort(np.array([(2 * k + 1) * math.pi / 6 for k in range(-3, 3)]))
    assert np.allclose(r, expect, atol=1e-14)
