"""Approximation of Omega-class weights by trigonometric polynomials.

Partial-sum errors, decay of Fourier coefficients against the x1 scale, and
the search for the degree multiplier K at which a weight and its partial sum
give equivalent polynomial norms.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingWarning, PolyweightError
from .quad import QuadConfig, _graded_points, fourier_coefficient_pair, weighted_norm
from .trigpoly import TrigPoly, as_evaluator, fourier_partial_sum, sample_grid
from .weights import (CompositeWeight, FunctionWeight, LogWeight, OmegaWeight, log_weight_deriv_array,
                      solve_x1, unit_weight)

CENSOR_LOG = -700.0


def _omega_and_derivative(w, t):
    if isinstance(w, TrigPoly):
        return w(t), w.derivative()(t)
    lw = w.log(t)
    val = np.exp(lw)
    with np.errstate(invalid="ignore", over="ignore"):
        d = val * log_weight_deriv_array(w, t)
    # at zeros of g the weight is flat to all orders
    return val, np.where(np.isfinite(d), d, 0.0)


def clean_partial_sum(func, n: int, N: int = 1 << 16, N_max: int = 1 << 21) -> tuple:
    """Partial sum of degree n from samples, doubling N until the spectrum is aliasing-clean."""
    while True:
        samples = func(sample_grid(N))
        with warnings.catch_warnings():
            warnings.simplefilter("error", AliasingWarning)
            try:
                return fourier_partial_sum(samples, n), N
            except AliasingWarning:
                if 2 * N > N_max:
                    raise PolyweightError("aliasing", f"spectrum not resolved with {N} samples")
        N *= 2


def _error_grid(w, n: int) -> np.ndarray:
    pts = [np.linspace(-math.pi, math.pi, 16 * n + 1)]
    for s in ([] if isinstance(w, TrigPoly) else w.singular_points()):
        pts.append(np.asarray(_graded_points(float(s), -math.pi, math.pi, 0.5, 40)))
    return np.unique(np.concatenate(pts))


def _log_max_abs(x) -> float:
    m = float(np.max(np.abs(x))) if len(x) else 0.0
    return math.log(m) if m > 0 else -math.inf


def partial_sum_error(w, n: int, N: int = 1 << 16) -> tuple:
    """(log max|w - w_n|, log max|w' - w_n'|) on a dense grid plus graded points at zeros of g.

    ``w`` is an OmegaWeight or, as a synthetic check, a positive TrigPoly taken as the weight itself.
    """
    if n < 8:
        raise PolyweightError("domain", "n must be >= 8")
    func = w if isinstance(w, TrigPoly) else (lambda t: np.exp(w.log(t)))
    Tn, _ = clean_partial_sum(func, n, N)
    t = _error_grid(w, n)
    val, der = _omega_and_derivative(w, t)
    e0 = _log_max_abs(val - Tn(t))
    e1 = _log_max_abs(der - Tn.derivative()(t))
    return e0, e1


# ---------------------------------------------------------------------------
# coefficient decay


@dataclass
class DecayRow:
    n: int
    coeff_log: float
    n_x1: float
    censored: bool


@dataclass
class DecayReport:
    rows: list
    c: float
    window: tuple
    window_ok: bool
    slack_ok: bool

    @property
    def passed(self) -> bool:
        return self.c > 0 and self.window_ok

    def bound_holds(self, c: float, rows=None) -> bool:
        rows = self.rows if rows is None else rows
        return all(r.coeff_log <= -c * r.n_x1 + 1e-9 for r in rows if not r.censored)


def decay_grid(n_min: int, n_max: int, divisor: int = 1, points: int = 17) -> list:
    """Geometric grid rounded to multiples of ``divisor`` (other indices vanish identically)."""
    raw = np.geomspace(n_min, n_max, points)
    ns = sorted({int(max(divisor, divisor * round(x / divisor))) for x in raw})
    return [n for n in ns if n_min <= n <= n_max] or [ns[0]]


def coefficient_log(w: LogWeight, n: int, cfg: QuadConfig | None = None) -> float:
    """log sqrt(a_n^2 + b_n^2)."""
    (_, la), (_, lb) = fourier_coefficient_pair(w, n, cfg)
    return float(0.5 * np.logaddexp(2 * la, 2 * lb))


def fourier_decay_report(w: OmegaWeight, n_min: int, n_max: int, points: int = 17,
                         x1=None, cfg: QuadConfig | None = None) -> DecayReport:
    """Fit c in |w_hat_n| <= exp(-c n x1(n)) on the upper half of a geometric n-grid.

    ``x1`` defaults to solve_x1 for the weight's F; pass a callable for
    products of several factors.
    """
    if n_min < 16 or n_max > 4096 or n_min > n_max:
        raise PolyweightError("domain", "need 16 <= n_min <= n_max <= 4096")
    x1 = x1 or (lambda n: solve_x1(w.f, n))
    ns = decay_grid(n_min, n_max, w.period_divisor, points)
    rows = []
    for n in ns:
        cl = coefficient_log(w, n, cfg)
        rows.append(DecayRow(n, cl, n * x1(n), bool(cl < CENSOR_LOG)))
    half = ns[len(ns) // 2]
    win = [r for r in rows if r.n >= half and not r.censored]
    if not win:
        return DecayReport(rows, -math.inf, (half, ns[-1]), False, False)
    c = min(-r.coeff_log / r.n_x1 for r in win)
    rep = DecayReport(rows, float(c), (half, ns[-1]), False, False)
    rep.window_ok = c > 0 and rep.bound_holds(c, win)
    rep.slack_ok = c > 0 and rep.bound_holds(c / 2)
    return rep


# ---------------------------------------------------------------------------
# norm equivalence with partial sums


@dataclass
class EquivalenceReport:
    K: int | None
    worst: dict = field(default_factory=dict)
    p: float = 1.0
    n: int = 0

    @property
    def found(self) -> bool:
        return self.K is not None

    def require(self) -> int:
        if self.K is None:
            worst = max(self.worst.values()) if self.worst else math.nan
            raise PolyweightError("not-found", f"no K up to cap; worst log-ratio {worst:.3g}")
        return self.K


def default_test_polys(n: int, count: int = 20, seed: int = 0) -> list:
    """cos kt for k <= n plus ``count`` polynomials with standard normal coefficients."""
    rng = np.random.default_rng(seed)
    polys = [TrigPoly.cos(k) for k in range(n + 1)]
    polys += [TrigPoly.from_vector(rng.standard_normal(2 * n + 1), n) for _ in range(count)]
    return polys


def _is_unit(u) -> bool:
    return isinstance(u, CompositeWeight) and not u.factors and u.u is None and u.log_scale == 0.0


def _grid_norm(vals: np.ndarray, p: float) -> float:
    """log of the L_p norm (sup at p = inf) of grid values, trapezoid rule."""
    a = np.abs(vals)
    if math.isinf(p):
        return _log_max_abs(a)
    with np.errstate(divide="ignore"):
        s = np.mean(a ** p) * 2 * math.pi
    return math.log(s) / p if s > 0 else -math.inf


def norm_equivalence_K(w: OmegaWeight, u: LogWeight | None, p: float, n: int, K_max: int = 64,
                       test_polys=None, N: int = 1 << 16, cfg: QuadConfig | None = None) -> EquivalenceReport:
    """Least K in {1, 2, 4, ..., K_max} with ||T||_{p, w u} within a factor 2 of ||T v_Kn||_{p, u}.

    v = w^(1/p) for finite p and v = w at p = inf; v_Kn is its partial sum of
    degree K n.
    """
    u = u or unit_weight()
    test_polys = test_polys if test_polys is not None else default_test_polys(n)
    for T in test_polys:
        if as_evaluator(T).degree > n:
            raise PolyweightError("domain", "test polynomial degree exceeds n")
    scale = 1.0 if math.isinf(p) else 1.0 / p
    wu = w * u
    ref = [weighted_norm(T, wu, p, None, cfg).log_value for T in test_polys]
    vfun = lambda t: np.exp(scale * w.log(t))
    unit = _is_unit(u)
    rep = EquivalenceReport(None, {}, p, n)
    K = 1
    while K <= K_max:
        m = K * n
        M = N
        while M // 2 <= m + n:
            M *= 2
        vK, _ = clean_partial_sum(vfun, m, M) if K == 1 else (fourier_partial_sum(vfun(sample_grid(M)), m, check=False), M)
        worst = 0.0
        if unit:
            t = sample_grid(M)
            vk_vals = vK(t)
            for T, r in zip(test_polys, ref):
                sg, lg = as_evaluator(T).signlog(t)
                worst = max(worst, abs(_grid_norm(sg * np.exp(lg) * vk_vals, p) - r))
        else:
            # |v_Kn|^p u under an L_p norm, |v_Kn| u under the sup norm
            pw = 1.0 if math.isinf(p) else p

            def lv(t, vK=vK):
                with np.errstate(divide="ignore"):
                    return pw * np.log(np.abs(vK(t))) + u.log(t)
            vw = FunctionWeight(lv, tuple(u.singular_points()), False)
            for T, r in zip(test_polys, ref):
                worst = max(worst, abs(weighted_norm(T, vw, p, None, cfg).log_value - r))
        rep.worst[K] = worst
        if worst <= math.log(2.0):
            rep.K = K
            return rep
        K *= 2
    return rep
