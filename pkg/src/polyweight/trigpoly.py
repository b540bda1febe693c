"""Trigonometric polynomials, Chebyshev evaluation on and off [-1, 1], and
pointwise evaluators for high-degree Chebyshev compositions.

Values that can leave the floating range are carried as (sign, log|value|).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AliasingWarning, PolyweightError


def _signlog(v):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        return np.sign(v), np.log(np.abs(v))


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """a[0] + sum_k (a[k] cos kt + b[k] sin kt), k = 1..n; b[0] is always 0."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float)).copy()
        b = np.atleast_1d(np.asarray(self.b, dtype=float)).copy()
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        b[0] = 0.0
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degree(self) -> int:
        nz = np.nonzero((self.a != 0) | (self.b != 0))[0]
        return int(nz[-1]) if len(nz) else 0

    @staticmethod
    def cos(k: int, c: float = 1.0) -> "TrigPoly":
        a = np.zeros(k + 1)
        a[k] = c
        return TrigPoly(a, np.zeros(k + 1))

    @staticmethod
    def sin(k: int, c: float = 1.0) -> "TrigPoly":
        b = np.zeros(k + 1)
        b[k] = c
        return TrigPoly(np.zeros(k + 1), b)

    @staticmethod
    def constant(c: float) -> "TrigPoly":
        return TrigPoly([c], [0.0])

    @staticmethod
    def from_vector(v, n: int) -> "TrigPoly":
        """Inverse of ``vector``: [a0, a1, b1, ..., an, bn]."""
        v = np.asarray(v, dtype=float)
        a = np.concatenate([[v[0]], v[1::2][:n]])
        b = np.concatenate([[0.0], v[2::2][:n]])
        return TrigPoly(a, b)

    def vector(self, n: int | None = None) -> np.ndarray:
        n = len(self.a) - 1 if n is None else n
        a = np.pad(self.a, (0, max(0, n + 1 - len(self.a))))[: n + 1]
        b = np.pad(self.b, (0, max(0, n + 1 - len(self.b))))[: n + 1]
        out = np.empty(2 * n + 1)
        out[0] = a[0]
        out[1::2] = a[1:]
        out[2::2] = b[1:]
        return out

    def __call__(self, t):
        return eval_trig(self, t)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        n = max(len(self.a), len(other.a))
        pad = lambda x: np.pad(x, (0, n - len(x)))
        return TrigPoly(pad(self.a) + pad(other.a), pad(self.b) + pad(other.b))

    def __mul__(self, c: float) -> "TrigPoly":
        return TrigPoly(self.a * c, self.b * c)

    __rmul__ = __mul__

    def derivative(self) -> "TrigPoly":
        return derivative(self)

    def real_roots(self, density: int = 32) -> np.ndarray:
        """Sign changes on a grid of density * degree cells, bisected to full precision."""
        n = max(self.degree, 1)
        grid = np.linspace(-math.pi, math.pi, density * n + 1)
        v = eval_trig(self, grid)
        idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
        lo, hi = grid[idx], grid[idx + 1]
        slo = np.sign(v[idx])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            same = np.sign(eval_trig(self, mid)) == slo
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        return 0.5 * (lo + hi)

    # PointEvaluator protocol
    def signlog(self, t):
        return _signlog(eval_trig(self, t))

    def deriv(self) -> "TrigPoly":
        return derivative(self)

    @property
    def hints(self) -> np.ndarray:
        return np.array([])


def eval_trig(T: TrigPoly, t):
    """a0 + sum(a_k cos kt + b_k sin kt); vectorised over t."""
    t = np.asarray(t, dtype=float)
    n = len(T.a) - 1
    flat = t.ravel()
    if n == 0:
        return np.full(t.shape, T.a[0]) if t.ndim else float(T.a[0])
    if flat.size * n <= 4_000_000:
        k = np.arange(1, n + 1)
        kt = np.multiply.outer(flat, k)
        val = T.a[0] + np.cos(kt) @ T.a[1:] + np.sin(kt) @ T.b[1:]
    else:
        # Horner in z = e^{it} on the coefficients c_k = a_k - i b_k
        z = np.exp(1j * flat)
        c = T.a - 1j * T.b
        acc = np.full(flat.shape, c[n], dtype=complex)
        for k in range(n - 1, 0, -1):
            acc = acc * z + c[k]
        val = T.a[0] + (acc * z).real
    val = val.reshape(t.shape)
    return float(val) if t.ndim == 0 else val


def derivative(T: TrigPoly) -> TrigPoly:
    """Exact coefficient map (a_k, b_k) -> (k b_k, -k a_k)."""
    k = np.arange(len(T.a), dtype=float)
    return TrigPoly(k * T.b, -k * T.a)


# ---------------------------------------------------------------------------
# Chebyshev polynomials


def chebyshev_eval(n: int, x: float) -> float:
    """T_n(x): three-term recurrence on [-1, 1], closed form outside."""
    if n < 0:
        raise PolyweightError("domain", "n must be nonnegative")
    x = float(x)
    if abs(x) <= 1.0:
        if n == 0:
            return 1.0
        t0, t1 = 1.0, x
        for _ in range(n - 1):
            t0, t1 = t1, 2.0 * x * t1 - t0
        return t1
    ax = abs(x)
    s = math.sqrt((ax - 1.0) * (ax + 1.0))
    try:
        val = 0.5 * ((ax + s) ** n + (ax - s) ** n)
    except OverflowError:
        val = math.inf
    if not math.isfinite(val):
        raise PolyweightError("overflow", f"T_{n}({x}) exceeds the floating range")
    return val if (x > 0 or n % 2 == 0) else -val


def _acosh1p(d):
    """arccosh(1 + d) for d > 0, with the series branch for tiny d."""
    d = np.asarray(d, dtype=float)
    with np.errstate(invalid="ignore"):
        direct = np.log1p(d + np.sqrt(d * (2.0 + d)))
        series = np.sqrt(2.0 * d) * (1.0 - d / 12.0)
    return np.where(d < 1e-8, series, direct)


def _log_cosh(y):
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def _log_sinh(y):
    with np.errstate(divide="ignore"):
        return y + np.log(-np.expm1(-2.0 * y)) - math.log(2.0)


def chebyshev_log_from_delta(n: int, d):
    """(log T_n(1+d), log T_n'(1+d)) for d > 0, accurate for tiny d."""
    d = np.asarray(d, dtype=float)
    eta = _acosh1p(d)
    log_t = _log_cosh(n * eta)
    # T_n' = n sinh(n eta) / sinh(eta); sinh(eta) = sqrt(d (2 + d))
    with np.errstate(divide="ignore"):
        log_s = 0.5 * (np.log(d) + np.log1p(d / 2.0) + math.log(2.0))
    log_tp = math.log(n) + _log_sinh(n * eta) - log_s
    return log_t, log_tp


def chebyshev_log_eval(n: int, x: float) -> tuple:
    """(log T_n(x), log T_n'(x)) for x > 1 without overflow."""
    if n < 1:
        raise PolyweightError("domain", "n must be positive")
    x = float(x)
    if not x > 1.0:
        raise PolyweightError("domain", "x must exceed 1")
    lt, ltp = chebyshev_log_from_delta(n, x - 1.0)
    lt, ltp = float(lt), float(ltp)
    if x > 1.0 + 1.0 / n ** 2:
        s = math.sqrt((x - 1.0) * (x + 1.0))
        if ltp - lt < math.log(n / (4.0 * s)) - 1e-12:
            raise PolyweightError("domain", "derivative ratio check failed")
    return lt, ltp


def chebyshev_inside(n: int, delta):
    """(sign, log|T_n|, sign, log|T_n'|) at x = 1 - delta with 0 <= delta <= 2."""
    delta = np.asarray(delta, dtype=float)
    theta = 2.0 * np.arcsin(np.sqrt(np.clip(delta, 0.0, 2.0) / 2.0))
    s_t, l_t = _signlog(np.cos(n * theta))
    sin_t = np.sin(theta)
    small = sin_t < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, float(n), np.sin(n * theta) / np.where(small, 1.0, sin_t))
    s_d, l_d = _signlog(n * ratio)
    return s_t, l_t, s_d, l_d


# ---------------------------------------------------------------------------
# pointwise evaluators


@dataclass(frozen=True, eq=False)
class PointEvaluator:
    """Degree-K trig polynomial known only through sign/log evaluation."""

    degree: int
    value: object
    derivative_value: object | None = None
    hint_points: tuple = ()

    def signlog(self, t):
        return self.value(np.asarray(t, dtype=float))

    def deriv(self) -> "PointEvaluator":
        if self.derivative_value is None:
            raise PolyweightError("domain", "no derivative available")
        return PointEvaluator(self.degree, self.derivative_value, None, self.hint_points)

    @property
    def hints(self) -> np.ndarray:
        return np.asarray(self.hint_points, dtype=float)


def as_evaluator(T):
    if isinstance(T, (TrigPoly, PointEvaluator)):
        return T
    raise TypeError(f"expected TrigPoly or PointEvaluator, got {type(T).__name__}")


def counterexample_evaluator(K: int, a: float, hint_count: int = 2048) -> PointEvaluator:
    """Q(t) = T_K(1 + a^2 - sin^2 t) and Q'(t) = -T_K'(.) sin 2t in sign/log form."""
    if K < 1 or not 0 < a < 1:
        raise PolyweightError("domain", "need K >= 1 and 0 < a < 1")

    def parts(t):
        st = np.abs(np.sin(t))
        # argument minus one, computed without cancellation
        d = (a - st) * (a + st)
        out = d > 0
        lt = np.empty_like(st)
        sg = np.ones_like(st)
        ld = np.empty_like(st)
        sd = np.ones_like(st)
        if np.any(out):
            lt[out], ld[out] = chebyshev_log_from_delta(K, d[out])
        ins = ~out
        if np.any(ins):
            s1, l1, s2, l2 = chebyshev_inside(K, -d[ins])
            sg[ins], lt[ins], sd[ins], ld[ins] = s1, l1, s2, l2
        return sg, lt, sd, ld

    def value(t):
        sg, lt, _, _ = parts(t)
        return sg, lt

    def dvalue(t):
        _, _, sd, ld = parts(t)
        s2 = np.sin(2.0 * t)
        with np.errstate(divide="ignore"):
            return -sd * np.sign(s2), ld + np.log(np.abs(s2))

    # the peak lives in |sin t| < a; sample it densely near both zeros of sin
    h = np.arcsin(min(1.0, 1.05 * a))
    base = np.linspace(0.0, h, hint_count)
    hints = np.concatenate([base, -base, math.pi - base, base - math.pi])
    return PointEvaluator(K, value, dvalue, tuple(hints))


# ---------------------------------------------------------------------------
# Fourier partial sums from samples


def sample_grid(N: int) -> np.ndarray:
    """Equispaced grid t_j = -pi + 2 pi j / N."""
    return -math.pi + 2.0 * math.pi * np.arange(N) / N


def fourier_partial_sum(samples, n: int, check: bool = True) -> TrigPoly:
    """Degree-n partial Fourier sum from 2M equispaced samples on [-pi, pi).

    Coefficients follow a_k = (1/pi) int f cos kt; the constant term is a_0/2.
    """
    f = np.asarray(samples, dtype=float)
    N = len(f)
    if N % 2 or N // 2 <= n:
        raise PolyweightError("domain", "need 2M samples with M > n")
    if not np.all(np.isfinite(f)):
        raise PolyweightError("domain", "samples must be finite")
    c = np.fft.rfft(f) / N
    c = c * np.where(np.arange(len(c)) % 2, -1.0, 1.0)  # grid starts at -pi
    if check:
        energy = np.abs(c) ** 2
        tot = energy.sum()
        top = energy[int(0.75 * (N // 2)):].sum()
        if tot > 0 and top / tot > 1e-10:
            warnings.warn(f"top quarter of spectrum holds {top / tot:.2e} of the energy",
                          AliasingWarning, stacklevel=2)
    a = 2.0 * c.real[: n + 1]
    b = -2.0 * c.imag[: n + 1]
    a[0] = c.real[0]
    return TrigPoly(a, b)


def interpolation_roundtrip(T: TrigPoly) -> TrigPoly:
    """Recover T from its values on 2n+2 equispaced points."""
    n = len(T.a) - 1
    N = 2 * n + 2
    vals = eval_trig(T, sample_grid(N))
    c = np.fft.rfft(vals) / N
    c = c * np.where(np.arange(len(c)) % 2, -1.0, 1.0)
    a = 2.0 * c.real[: n + 1]
    b = -2.0 * c.imag[: n + 1]
    a[0] = c.real[0]
    # the Nyquist cosine (k = n+1) is not present; sine at k=n is exact
    return TrigPoly(a, b)
