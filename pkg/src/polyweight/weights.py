"""Weight catalog: omega(t) = exp(-F(g(t))), composites, scales and singular sets.

All weight values are natural logarithms; ``-inf`` marks a zero of the weight.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import PolyweightError

TWO_PI = 2.0 * math.pi
FAMILIES = ("power", "power-log", "exp-power")
G_KINDS = ("sin", "cos", "sin-shift", "product-sin-cos")


def wrap_angle(t):
    """Map angles to [-pi, pi)."""
    return np.mod(np.asarray(t, dtype=float) + math.pi, TWO_PI) - math.pi


# ---------------------------------------------------------------------------
# F and g


@dataclass(frozen=True)
class FSpec:
    family: str
    alpha: float
    xi1: float = 0.0
    A: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PolyweightError("bad-spec", f"unknown F family {self.family!r}")
        if not self.alpha > 0 or not self.A > 0:
            raise PolyweightError("bad-spec", "alpha and A must be positive")

    @property
    def admissible(self) -> bool:
        return self.family != "exp-power"

    def log_F_u(self, u):
        """log F(e^u); exact in the log domain, so no overflow for exp-power."""
        u = np.asarray(u, dtype=float)
        if self.family == "power":
            return -self.alpha * u
        if self.family == "power-log":
            with np.errstate(divide="ignore"):
                return -self.alpha * u + self.xi1 * np.log(np.abs(u))
        with np.errstate(over="ignore"):
            return np.exp(-self.alpha * u)

    def log_F(self, x):
        with np.errstate(divide="ignore"):
            return self.log_F_u(np.log(np.asarray(x, dtype=float)))

    def F(self, x):
        with np.errstate(over="ignore"):
            return np.exp(self.log_F(x))

    def elasticity(self, x):
        """|F'(x)| x / F(x), i.e. -d log F / d log x."""
        u = np.log(np.asarray(x, dtype=float))
        if self.family == "power":
            return np.full_like(u, self.alpha)
        if self.family == "power-log":
            return self.alpha - self.xi1 / u
        with np.errstate(over="ignore"):
            return self.alpha * np.exp(-self.alpha * u)

    def dF(self, x):
        """F'(x) (negative on (0, A))."""
        x = np.asarray(x, dtype=float)
        return -self.elasticity(x) * self.F(x) / x

    def log_abs_dF(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(self.elasticity(x)) + self.log_F(x) - np.log(x)

    def contour_safe(self) -> bool:
        """True when F(w) has an analytic continuation off the positive axis."""
        if self.family == "power":
            return True
        if self.family == "power-log":
            return float(self.xi1).is_integer()
        return False

    def complex_F(self, w):
        w = np.asarray(w, dtype=complex)
        lw = np.log(w)
        val = np.exp(-self.alpha * lw)
        if self.family == "power-log" and self.xi1 != 0:
            val = val * (-lw) ** int(self.xi1)
        return val

    def token(self) -> str:
        if self.family == "power":
            return f"pow:{_num(self.alpha)}"
        if self.family == "power-log":
            return f"powlog:{_num(self.alpha)}:{_num(self.xi1)}"
        return f"exppow:{_num(self.alpha)}"


@dataclass(frozen=True)
class GSpec:
    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in G_KINDS:
            raise PolyweightError("bad-spec", f"unknown g kind {self.kind!r}")

    # g(t) = scale * sin(m t + phase)
    @property
    def _params(self):
        if self.kind == "sin":
            return 1.0, 1, 0.0
        if self.kind == "cos":
            return 1.0, 1, math.pi / 2
        if self.kind == "sin-shift":
            return 1.0, 1, -self.theta
        return 0.5, 2, 0.0

    @property
    def bound(self) -> float:
        return self._params[0]

    @property
    def deriv_bound(self) -> float:
        c, m, _ = self._params
        return c * m

    def g(self, t):
        if self.kind == "cos":
            # exact evenness, which sin(t + pi/2) loses to rounding
            return np.cos(np.asarray(t, dtype=float))
        c, m, ph = self._params
        return c * np.sin(m * np.asarray(t, dtype=float) + ph)

    def dg(self, t):
        if self.kind == "cos":
            return -np.sin(np.asarray(t, dtype=float))
        c, m, ph = self._params
        return c * m * np.cos(m * np.asarray(t, dtype=float) + ph)

    def complex_g(self, z):
        c, m, ph = self._params
        return c * np.sin(m * np.asarray(z, dtype=complex) + ph)

    @cached_property
    def zeros(self) -> tuple:
        c, m, ph = self._params
        pts = [(k * math.pi - ph) / m for k in range(-4 * m, 4 * m + 1)]
        out = sorted({round(float(wrap_angle(p)), 15) for p in pts})
        return tuple(out)

    @property
    def is_even(self) -> bool:
        # |g| even in t
        return self.kind in ("sin", "cos", "product-sin-cos") or (
            self.kind == "sin-shift" and math.isclose(math.sin(self.theta), 0.0, abs_tol=1e-15))

    @property
    def period_divisor(self) -> int:
        # |g| has period pi/m
        return 2 * self._params[1]

    def half_width(self, eps: float) -> float:
        """Half-length of each arc of {|g| < eps} around a zero."""
        c, m, _ = self._params
        if eps >= c:
            return math.inf
        return math.asin(eps / c) / m

    @property
    def measure_constant(self) -> float:
        # |B_eps| = 2 m * (2/m) asin(eps/c) <= 2 pi eps / c
        return 2 * math.pi / self.bound

    def token(self) -> str:
        if self.kind == "sin-shift":
            return f"sinshift:{_num(self.theta)}"
        if self.kind == "product-sin-cos":
            return "sincos"
        return self.kind


def _num(x: float) -> str:
    return repr(float(x)).rstrip("0").rstrip(".") if float(x) != int(x) else str(int(x))


# ---------------------------------------------------------------------------
# weights


class LogWeight:
    """Interface used by the quadrature code: log values plus singular points."""

    def log(self, t):
        raise NotImplementedError

    def singular_points(self) -> np.ndarray:
        return np.array([])

    @property
    def is_even(self) -> bool:
        return False

    @property
    def period_divisor(self) -> int:
        return 1

    def contour_angle(self, point: float) -> float:
        """Largest safe departure angle into the upper half plane at ``point``.

        Zero means the weight has no usable analytic continuation there.
        """
        return 0.0

    def complex_log(self, z, tmid: float):
        raise NotImplementedError

    def power(self, s: float) -> "LogWeight":
        return PowerWeight(self, float(s))

    def __mul__(self, other: "LogWeight") -> "LogWeight":
        return ProductWeight((self, other))


@dataclass(frozen=True, eq=False)
class OmegaWeight(LogWeight):
    f: FSpec
    g: GSpec

    def log(self, t):
        ag = np.abs(self.g.g(t))
        with np.errstate(divide="ignore", over="ignore"):
            out = -np.exp(self.f.log_F(ag))
        return np.where(ag == 0.0, -np.inf, out)

    def log_neg(self, t):
        """log(-log omega(t)) = log F(|g(t)|); finite even where omega underflows."""
        with np.errstate(divide="ignore"):
            return self.f.log_F(np.abs(self.g.g(t)))

    def singular_points(self):
        return np.array(self.g.zeros)

    @property
    def zeros(self):
        return self.g.zeros

    @property
    def is_even(self):
        return self.g.is_even

    @property
    def period_divisor(self):
        return self.g.period_divisor

    @cached_property
    def constants(self) -> tuple:
        return empirical_constants(self.f)

    def contour_angle(self, point):
        if not self.f.contour_safe():
            return 0.0 if _near_any(point, self.g.zeros) else math.pi / 3
        if _near_any(point, self.g.zeros):
            return math.pi / (2 * (self.f.alpha + 1))
        return math.pi / 3

    def complex_log(self, z, tmid):
        s = 1.0 if float(self.g.g(tmid)) > 0 else -1.0
        return -self.f.complex_F(s * self.g.complex_g(z))

    def token(self) -> str:
        return f"omega({self.f.token()},{self.g.token()})"


@dataclass(frozen=True, eq=False)
class Jacobi(LogWeight):
    """u(t) = |sin((t - theta)/2)|^gamma."""

    gamma: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.gamma > -1:
            raise PolyweightError("bad-spec", "jacobi exponent must exceed -1")

    def log(self, t):
        s = np.abs(np.sin((np.asarray(t, dtype=float) - self.theta) / 2))
        if self.gamma == 0:
            return np.zeros_like(s)
        with np.errstate(divide="ignore"):
            return self.gamma * np.log(s)

    def singular_points(self):
        if self.gamma == 0:
            return np.array([])
        return np.array([float(wrap_angle(self.theta))])

    @property
    def is_even(self):
        return self.gamma == 0 or math.isclose(math.sin(self.theta / 2), 0.0, abs_tol=1e-15)

    def contour_angle(self, point):
        return math.pi / 3

    def complex_log(self, z, tmid):
        s = 1.0 if math.sin((tmid - self.theta) / 2) > 0 else -1.0
        return self.gamma * np.log(s * np.sin((np.asarray(z, dtype=complex) - self.theta) / 2))

    def token(self) -> str:
        return f"jacobi({_num(self.gamma)},{_num(self.theta)})"


@dataclass(frozen=True, eq=False)
class CompositeWeight(LogWeight):
    """omega_1 * ... * omega_s * u * exp(log_scale)."""

    factors: tuple = ()
    u: Jacobi | None = None
    log_scale: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def _parts(self):
        return list(self.factors) + ([self.u] if self.u is not None else [])

    def log(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, float(self.log_scale))
        for part in self._parts():
            out = out + part.log(t)
        return out

    def singular_points(self):
        pts = [p for part in self._parts() for p in part.singular_points()]
        return _unique_angles(pts)

    @property
    def is_even(self):
        return all(p.is_even for p in self._parts())

    @property
    def period_divisor(self):
        d = 0
        for p in self._parts():
            d = math.gcd(d, p.period_divisor)
        return d or 1

    def contour_angle(self, point):
        return min([p.contour_angle(point) for p in self._parts()] + [math.pi / 3])

    def complex_log(self, z, tmid):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, complex(self.log_scale))
        for part in self._parts():
            out = out + part.complex_log(z, tmid)
        return out

    def scaled(self, c: float) -> "CompositeWeight":
        return CompositeWeight(self.factors, self.u, self.log_scale + math.log(c))

    def token(self) -> str:
        toks = [f.token() for f in self.factors]
        if self.u is not None:
            toks.append(self.u.token())
        return " * ".join(toks) if toks else "one"


@dataclass(frozen=True, eq=False)
class PowerWeight(LogWeight):
    base: LogWeight
    s: float

    def log(self, t):
        return self.s * self.base.log(t)

    def singular_points(self):
        return self.base.singular_points()

    @property
    def is_even(self):
        return self.base.is_even

    @property
    def period_divisor(self):
        return self.base.period_divisor

    def contour_angle(self, point):
        return self.base.contour_angle(point)

    def complex_log(self, z, tmid):
        return self.s * self.base.complex_log(z, tmid)


@dataclass(frozen=True, eq=False)
class ProductWeight(LogWeight):
    parts: tuple

    def log(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for p in self.parts:
            out = out + p.log(t)
        return out

    def singular_points(self):
        return _unique_angles([x for p in self.parts for x in p.singular_points()])

    @property
    def is_even(self):
        return all(p.is_even for p in self.parts)

    @property
    def period_divisor(self):
        d = 0
        for p in self.parts:
            d = math.gcd(d, p.period_divisor)
        return d or 1

    def contour_angle(self, point):
        return min(p.contour_angle(point) for p in self.parts)

    def complex_log(self, z, tmid):
        return sum(p.complex_log(z, tmid) for p in self.parts)


@dataclass(frozen=True, eq=False)
class FunctionWeight(LogWeight):
    """Arbitrary log-weight given by a vectorised callable (no contour support)."""

    func: object
    points: tuple = ()
    even: bool = False

    def log(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)

    def singular_points(self):
        return _unique_angles(list(self.points))

    @property
    def is_even(self):
        return self.even


def abs_sin_weight() -> LogWeight:
    """|sin t|, the Jacobian of x = cos t."""
    def f(t):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.sin(t)))
    return FunctionWeight(f, (0.0, -math.pi), True)


def unit_weight() -> CompositeWeight:
    return CompositeWeight()


def _near_any(x: float, pts, tol: float = 1e-12) -> bool:
    return any(abs(float(wrap_angle(x - p))) < tol for p in pts)


def _unique_angles(pts) -> np.ndarray:
    vals = sorted(float(wrap_angle(p)) for p in pts)
    out: list = []
    for v in vals:
        if not out or v - out[-1] > 1e-13:
            out.append(v)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] < 1e-13:
        out.pop()
    return np.array(out)


def omega(family: str, alpha: float, g: str = "sin", *, xi1: float = 0.0, theta: float = 0.0) -> OmegaWeight:
    """Shorthand constructor: ``omega("power", 1, "sin")``."""
    return OmegaWeight(FSpec(family, alpha, xi1), GSpec(g, theta))


def as_composite(w) -> CompositeWeight:
    if isinstance(w, CompositeWeight):
        return w
    if isinstance(w, OmegaWeight):
        return CompositeWeight((w,))
    if isinstance(w, Jacobi):
        return CompositeWeight((), w)
    raise TypeError(f"cannot convert {type(w).__name__} to CompositeWeight")


# ---------------------------------------------------------------------------
# point operations


def log_weight(w: LogWeight, t):
    """Natural log of the weight at t (array or scalar); -inf at zeros."""
    out = w.log(t)
    return float(out) if np.ndim(out) == 0 else out


def log_weight_deriv(w: OmegaWeight, t: float) -> float:
    """d/dt log omega(t) = -F'(|g(t)|) * sign(g(t)) * g'(t)."""
    if _near_any(t, w.g.zeros, 1e-15):
        raise PolyweightError("at-singularity", f"t={t!r} is a zero of g")
    gv = float(w.g.g(t))
    dgv = float(w.g.dg(t))
    return float(-w.f.dF(abs(gv))) * math.copysign(1.0, gv) * dgv


def log_weight_deriv_array(w: OmegaWeight, t) -> np.ndarray:
    """Vectorised derivative of log omega; nan at exact zeros of g."""
    gv = w.g.g(t)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return -w.f.dF(np.abs(gv)) * np.sign(gv) * w.g.dg(t)


# ---------------------------------------------------------------------------
# scale functions


def empirical_constants(f: FSpec, npts: int = 512) -> tuple:
    """(A1, A2) = (max, min) of |F'(x)| x / F(x) on a log grid in [1e-12, A]."""
    hi = f.A / 2 if f.family == "power-log" else f.A
    x = np.logspace(-12, math.log10(hi), npts)
    e = f.elasticity(x)
    return float(np.max(e)), float(np.min(e))


def envelope_constants(f: FSpec, npts: int = 512) -> tuple:
    """(c, C) with c x^-A2 <= F(x) <= C x^-A1 on the verification grid."""
    a1, a2 = empirical_constants(f, npts)
    hi = f.A / 2 if f.family == "power-log" else f.A
    u = np.linspace(math.log(1e-12), math.log(hi), npts)
    lf = f.log_F_u(u)
    return float(np.exp(np.min(lf + a2 * u))), float(np.exp(np.max(lf + a1 * u)))


def _bisect_u(h, lo: float, hi: float, iters: int = 200) -> float:
    """Root of a decreasing function h on [lo, hi] in the log variable u."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _solve_scale(f: FSpec, log_target: float, with_x: bool) -> float:
    def h(u):
        return float(f.log_F_u(u)) - log_target - (u if with_x else 0.0)

    hi = math.log(f.A)
    if h(hi) > 0:
        raise PolyweightError("no-bracket", "target below F(A)" + ("/A" if with_x else ""))
    lo = math.log(1e-300)
    while h(lo) < 0:
        lo *= 2
        if lo < -1e6:
            raise PolyweightError("no-bracket", "target too large")
    u = _bisect_u(h, lo, hi)
    x = math.exp(u)
    if x == 0.0:
        raise PolyweightError("no-bracket", "root underflows double precision")
    return x


def solve_x0(f: FSpec, n: float) -> float:
    """Unique x in (0, A] with F(x) = n."""
    if not n > 0:
        raise PolyweightError("no-bracket", "n must be positive")
    return _solve_scale(f, math.log(n), False)


def solve_x1(f: FSpec, n: float) -> float:
    """Unique x in (0, A] with F(x) = n x."""
    if not n > 0:
        raise PolyweightError("no-bracket", "n must be positive")
    return _solve_scale(f, math.log(n), True)


def solve_x1_array(f: FSpec, n) -> np.ndarray:
    """Vectorised solve_x1 (closed form for the power family)."""
    n = np.asarray(n, dtype=float)
    if f.family == "power":
        return n ** (-1.0 / (f.alpha + 1))
    return np.array([solve_x1(f, float(v)) for v in n.ravel()]).reshape(n.shape)


def lemma3_epsilon(f: FSpec) -> float:
    a1, a2 = empirical_constants(f)
    return 0.5 * min(1.0 / (1.0 + 2.0 * a1), a2 / (1.0 + a2))


def growth_exponent(f: FSpec, ns: Sequence[int]) -> float:
    """Largest a with n x1(n) >= n^a over ``ns``."""
    ns = np.asarray(ns, dtype=float)
    vals = ns * solve_x1_array(f, ns)
    return float(np.min(np.log(vals) / np.log(ns)))


# ---------------------------------------------------------------------------
# combinatorics and Fourier-degree helpers


def _partitions(k: int, largest: int):
    # multiplicity vectors as dicts part -> count
    if k == 0:
        yield {}
        return
    for part in range(min(k, largest), 0, -1):
        for count in range(k // part, 0, -1):
            for rest in _partitions(k - part * count, part - 1):
                d = dict(rest)
                d[part] = count
                yield d


def lemma0_sum(k: int) -> int:
    """Sum of k!/(m_1!...m_k!(k - sum m)!) over m_1 + 2 m_2 + ... + k m_k = k."""
    if k < 1:
        raise PolyweightError("domain", "k must be a positive integer")
    fk = math.factorial(k)
    total = 0
    for mult in _partitions(k, k):
        s = sum(mult.values())
        den = math.factorial(k - s)
        for c in mult.values():
            den *= math.factorial(c)
        total += fk // den
    return total


def optimal_fourier_k(f: FSpec, n: int, C: float, cap: int = 10 ** 9) -> int:
    """Minimal k with C k / (n x0(k)) > 1/e."""
    if not C > math.e:
        raise PolyweightError("domain", "C must exceed e")
    kmin = max(1, math.ceil(float(f.F(f.A))))

    def ok(k):
        return C * k / (n * solve_x0(f, k)) > 1 / math.e

    lo, hi = kmin, kmin
    if not ok(lo):
        while not ok(hi):
            lo = hi
            hi *= 2
            if hi > cap:
                raise PolyweightError("not-found", f"no k below {cap}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
    k = hi
    if k < n * solve_x1(f, n) / C ** 2:
        import warnings
        warnings.warn(f"optimal_fourier_k: k={k} below n x1(n)/C^2", RuntimeWarning)
    return k


@dataclass(frozen=True)
class TailCheck:
    lhs: float
    rhs: float
    passed: bool
    terms: int


def tail_sum_check(f: FSpec, n: int, c: float, max_terms: int = 10 ** 8) -> TailCheck:
    """Compare log sum_{v>=n} exp(-c v x1(v)) with -c n x1(n) / 2."""
    rhs = -c * n * solve_x1(f, n) / 2
    lhs = -math.inf
    start, size, used = n, 1024, 0
    while used < max_terms:
        v = np.arange(start, start + size, dtype=float)
        terms = -c * v * solve_x1_array(f, v)
        lhs = float(np.logaddexp(lhs, np.logaddexp.reduce(terms)))
        used += size
        start += size
        if terms[-1] < lhs - 50:
            break
        size *= 2
    return TailCheck(lhs, rhs, lhs <= rhs, used)


# ---------------------------------------------------------------------------
# interval sets on the circle


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of arcs; stored as disjoint sorted pieces inside [-pi, pi]."""

    arcs: tuple = ()

    @staticmethod
    def from_arcs(arcs) -> "IntervalSet":
        pieces = []
        for a, b in arcs:
            a, b = float(a), float(b)
            if b - a >= TWO_PI:
                return IntervalSet.full()
            if b <= a:
                continue
            a0 = float(wrap_angle(a))
            b0 = a0 + (b - a)
            if b0 <= math.pi:
                pieces.append((a0, b0))
            else:
                pieces.append((a0, math.pi))
                pieces.append((-math.pi, b0 - TWO_PI))
        pieces.sort()
        merged: list = []
        for a, b in pieces:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return IntervalSet(tuple(merged))

    @staticmethod
    def full() -> "IntervalSet":
        return IntervalSet(((-math.pi, math.pi),))

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.arcs))

    @property
    def is_full(self) -> bool:
        return self.measure >= TWO_PI * (1 - 1e-15)

    def complement(self) -> "IntervalSet":
        out, cur = [], -math.pi
        for a, b in self.arcs:
            if a > cur:
                out.append((cur, a))
            cur = max(cur, b)
        if cur < math.pi:
            out.append((cur, math.pi))
        return IntervalSet(tuple(out))

    def contains(self, t) -> np.ndarray:
        t = wrap_angle(t)
        inside = np.zeros(np.shape(t), dtype=bool)
        for a, b in self.arcs:
            inside |= (t >= a) & (t <= b)
        return inside

    def components(self) -> int:
        """Number of arcs once pieces meeting across t = pi are joined."""
        k = len(self.arcs)
        if k > 1 and self.arcs[0][0] <= -math.pi and self.arcs[-1][1] >= math.pi:
            return k - 1
        return k

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.from_arcs(list(self.arcs) + list(other.arcs))


def singular_set(g: GSpec, eps: float) -> IntervalSet:
    """B_eps = {t : |g(t)| < eps} from closed-form arcs around each zero."""
    if not eps > 0:
        raise PolyweightError("domain", "eps must be positive")
    h = g.half_width(eps)
    if not math.isfinite(h):
        return IntervalSet.full()
    return IntervalSet.from_arcs([(z - h, z + h) for z in g.zeros])


def widened_singular_set(g: GSpec, n: int, eps: float) -> IntervalSet:
    """One arc per zero of g, each of length max(natural length, 1/n)."""
    if n < 1:
        raise PolyweightError("domain", "n must be >= 1")
    h = max(g.half_width(eps), 0.5 / n)
    if not math.isfinite(h):
        return IntervalSet.full()
    return IntervalSet.from_arcs([(z - h, z + h) for z in g.zeros])


# ---------------------------------------------------------------------------
# doubling and A* probes (heuristic, finite resolution)


def _dyadic_log_masses(w: LogWeight, levels: int, cfg=None) -> list:
    from .quad import QuadConfig, log_integrate_cells

    cfg = cfg or QuadConfig()
    edges = np.linspace(-math.pi, math.pi, 2 ** levels + 1)
    fine = log_integrate_cells(w.log, edges, w.singular_points(), cfg)
    masses = [fine]
    for _ in range(levels):
        prev = masses[-1]
        masses.append(np.logaddexp(prev[0::2], prev[1::2]))
    return masses[::-1]  # masses[j] has 2^j cells


def doubling_ratio(w: LogWeight, resolution: int = 1024, cfg=None) -> float:
    """max W(2I)/W(I) over dyadic arcs I down to length 2 pi / resolution."""
    if resolution < 8:
        raise PolyweightError("domain", "resolution must be >= 8")
    levels = int(math.log2(resolution))
    masses = _dyadic_log_masses(w, levels, cfg)
    best = -math.inf
    for j in range(1, levels):
        cur, sub = masses[j], masses[j + 1]
        m = len(sub)
        idx = 2 * np.arange(len(cur))
        double = np.logaddexp.reduce(np.stack([sub[(idx + s) % m] for s in (-1, 0, 1, 2)]), axis=0)
        with np.errstate(invalid="ignore"):
            r = double - cur
        r = np.where(np.isneginf(cur), np.inf, r)
        best = max(best, float(np.max(r)))
    return float(math.exp(best)) if best < 709 else math.inf


def astar_constant(w: LogWeight, resolution: int = 1024, cfg=None, samples: int = 8) -> float:
    """max omega(t) |I| / W(I) over dyadic arcs I and sampled t in I."""
    if resolution < 8:
        raise PolyweightError("domain", "resolution must be >= 8")
    levels = int(math.log2(resolution))
    masses = _dyadic_log_masses(w, levels, cfg)
    m = 2 ** levels
    h = TWO_PI / m
    t = -math.pi + h * (np.arange(m)[:, None] + np.linspace(0, 1, samples + 1)[None, :])
    peak = np.max(w.log(t), axis=1)
    best = -math.inf
    for j in range(0, levels + 1):
        k = 2 ** (levels - j)
        pk = np.max(peak.reshape(-1, k), axis=1)
        length = math.log(TWO_PI / 2 ** j)
        with np.errstate(invalid="ignore"):
            r = pk + length - masses[j]
        r = np.where(np.isneginf(masses[j]), np.inf, r)
        best = max(best, float(np.nanmax(r)))
    return float(math.exp(best)) if best < 709 else math.inf


# ---------------------------------------------------------------------------
# weight-spec mini language

_FAMILY_TOKENS = {"pow": "power", "powlog": "power-log", "exppow": "exp-power"}
_G_TOKENS = {"sin": "sin", "cos": "cos", "sincos": "product-sin-cos",
             "product-sin-cos": "product-sin-cos", "sinshift": "sin-shift"}
_TERM = re.compile(r"\s*(omega|jacobi|one)\s*(\(([^()]*)\))?\s*")


def parse_weight(spec: str) -> CompositeWeight:
    """Parse e.g. ``omega(pow:2,sin) * omega(powlog:1:0.5,cos) * jacobi(0.5,0)``."""
    factors, u = [], None
    seen_u = False
    for part in _split_top(spec):
        start, text = part
        m = _TERM.fullmatch(text)
        if not m:
            raise PolyweightError("parse", f"column {start + 1}: cannot parse term {text.strip()!r}")
        name, args = m.group(1), m.group(3)
        col = start + 1
        if name in ("jacobi", "one"):
            if seen_u:
                raise PolyweightError("parse", f"column {col}: at most one jacobi/one term")
            seen_u = True
            if name == "one":
                if args is not None:
                    raise PolyweightError("parse", f"column {col}: 'one' takes no arguments")
                continue
            vals = _floats(args, col, 2)
            u = Jacobi(vals[0], vals[1])
            continue
        if args is None:
            raise PolyweightError("parse", f"column {col}: omega needs arguments")
        fam_txt, _, g_txt = args.partition(",")
        fparts = fam_txt.strip().split(":")
        fam = _FAMILY_TOKENS.get(fparts[0])
        if fam is None:
            raise PolyweightError("parse", f"column {col}: unknown family {fparts[0]!r}")
        nums = _floats(":".join(fparts[1:]).replace(":", ","), col, 2 if fam == "power-log" else 1)
        gparts = g_txt.strip().split(":")
        kind = _G_TOKENS.get(gparts[0])
        if kind is None:
            raise PolyweightError("parse", f"column {col}: unknown g {gparts[0]!r}")
        theta = _floats(gparts[1], col, 1)[0] if kind == "sin-shift" else 0.0
        f = FSpec(fam, nums[0], nums[1] if fam == "power-log" else 0.0)
        factors.append(OmegaWeight(f, GSpec(kind, theta)))
    return CompositeWeight(tuple(factors), u)


def _split_top(spec: str):
    out, depth, start = [], 0, 0
    for i, ch in enumerate(spec):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append((start, spec[start:i]))
            start = i + 1
    out.append((start, spec[start:]))
    if not spec.strip():
        raise PolyweightError("parse", "column 1: empty weight spec")
    return out


def _floats(text, col: int, count: int) -> list:
    try:
        vals = [float(x) for x in (text or "").split(",") if x.strip() != ""]
    except ValueError:
        raise PolyweightError("parse", f"column {col}: bad number in {text!r}") from None
    if len(vals) != count:
        raise PolyweightError("parse", f"column {col}: expected {count} numbers, got {text!r}")
    return vals
