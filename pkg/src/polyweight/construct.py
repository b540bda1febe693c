"""Constructions behind the negative results.

Degree schedules for the Chebyshev-type polynomials T_K(1 + a^2 - sin^2 t),
measurement of the resulting Bernstein ratios, and a staircase weight whose
Bernstein inequality holds only along a sparse sequence of degrees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.optimize

from .errors import PolyweightError
from .quad import QuadConfig, _gauss, weighted_norm
from .trigpoly import PointEvaluator, TrigPoly, counterexample_evaluator
from .extremal import fejer_kernel
from .weights import LogWeight, OmegaWeight, wrap_angle

K_CAP = 10 ** 8


# ---------------------------------------------------------------------------
# xi = log omega on the increasing branch next to a zero


@dataclass(frozen=True)
class XiFunction:
    """xi(y) = log omega(t0 + y) for 0 < y < eps, with t0 a zero of g."""

    weight: OmegaWeight
    t0: float = 0.0

    def __post_init__(self):
        if not any(abs(float(wrap_angle(self.t0 - z))) < 1e-12 for z in self.weight.g.zeros):
            raise PolyweightError("domain", "t0 must be a zero of g")

    @property
    def eps(self) -> float:
        _, m, _ = self.weight.g._params
        return math.pi / (2 * m)

    def abs_g(self, y):
        # exact local form: |g(t0 + y)| = c |sin(m y)|, free of rounding at t0
        c, m, _ = self.weight.g._params
        return c * np.abs(np.sin(m * np.asarray(y, dtype=float)))

    def log_neg(self, y):
        """log(-xi(y))."""
        with np.errstate(divide="ignore"):
            return self.weight.f.log_F(self.abs_g(y))

    def __call__(self, y):
        with np.errstate(over="ignore"):
            return -np.exp(self.log_neg(y))

    def sampled_check(self, samples: int = 64) -> bool:
        """xi negative and increasing on (0, eps), tending to -inf at 0+."""
        y = np.geomspace(1e-8 * self.eps, 0.999 * self.eps, samples)
        ln = self.log_neg(y)
        return bool(np.all(np.diff(ln) < 0) and ln[0] > math.log(1e3))


def solve_lemma_m(xi: XiFunction, M: float) -> float:
    """The unique y in (0, eps) with xi(y) = -M y."""
    if not M > 0:
        raise PolyweightError("no-bracket", "M must be positive")
    lM = math.log(M)
    # phi decreases in u = log y; its root is the solution
    phi = lambda u: float(xi.log_neg(math.exp(u))) - lM - u
    hi = math.log(xi.eps)
    if phi(hi) >= 0:
        raise PolyweightError("no-bracket", "-M eps >= xi(eps): M too small")
    lo = math.log(1e-300)
    if phi(lo) <= 0:
        raise PolyweightError("no-bracket", "no sign change above 1e-300")
    u = scipy.optimize.brentq(phi, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(u)


def lemma_m_residual(xi: XiFunction, M: float, y: float) -> float:
    """|xi(y) + M y| / (M y), computed as |exp(log(-xi) - log(M y)) - 1|."""
    return abs(math.expm1(float(xi.log_neg(y)) - math.log(M * y)))


# ---------------------------------------------------------------------------
# schedules


@dataclass
class ScheduleRow:
    n: int
    lam: float
    a: float
    z: float
    K: int | None = None
    K_log: float | None = None
    feasible: bool = True
    diagnostics: dict = field(default_factory=dict)


@dataclass
class Schedule:
    rows: list
    weight: OmegaWeight
    kind: str
    p: float = math.inf


def _ratio_growth_ok(xi: XiFunction, r: float = 0.5) -> bool:
    """Sampled check that log omega(r t) / log omega(t) grows as t -> 0+."""
    y = np.geomspace(1e-4 * xi.eps, 0.5 * xi.eps, 24)
    ratio = xi.log_neg(r * y) - xi.log_neg(y)
    return bool(np.all(np.diff(ratio) < 1e-12) and ratio[0] > ratio[-1] + 1.0)


def neg_schedule(w: OmegaWeight, n_list, p: float = math.inf, t0: float = 0.0,
                 r_values=(0.5, 0.9)) -> Schedule:
    """a_n for the degree-n construction with lambda_n = sqrt(1 - n^(-1/2)).

    p = inf: z_n solves xi(z) = -(1/2) n z sqrt(1 - lambda_n^2), a_n = z_n / lambda_n.
    p < inf: y_n solves xi(y) = -p n lambda_n a_n (1 - lambda_n^2) with
    y_n = (2 lambda_n - 1) a_n.
    """
    xi = XiFunction(w, t0)
    if not _ratio_growth_ok(xi):
        raise PolyweightError("domain", "weight does not decay fast enough at its zero")
    rows = []
    for n in n_list:
        lam = math.sqrt(1.0 - n ** -0.5)
        s = math.sqrt(1.0 - lam * lam)
        if math.isinf(p):
            M = 0.5 * n * s
            z = solve_lemma_m(xi, M)
            a = z / lam
            lz = float(xi.log_neg(z))
            diag = {"M": M, "residual": lemma_m_residual(xi, M, z),
                    "p13": n * lam * a * s - math.exp(lz)}
            for r in r_values:
                diag[f"p14_r{r}"] = 2 * n * a - math.exp(float(xi.log_neg(r * a)))
        else:
            k = 2 * lam - 1
            M = p * n * lam * (1 - lam * lam) / k
            z = solve_lemma_m(xi, M)
            a = z / k
            diag = {"M": M, "residual": lemma_m_residual(xi, M, z),
                    "p131": p * n * lam * a * s + math.log(1 - lam) + math.log(a) - math.exp(float(xi.log_neg(z)))}
            for r in r_values:
                diag[f"p141_r{r}"] = 2 * p * n * a - math.exp(float(xi.log_neg(r * a)))
        try:
            h = solve_lemma_m(xi, math.sqrt(n))
            diag["h"] = h
            diag["z_below_h"] = z < h
        except PolyweightError:
            diag["h"] = math.nan
            diag["z_below_h"] = False
        rows.append(ScheduleRow(int(n), lam, a, z, None, None, True, diag))
    return Schedule(rows, w, "neg", p)


def _ww1_log_ratio(xi: XiFunction, n: int, c: float) -> float:
    """log(xi((1 - 1/n) c) / xi(c))."""
    return float(xi.log_neg((1 - 1 / n) * c) - xi.log_neg(c))


def neg11_schedule(w: OmegaWeight, n_list, K_cap: int = K_CAP, t0: float = 0.0) -> Schedule:
    """lambda_n = 1 - 1/n, c_n from the ratio condition with margin 2, K_n = 2 [-xi(c_n) / (lambda_n a_n sqrt(1 - lambda_n^2))]."""
    xi = XiFunction(w, t0)
    rows = []
    c_prev = 0.5 * xi.eps
    for n in sorted(int(n) for n in n_list):
        if n < 2:
            raise PolyweightError("domain", "n must be >= 2")
        target = math.log(2.0 * n * n)
        g = lambda lc: _ww1_log_ratio(xi, n, math.exp(lc)) - target
        hi = math.log(c_prev)
        if g(hi) >= 0:
            lc = hi
        else:
            lo = hi
            while g(lo) < 0:
                lo -= 1.0
                if lo < math.log(1e-300):
                    raise PolyweightError("no-bracket", f"ratio condition unreachable at n={n}")
            # largest c satisfying the condition: g(lo) >= 0 > g(hi)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid in (lo, hi):
                    break
                if g(mid) >= 0:
                    lo = mid
                else:
                    hi = mid
            lc = lo
        c = math.exp(lc)
        lam = 1.0 - 1.0 / n
        a = c / lam
        s = math.sqrt(1.0 - lam * lam)
        K_log = float(xi.log_neg(c)) - math.log(lam * a * s)
        K = 2 * int(math.floor(math.exp(K_log))) if K_log < 700 else None
        feasible = K is not None and 1 <= K <= K_cap
        diag = {"c": c, "ww1_margin_log": _ww1_log_ratio(xi, n, c) - math.log(n * n),
                "xi_c_log_neg": float(xi.log_neg(c))}
        rows.append(ScheduleRow(n, lam, a, c, K, K_log + math.log(2.0), feasible, diag))
        c_prev = c
    return Schedule(rows, w, "neg11")


@dataclass
class DivergenceRow:
    n: int
    K: int
    R: float
    LB: float
    b_over_a: float
    R_log: float
    ok: bool


def _fold(b: float) -> float:
    """Distance from b to the nearest zero of sin."""
    b = abs(float(wrap_angle(b)))
    return min(b, math.pi - b)


def divergence_report(w: LogWeight, s: Schedule, p: float = math.inf,
                      cfg: QuadConfig | None = None, skip_infeasible: bool = True) -> list:
    """Ratios ||Q'||_{p,w} / (K ||Q||_{p,w}) for Q = T_K(1 + a^2 - sin^2 t) along a schedule."""
    out = []
    for row in s.rows:
        if not row.feasible:
            if skip_infeasible:
                continue
            raise PolyweightError("infeasible-degree", f"K_n too large at n={row.n}")
        K = row.K if row.K is not None else row.n
        Q = counterexample_evaluator(K, row.a)
        nq = weighted_norm(Q, w, p, None, cfg)
        nd = weighted_norm(Q.deriv(), w, p, None, cfg)
        R_log = nd.log_value - math.log(K) - nq.log_value
        LB, ba = math.nan, math.nan
        if math.isinf(p) and nq.argmax is not None:
            b = _fold(nq.argmax)
            d = (row.a - math.sin(b)) * (row.a + math.sin(b))
            if d > 0:
                LB = abs(math.sin(2 * b)) / (4 * math.sqrt(d * (2 + d)))
            ba = b / row.a
        R = math.exp(R_log)
        ok = not (LB == LB) or R >= LB - 1e-9
        out.append(DivergenceRow(row.n, K, R, LB, ba, R_log, ok))
    return out


# ---------------------------------------------------------------------------
# staircase weight


class _Bridge:
    """W(x) = int_0^{pi x} exp(-1/sin^2 s) ds / int_0^pi exp(-1/sin^2 s) ds."""

    def __init__(self, cells: int = 2048, nodes: int = 16):
        self.cells = cells
        self.nodes = nodes
        edges = np.linspace(0.0, 1.0, cells + 1)
        self.edges = edges
        inc = self._gl(edges[:-1], edges[1:])
        self.cum = np.concatenate([[0.0], np.cumsum(inc)])
        self.total = self.cum[-1]

    @staticmethod
    def density(x):
        s = np.sin(math.pi * np.asarray(x, dtype=float))
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(s > 0, np.exp(-1.0 / (s * s)), 0.0)

    def _gl(self, lo, hi):
        x, gw, _ = _gauss(self.nodes)
        lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
        half = 0.5 * (hi - lo)
        pts = (0.5 * (hi + lo))[..., None] + half[..., None] * x
        return np.sum(self.density(pts) * gw, axis=-1) * half

    def __call__(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        # the density is symmetric about 1/2, so W(x) = 1 - W(1 - x); use the smaller side
        lower = x <= 0.5
        y = np.where(lower, x, 1.0 - x)
        j = np.minimum((y * self.cells).astype(int), self.cells - 1)
        part = (self.cum[j] + self._gl(self.edges[j], y)) / self.total
        return np.where(lower, part, 1.0 - part), np.where(lower, 1.0 - part, part)


@dataclass(frozen=True, eq=False)
class StaircaseWeight(LogWeight):
    """Even weight with flat levels log d_n = -exp(gamma n^2) joined by smooth bridges.

    Levels start at n0, the first index after which alpha_n < alpha_{n-1}/2
    for all n; the level below is pinned to d = 1 at alpha = 1 so the weight
    is continuous, equal to 1 on [1, pi].
    """

    gamma: float = 0.05
    n_max: int = 12

    def __post_init__(self):
        if not self.gamma > 0:
            raise PolyweightError("domain", "gamma must be positive")

    @cached_property
    def n0(self) -> int:
        n = 1
        for m in range(1, self.n_max + 1):
            if not self._separated(m):
                n = m + 1
        return n

    def _separated(self, m: int) -> bool:
        prev = 0.0 if m == 1 else self.log_alpha_raw(m - 1)
        return self.log_alpha_raw(m) <= prev - math.log(2.0)

    def log_d_raw(self, n: int) -> float:
        return -math.exp(self.gamma * n * n)

    def log_alpha_raw(self, n: int) -> float:
        return 2.0 * self.log_d_raw(n)

    def log_d(self, n: int) -> float:
        return 0.0 if n < self.n0 else self.log_d_raw(n)

    def log_alpha(self, n: int) -> float:
        return 0.0 if n < self.n0 else self.log_alpha_raw(n)

    @cached_property
    def bridge(self) -> _Bridge:
        return _Bridge()

    def levels(self) -> list:
        return list(range(self.n0, self.n_max + 1))

    def _level_of(self, lt: float) -> int:
        """Smallest n >= n0 - 1 with log alpha_n <= lt, so that t lies in [alpha_n, alpha_{n-1})."""
        if lt >= 0.0:
            return self.n0 - 1
        v = -lt / 2.0
        n = math.ceil(math.sqrt(math.log(v) / self.gamma)) if v > 1.0 else 0
        n = max(n, self.n0 - 1)
        while n > self.n0 - 1 and self.log_alpha(n - 1) <= lt:
            n -= 1
        while self.log_alpha(n) > lt:
            n += 1
        return n

    def log_from_logt(self, lt: float) -> float:
        """log omega(t) given lt = log|t| for |t| <= pi (any lt, even far below -745)."""
        if lt == -math.inf:
            return -math.inf
        n = self._level_of(lt)
        if n == self.n0 - 1:
            return 0.0
        la_prev = self.log_alpha(n - 1)
        if lt < la_prev - math.log(2.0):
            return self.log_d(n)
        # bridge on [alpha_{n-1}/2, alpha_{n-1}] from d_n up to d_{n-1}
        x = 2.0 * math.exp(lt - la_prev) - 1.0
        W, one_minus_W = self.bridge(x)
        with np.errstate(divide="ignore"):
            return float(np.logaddexp(self.log_d(n) + np.log(one_minus_W), self.log_d(n - 1) + np.log(W)))

    def _log_alpha_vec(self, n):
        n = np.asarray(n, dtype=float)
        with np.errstate(over="ignore"):
            return np.where(n < self.n0, 0.0, -2.0 * np.exp(self.gamma * n * n))

    def _log_d_vec(self, n):
        return 0.5 * self._log_alpha_vec(n)

    def log_from_logt_array(self, lt) -> np.ndarray:
        """Vectorised log_from_logt."""
        lt = np.asarray(lt, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.maximum(-lt / 2.0, 1.0)
            n = np.ceil(np.sqrt(np.log(v) / self.gamma))
        n = np.where(lt >= 0.0, self.n0 - 1, np.maximum(np.nan_to_num(n, posinf=0.0), self.n0 - 1))
        for _ in range(64):
            down = (n > self.n0 - 1) & (self._log_alpha_vec(n - 1) <= lt)
            up = self._log_alpha_vec(n) > lt
            if not (down.any() or up.any()):
                break
            n = n - down + up
        la_prev = self._log_alpha_vec(n - 1)
        flat = lt < la_prev - math.log(2.0)
        with np.errstate(over="ignore", invalid="ignore"):
            x = 2.0 * np.exp(np.minimum(lt - la_prev, 0.0)) - 1.0
        W, one_minus_W = self.bridge(x)
        with np.errstate(divide="ignore"):
            bridge = np.logaddexp(self._log_d_vec(n) + np.log(one_minus_W), self._log_d_vec(n - 1) + np.log(W))
        out = np.where(flat, self._log_d_vec(n), bridge)
        out = np.where(n == self.n0 - 1, 0.0, out)
        return np.where(lt == -np.inf, -np.inf, out)

    def log(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        # |t| first, so the weight is exactly even
        t = np.where(t > math.pi, np.abs(wrap_angle(t)), t)
        with np.errstate(divide="ignore"):
            return self.log_from_logt_array(np.log(t))

    def singular_points(self):
        return np.array([0.0])

    @property
    def is_even(self):
        return True

    def e20_ratio(self, n: int) -> float:
        """log omega(alpha_n / 2) / log omega(alpha_n) = exp(gamma (2n + 1))."""
        la = self.log_alpha(n)
        return self.log_from_logt(la - math.log(2.0)) / self.log_from_logt(la)

    def K(self, n: int) -> int:
        """[1 / (100 alpha_n)], or 0 when alpha_n is not representable."""
        la = self.log_alpha(n)
        if -la - math.log(100.0) > 700:
            return 0
        return int(math.floor(math.exp(-la) / 100.0))


def staircase_weight(gamma: float = 0.05, n_max: int = 12) -> StaircaseWeight:
    return StaircaseWeight(gamma, n_max)


@dataclass
class StaircaseRow:
    n: int
    K: int
    C: float
    C_scaled: float
    ratios: list = field(default_factory=list)


@dataclass
class StaircaseReport:
    rows: list

    @property
    def C(self) -> float:
        return max(r.C for r in self.rows)

    @property
    def spread(self) -> float:
        cs = [r.C for r in self.rows]
        return max(cs) / min(cs)


def staircase_bernstein_check(sw: StaircaseWeight, n_rows=None, trials: int = 8, seed: int = 0,
                              K_limit: int = 10 ** 4, cfg: QuadConfig | None = None) -> StaircaseReport:
    """Largest ||T'w||_inf / (K_n ||T w||_inf) over random and bump-shaped T of degree K_n."""
    n_rows = sw.levels() if n_rows is None else list(n_rows)
    rng = np.random.default_rng(seed)
    rows = []
    for n in n_rows:
        K = sw.K(n)
        if sw.log_alpha(n) < -700 or not 1 <= K <= K_limit:
            continue
        alpha = math.exp(sw.log_alpha(n))
        polys = [TrigPoly.from_vector(rng.standard_normal(2 * K + 1), K) for _ in range(trials)]
        for c in (alpha, 2 * alpha, 4 * alpha, 0.5 * alpha):
            polys.append(fejer_kernel(K, c))
        for a in (alpha, 4 * alpha):
            if a < 1:
                polys.append(counterexample_evaluator(K, a))
        ratios = []
        for T in polys:
            D = T.deriv() if isinstance(T, PointEvaluator) else T.derivative()
            num = weighted_norm(D, sw, math.inf, None, cfg).log_value
            den = weighted_norm(T, sw, math.inf, None, cfg).log_value
            ratios.append(math.exp(num - den) / K)
        C = max(ratios)
        rows.append(StaircaseRow(n, K, C, C * 100.0, ratios))
    if not rows:
        raise PolyweightError("no-feasible-rows", "no level with 1 <= K_n <= limit")
    return StaircaseReport(rows)
