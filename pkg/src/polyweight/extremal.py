"""Extremal constants for Bernstein, Markov, Remez and Nikolskii inequalities.

L2 Bernstein constants come from a generalized symmetric eigenproblem; every
other constant is a multistart lower bound on the coefficient sphere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize
from numpy.polynomial import chebyshev as C

from .errors import PolyweightError
from .quad import (QuadConfig, _gauss, _lse, quadrature_rule, sup_scan_points,
                   weighted_norm, weighted_sup_norm)
from .trigpoly import TrigPoly, sample_grid
from .weights import CompositeWeight, FunctionWeight, IntervalSet, LogWeight, PowerWeight, ProductWeight


def _unscaled(w: LogWeight) -> LogWeight:
    # a constant factor cancels in every ratio below; dropping it keeps the cancellation exact
    if isinstance(w, CompositeWeight) and w.log_scale != 0.0:
        return CompositeWeight(w.factors, w.u, 0.0)
    return w


@dataclass
class ExtremalReport:
    constant_log: float
    normalized: float
    extremizer: object
    method: str
    restarts: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def constant(self) -> float:
        return math.exp(self.constant_log) if self.constant_log > -math.inf else 0.0


# ---------------------------------------------------------------------------
# basis helpers


def trig_basis(t, n: int):
    """Values and derivatives of [1, cos t, sin t, ..., cos nt, sin nt] at t."""
    t = np.asarray(t, dtype=float)
    k = np.arange(1, n + 1)
    kt = np.multiply.outer(t, k)
    V = np.empty((len(t), 2 * n + 1))
    D = np.empty_like(V)
    V[:, 0] = 1.0
    D[:, 0] = 0.0
    V[:, 1::2] = np.cos(kt)
    V[:, 2::2] = np.sin(kt)
    D[:, 1::2] = -k * np.sin(kt)
    D[:, 2::2] = k * np.cos(kt)
    return V, D


def _arnoldi_form(t: np.ndarray, sw: np.ndarray, n: int):
    """Hermitian form of T -> T' in a basis orthonormal for the discrete measure.

    T = z^{-n} P(z) with z = e^{it} and deg P <= 2n, so T' = i z^{-n} (zP' - nP).
    The basis for P is built by Arnoldi on multiplication by z; values of
    z d/dz of each basis function ride along the same recurrence.
    """
    z = np.exp(1j * t)
    m = 2 * n + 1
    Q = np.zeros((len(t), m), dtype=complex)
    DQ = np.zeros_like(Q)
    q = sw.astype(complex)
    nq = np.linalg.norm(q)
    Q[:, 0] = q / nq
    # Q stores sw * basis values; the constant has z d/dz = 0
    for k in range(m - 1):
        v = z * Q[:, k]
        dv = z * Q[:, k] + z * DQ[:, k]
        for _ in range(2):
            h = Q[:, : k + 1].conj().T @ v
            v = v - Q[:, : k + 1] @ h
            dv = dv - DQ[:, : k + 1] @ h
        hn = np.linalg.norm(v)
        if hn == 0:
            return None
        Q[:, k + 1] = v / hn
        DQ[:, k + 1] = dv / hn
    G = DQ - n * Q
    return G.conj().T @ G


def _real_coeffs(t, sw, n, y):
    """Real trigonometric coefficients of the real or imaginary part of an Arnoldi eigenfunction."""
    z = np.exp(1j * t)
    m = 2 * n + 1
    Q = np.zeros((len(t), m), dtype=complex)
    Q[:, 0] = sw / np.linalg.norm(sw)
    for k in range(m - 1):
        v = z * Q[:, k]
        for _ in range(2):
            v = v - Q[:, : k + 1] @ (Q[:, : k + 1].conj().T @ v)
        Q[:, k + 1] = v / np.linalg.norm(v)
    f = np.exp(-1j * n * t) * (Q @ y)
    g = f.real if np.linalg.norm(f.real) >= np.linalg.norm(f.imag) else f.imag
    V, _ = trig_basis(t, n)
    c, *_ = np.linalg.lstsq(sw[:, None] * V, g, rcond=None)
    return c


# ---------------------------------------------------------------------------
# L2 Bernstein


def bernstein_l2(w: LogWeight, n: int, cfg: QuadConfig | None = None) -> ExtremalReport:
    """sup ||T'||_{2,w} / ||T||_{2,w} over trigonometric polynomials of degree <= n."""
    cfg = cfg or QuadConfig()
    w = _unscaled(w)
    if n < 0:
        raise PolyweightError("domain", "n must be nonnegative")
    if n == 0:
        return ExtremalReport(-math.inf, 0.0, TrigPoly.constant(1.0), "eigen")
    t, lw = quadrature_rule(w, 2 * n, cfg=cfg, tol=1e-12)
    sw = np.exp(0.5 * (lw - np.max(lw)))
    V, D = trig_basis(t, n)
    Bm = sw[:, None] * V
    Am = sw[:, None] * D
    B = Bm.T @ Bm
    A = Am.T @ Am
    ev = np.linalg.eigvalsh(B)
    cond = float(ev[-1] / ev[0]) if ev[0] > 0 else math.inf
    diag = {"cond_B": cond}
    if cond <= 1e8:
        lam, vecs = scipy.linalg.eigh(A, B)
        lam_max, v = float(lam[-1]), vecs[:, -1]
        method = "eigen"
        vb = v @ B @ v
        diag["residual"] = float(np.linalg.norm(A @ v - lam_max * (B @ v))
                                 / max(abs(lam_max) * math.sqrt(abs(vb)), 1e-300))
    else:
        M = _arnoldi_form(t, sw, n)
        lam, vecs = np.linalg.eigh(0.5 * (M + M.conj().T))
        lam_max = float(lam[-1])
        # real extremizer: fit the (complex) eigenfunction's real or imaginary part
        y = vecs[:, -1]
        v = _real_coeffs(t, sw, n, y)
        method = "eigen-arnoldi"
        diag["ill_conditioned"] = True
    v = v / np.linalg.norm(v)
    lam_max = max(lam_max, 0.0)
    clog = 0.5 * math.log(lam_max) if lam_max > 0 else -math.inf
    T = TrigPoly.from_vector(v, n)
    diag["top_degree_mass"] = float(v[-2] ** 2 + v[-1] ** 2)
    return ExtremalReport(clog, math.exp(clog) / n if lam_max > 0 else 0.0, T, method, 0, diag)


# ---------------------------------------------------------------------------
# multistart machinery


@dataclass
class _NormRule:
    """Discrete stand-in for a weighted norm of a linear family V @ c."""

    V: np.ndarray
    logw: np.ndarray
    p: float
    sharp: float = 1e3

    def __call__(self, c) -> float:
        vals = self.V @ c
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(vals))
        if math.isinf(self.p):
            z = la + self.logw
            return _lse(self.sharp * z) / self.sharp
        return _lse(self.p * la + self.logw) / self.p


def _rule_for(w: LogWeight, p: float, degree: int, cfg: QuadConfig):
    if math.isinf(p):
        probe = TrigPoly.cos(max(degree, 1))
        t = sup_scan_points(probe, w, None, QuadConfig(sup_density=16, sup_cap=1 << 14))
        lw = w.log(t)
        ok = np.isfinite(lw)
        return t[ok], lw[ok]
    return quadrature_rule(w, degree, cfg=cfg, tol=1e-10)


def _maximize(obj, dim: int, seeds, restarts: int, rng, golden_iters: int = 12,
              maxfev: int | None = None) -> list:
    """Coordinate golden sweep plus Nelder-Mead from each start; returns (value, x) pairs."""
    starts = [np.asarray(s, dtype=float) for s in seeds]
    starts += [rng.standard_normal(dim) for _ in range(restarts)]
    maxfev = maxfev or 100 * dim
    # seeds stay in the pool untouched, so the report never falls below them
    out = [(obj(s / (np.linalg.norm(s) or 1.0)), s / (np.linalg.norm(s) or 1.0)) for s in starts[:len(seeds)]]
    for x0 in starts:
        x = x0 / (np.linalg.norm(x0) or 1.0)
        fx = obj(x)
        for j in range(dim):
            def line(s, j=j):
                y = x.copy()
                y[j] += s
                return obj(y)
            a, b = -1.0, 1.0
            g = (math.sqrt(5) - 1) / 2
            c_, d_ = b - g * (b - a), a + g * (b - a)
            fc, fd = line(c_), line(d_)
            for _ in range(golden_iters):
                if fc >= fd:
                    b, d_, fd = d_, c_, fc
                    c_ = b - g * (b - a)
                    fc = line(c_)
                else:
                    a, c_, fc = c_, d_, fd
                    d_ = a + g * (b - a)
                    fd = line(d_)
            s, fs = (c_, fc) if fc >= fd else (d_, fd)
            if fs > fx:
                x[j] += s
                x /= np.linalg.norm(x)
                fx = fs
        res = scipy.optimize.minimize(lambda y: -obj(y), x, method="Nelder-Mead",
                                      options={"maxfev": maxfev, "xatol": 1e-10, "fatol": 1e-14,
                                               "adaptive": True})
        y = res.x / (np.linalg.norm(res.x) or 1.0)
        fy = obj(y)
        out.append((fy, y) if fy >= fx else (fx, x))
    return out


def _safe(obj):
    def f(c):
        v = obj(c)
        return v if np.isfinite(v) else -1e300
    return f


def _finalize(cands, true_ratio, k: int = 3, n_seeds: int = 0):
    pool = cands[:n_seeds] + sorted(cands[n_seeds:], key=lambda r: -r[0])[:k]
    best = None
    for val, x in pool:
        r = true_ratio(x)
        if best is None or r > best[0]:
            best = (r, x, val)
    return best


# ---------------------------------------------------------------------------
# L_p Bernstein


def bernstein_lp(w: LogWeight, n: int, p: float, restarts: int = 16, seed: int = 0,
                 cfg: QuadConfig | None = None) -> ExtremalReport:
    """Multistart lower bound for sup ||T'||_{p,w} / ||T||_{p,w} over degree n."""
    cfg = cfg or QuadConfig()
    w = _unscaled(w)
    if n < 1:
        raise PolyweightError("domain", "n must be >= 1")
    t, lw = _rule_for(w, p, 2 * n if not math.isinf(p) else n, cfg)
    V, D = trig_basis(t, n)
    num = _NormRule(D, lw, p)
    den = _NormRule(V, lw, p)
    obj = _safe(lambda c: num(c) - den(c))
    seeds = [TrigPoly.cos(n).vector(n)]
    try:
        seeds.append(bernstein_l2(w, n, cfg).extremizer.vector(n))
    except PolyweightError:
        pass
    rng = np.random.default_rng(seed)
    cands = _maximize(obj, 2 * n + 1, seeds, restarts, rng)

    def true_ratio(x):
        T = TrigPoly.from_vector(x, n)
        return weighted_norm(T.derivative(), w, p, None, cfg).log_value - weighted_norm(T, w, p, None, cfg).log_value

    r, x, sur = _finalize(cands, true_ratio, n_seeds=len(seeds))
    diag = {"surrogate_log": float(sur), "lower_bound": True}
    return ExtremalReport(float(r), math.exp(r) / n, TrigPoly.from_vector(x, n), "multistart",
                          restarts, diag)


# ---------------------------------------------------------------------------
# Remez


@dataclass(frozen=True)
class RemezCheck:
    lhs: float
    rhs: float
    passed: bool


def remez_verify(w: LogWeight, p: float, T, E: IntervalSet, C: float,
                 cfg: QuadConfig | None = None) -> RemezCheck:
    """lhs = log||T||_{p,w}, rhs = C n |E| + log||T||_{p,w, T minus E}."""
    comp = E.complement()
    if comp.measure <= 1e-15:
        raise PolyweightError("empty-complement", "E covers the circle")
    n = max(T.degree, 1)
    lhs = weighted_norm(T, w, p, None, cfg).log_value
    rhs = C * n * E.measure + weighted_norm(T, w, p, comp, cfg).log_value
    return RemezCheck(lhs, rhs, lhs <= rhs + 1e-9)


def fejer_kernel(n: int, center: float = 0.0) -> TrigPoly:
    """Fejer kernel of degree n centred at ``center``."""
    N = n + 1
    k = np.arange(N)
    c = 2.0 * (1.0 - k / N)
    a = c * np.cos(k * center)
    b = c * np.sin(k * center)
    a[0] = 1.0
    return TrigPoly(a, b)


def jackson_kernel(n: int, center: float = 0.0) -> TrigPoly:
    """Square of the degree n//2 Fejer kernel (degree <= n), a sharper bump."""
    F = fejer_kernel(max(n // 2, 1), 0.0)
    m = 2 * max(n // 2, 1)
    N = 4 * m + 4
    t = sample_grid(N)
    vals = F(t) ** 2
    c = np.fft.rfft(vals) / N * np.where(np.arange(N // 2 + 1) % 2, -1.0, 1.0)
    a = 2 * c.real[: m + 1]
    a[0] = c.real[0]
    k = np.arange(m + 1)
    return TrigPoly(a * np.cos(k * center), a * np.sin(k * center))


def _sample_E(n: int, kind: str, rng) -> IntervalSet:
    if kind == "intervals":
        m = int(rng.integers(1, 4))
        arcs = []
        for _ in range(m):
            # lengths in [1/n, 8/n] keep the family invariant under n -> 2n
            length = rng.uniform(1.0 / n, max(1.0 / n, min(8.0 / n, 1.0 / m)))
            s = rng.uniform(-math.pi, math.pi)
            arcs.append((s, s + length))
        return IntervalSet.from_arcs(arcs)
    if kind == "measurable-union":
        m = int(rng.integers(8, 33))
        arcs = []
        for _ in range(m):
            length = rng.uniform(0.01 / n, 1.0 / n)
            s = rng.uniform(-math.pi, math.pi)
            arcs.append((s, s + length))
        return IntervalSet.from_arcs(arcs)
    raise PolyweightError("domain", f"unknown E kind {kind!r}")


def _sample_T(n: int, family: str, E: IntervalSet, rng):
    if family == "random":
        return TrigPoly.from_vector(rng.standard_normal(2 * n + 1), n)
    if family == "concentrated":
        a, b = E.arcs[int(rng.integers(len(E.arcs)))]
        c = 0.5 * (a + b)
        return jackson_kernel(n, c) if rng.random() < 0.5 else fejer_kernel(n, c)
    raise PolyweightError("domain", f"unknown family {family!r}")


def _remez_probes(n: int, family: str, E_kind: str):
    """Deterministic (T, E) pairs added to the random samples of the concentrated family."""
    if family != "concentrated" or E_kind != "intervals":
        return []
    out = []
    for L in (1.0, 2.0, 4.0, 8.0):
        if L > n:
            continue
        for c in np.linspace(-math.pi, math.pi, 32, endpoint=False):
            E = IntervalSet.from_arcs([(c - 0.5 * L / n, c + 0.5 * L / n)])
            out.append((fejer_kernel(n, c), E))
            out.append((jackson_kernel(n, c), E))
    return out


def remez_constant_fit(w: LogWeight, p: float, n_list, family: str = "random",
                       E_kind: str = "intervals", samples: int = 40, seed: int = 0,
                       cfg: QuadConfig | None = None) -> float:
    """max over sampled (T, E) of (log||T|| - log||T||_{T minus E}) / (n |E|).

    The concentrated family also scans bumps centred in single arcs of length
    L/n, which keeps the maximum from hinging on a lucky draw.
    """
    w = _unscaled(w)
    rng = np.random.default_rng(seed)
    best = -math.inf
    for n in n_list:
        pairs = _remez_probes(n, family, E_kind)
        for _ in range(samples):
            E = _sample_E(n, E_kind, rng)
            pairs.append((_sample_T(n, family, E, rng), E))
        for T, E in pairs:
            lhs = weighted_norm(T, w, p, None, cfg).log_value
            off = weighted_norm(T, w, p, E.complement(), cfg).log_value
            best = max(best, (lhs - off) / (n * E.measure))
    return float(best)


# ---------------------------------------------------------------------------
# Nikolskii


def nikolskii_exponent(p: float, q: float) -> float:
    """Power applied to the weight on the right-hand side: p/q, or p when q is infinite."""
    return p if math.isinf(q) else p / q


def nikolskii_ratio(w: LogWeight, n: int, p: float, q: float, restarts: int = 8, seed: int = 0,
                    cfg: QuadConfig | None = None) -> ExtremalReport:
    """Multistart lower bound for ||T||_{q,w} / ||T||_{p, w^e} with e = nikolskii_exponent(p, q)."""
    cfg = cfg or QuadConfig()
    w = _unscaled(w)
    if not 0 < p <= q:
        raise PolyweightError("domain", "need 0 < p <= q")
    e = nikolskii_exponent(p, q)
    wd = PowerWeight(w, e)
    tn, lwn = _rule_for(w, q, 2 * n, cfg)
    td, lwd = _rule_for(wd, p, 2 * n, cfg)
    num = _NormRule(trig_basis(tn, n)[0], lwn, q)
    den = _NormRule(trig_basis(td, n)[0], lwd, p)
    obj = _safe(lambda c: num(c) - den(c))
    # concentrate at the weight maximum
    peak = weighted_sup_norm(TrigPoly.constant(1.0), w, None, cfg).argmax or 0.0
    seeds = [TrigPoly.cos(n).vector(n), fejer_kernel(n, peak).vector(n), jackson_kernel(n, peak).vector(n)]
    rng = np.random.default_rng(seed)
    cands = _maximize(obj, 2 * n + 1, seeds, restarts, rng)

    def true_ratio(x):
        T = TrigPoly.from_vector(x, n)
        return weighted_norm(T, w, q, None, cfg).log_value - weighted_norm(T, wd, p, None, cfg).log_value

    r, x, _ = _finalize(cands, true_ratio, n_seeds=len(seeds))
    rate = (1.0 / p - (0.0 if math.isinf(q) else 1.0 / q)) * math.log(n)
    return ExtremalReport(float(r), math.exp(r - rate), TrigPoly.from_vector(x, n), "multistart", restarts,
                          {"exponent": e, "lower_bound": True})


# ---------------------------------------------------------------------------
# algebraic polynomials via x = cos t


def _cheb_coeffs(P) -> np.ndarray:
    if isinstance(P, C.Chebyshev):
        return np.asarray(P.coef, dtype=float)
    if isinstance(P, np.polynomial.Polynomial):
        return np.asarray(P.convert(kind=C.Chebyshev).coef, dtype=float)
    return np.asarray(np.polynomial.Polynomial(P).convert(kind=C.Chebyshev).coef, dtype=float)


def _jacobian_weight() -> LogWeight:
    """|sin t| / 2, so that int_{-1}^{1} f(x) dx = int_T f(cos t) |sin t| / 2 dt."""
    def f(t):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.sin(t))) - math.log(2.0)
    return FunctionWeight(f, (0.0, -math.pi), True)


def _alg_weight(w: LogWeight, p: float) -> LogWeight:
    return w if math.isinf(p) else ProductWeight((w, _jacobian_weight()))


@dataclass(frozen=True)
class AlgebraicCheck:
    lhs: float
    rhs: float
    passed: bool
    ratio_over_n: float


def algebraic_bernstein_verify(P, w: LogWeight, p: float, C_: float,
                               cfg: QuadConfig | None = None) -> AlgebraicCheck:
    """Check ||phi P' w||_p <= C n ||P w||_p on [-1, 1] with phi(x) = sqrt(1 - x^2).

    Under x = cos t, |P'(cos t)| |sin t| = |d/dt P(cos t)|, so the left side is
    the trigonometric derivative norm.
    """
    c = _cheb_coeffs(P)
    n = max(len(c) - 1, 1)
    T = TrigPoly(c, np.zeros_like(c))
    wa = _alg_weight(w, p)
    lhs = weighted_norm(T.derivative(), wa, p, None, cfg).log_value
    base = weighted_norm(T, wa, p, None, cfg).log_value
    rhs = math.log(C_) + math.log(n) + base
    return AlgebraicCheck(lhs, rhs, lhs <= rhs + 1e-9, math.exp(lhs - base) / n)


def algebraic_markov_constant(w: LogWeight, n: int, p: float, restarts: int = 8, seed: int = 0,
                              cfg: QuadConfig | None = None) -> ExtremalReport:
    """Multistart lower bound for sup ||P'||_{p,w} / ||P||_{p,w} over algebraic degree n."""
    cfg = cfg or QuadConfig()
    w = _unscaled(w)
    if n < 1:
        raise PolyweightError("domain", "n must be >= 1")
    wa = _alg_weight(w, p)
    t, lw = _rule_for(wa, p, 2 * n, cfg)
    k = np.arange(n + 1)
    V = np.cos(np.multiply.outer(t, k))
    Dm = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        e = np.zeros(n + 1)
        e[j] = 1.0
        d = C.chebder(e)
        Dm[: len(d), j] = d
    num = _NormRule(V @ Dm, lw, p)
    den = _NormRule(V, lw, p)
    obj = _safe(lambda c: num(c) - den(c))
    seed_vec = np.zeros(n + 1)
    seed_vec[n] = 1.0
    rng = np.random.default_rng(seed)
    seeds = [seed_vec]
    cands = _maximize(obj, n + 1, seeds, restarts, rng)

    def true_ratio(x):
        T = TrigPoly(x, np.zeros_like(x))
        d = Dm @ x
        Tp = TrigPoly(d, np.zeros_like(d))
        return weighted_norm(Tp, wa, p, None, cfg).log_value - weighted_norm(T, wa, p, None, cfg).log_value

    r, x, _ = _finalize(cands, true_ratio, n_seeds=len(seeds))
    return ExtremalReport(float(r), math.exp(r) / n ** 2, C.Chebyshev(x), "multistart", restarts,
                          {"lower_bound": True})


# ---------------------------------------------------------------------------
# Mhaskar-Rakhmanov-Saff numbers for Q(x) = (1 - x^2)^(-alpha)


def mrs_integral(alpha: float, a: float, nodes: int = 32) -> float:
    """(2/pi) int_0^1 a x Q'(a x) / sqrt(1 - x^2) dx, with x = sin(theta)."""
    delta = 1.0 - a * a
    # the integrand peaks within sqrt(delta) of theta = pi/2
    s = math.sqrt(max(delta, 1e-300))
    pts = [0.0, math.pi / 2]
    h = min(math.pi / 4, 8 * s)
    while h > s / 64:
        pts.append(math.pi / 2 - h)
        h /= 2
    pts.extend(np.linspace(0.0, math.pi / 2, 9)[1:-1])
    pts = np.unique(np.clip(pts, 0.0, math.pi / 2))
    x, gw, _ = _gauss(nodes)
    lo, hi = pts[:-1], pts[1:]
    th = (0.5 * (lo + hi))[:, None] + (0.5 * (hi - lo))[:, None] * x[None, :]
    s2 = np.sin(th) ** 2
    # 1 - a^2 sin^2 = delta + a^2 cos^2, free of cancellation
    den = delta + a * a * np.cos(th) ** 2
    f = 2 * alpha * a * a * s2 * den ** (-alpha - 1)
    val = np.sum(f * gw[None, :] * (0.5 * (hi - lo))[:, None])
    return float(2.0 / math.pi * val)


def mrs_number(alpha: float, n: float) -> float:
    """a_n in (0, 1) solving n = (2/pi) int_0^1 a x Q'(a x) / sqrt(1 - x^2) dx."""
    if not alpha > 0 or not n > 0:
        raise PolyweightError("domain", "alpha and n must be positive")
    # bisect on log(1 - a)
    lo, hi = math.log(1e-15), math.log(1.0)
    a_of = lambda u: -math.expm1(u)
    if mrs_integral(alpha, a_of(lo)) < n:
        raise PolyweightError("no-bracket", "integral stays below n near a = 1")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mrs_integral(alpha, a_of(mid)) >= n:
            lo = mid
        else:
            hi = mid
    return a_of(0.5 * (lo + hi))
