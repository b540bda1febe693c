"""Weighted norms and Fourier coefficients in the log domain.

Integrals use Gauss-Legendre panels, graded geometrically toward every zero
of the weight and refined adaptively by panel halving.  Each panel is summed
as exp(log-integrand - running max), so integrands spanning far more than the
double range are handled without overflow.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceWarning, PolyweightError
from .trigpoly import TrigPoly, as_evaluator
from .weights import IntervalSet, LogWeight, wrap_angle

DROP_NATS = 1.0e4
LOG_TINY = -745.0


@dataclass(frozen=True)
class QuadConfig:
    panels: int = 64
    depth: int = 40
    nodes: int = 16
    tol: float = 1e-9
    sup_density: int = 64
    max_rounds: int = 80
    sup_cap: int = 1 << 20

    def __post_init__(self):
        for name in ("panels", "depth", "nodes", "sup_density", "max_rounds"):
            if getattr(self, name) <= 0:
                raise PolyweightError("bad-config", f"{name} must be positive")
        if not self.tol > 0:
            raise PolyweightError("bad-config", "tol must be positive")


@dataclass(frozen=True)
class LogNorm:
    log_value: float
    error_estimate: float
    p: float
    argmax: float | None = None
    converged: bool = True


@lru_cache(maxsize=16)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w, np.log(w)


def _row_logsumexp(v: np.ndarray) -> np.ndarray:
    m = np.max(v, axis=-1)
    fin = np.isfinite(m)
    safe = np.where(fin, m, 0.0)
    with np.errstate(divide="ignore"):
        s = np.log(np.sum(np.exp(v - safe[..., None]), axis=-1)) + safe
    return np.where(fin, s, m)


def _lse(v) -> float:
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        return -math.inf
    return float(_row_logsumexp(v[None, :])[0])


# ---------------------------------------------------------------------------
# panel construction


def _graded_points(s: float, lo: float, hi: float, h: float, depth: int) -> list:
    out = []
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        c = s + shift
        if lo - h <= c <= hi + h:
            out.append(c)
            for j in range(depth + 1):
                d = h * 0.5 ** j
                out.extend((c - d, c + d))
    return [x for x in out if lo <= x <= hi]


def _panel_edges(lo: float, hi: float, width: float, singular, depth: int, extra=()) -> np.ndarray:
    n = max(1, int(math.ceil((hi - lo) / width)))
    pts = list(np.linspace(lo, hi, n + 1))
    for s in singular:
        pts.extend(_graded_points(float(s), lo, hi, min(width, hi - lo), depth))
    for x in extra:
        if lo < x < hi:
            pts.append(float(x))
    pts = np.unique(np.asarray(pts, dtype=float))
    return pts


def _domain_arcs(domain: IntervalSet | None):
    if domain is None:
        return [(-math.pi, math.pi)]
    return [arc for arc in domain.arcs if arc[1] > arc[0]]


def _panels(domain, width, singular, depth, extra=()):
    los, his = [], []
    for lo, hi in _domain_arcs(domain):
        e = _panel_edges(lo, hi, width, singular, depth, extra)
        los.append(e[:-1])
        his.append(e[1:])
    if not los:
        return np.array([]), np.array([])
    return np.concatenate(los), np.concatenate(his)


# ---------------------------------------------------------------------------
# adaptive log-domain integration


PANEL_CHUNK = 1 << 16


def _panel_logs(logf, lo, hi, nodes: int):
    x, _, lw = _gauss(nodes)
    out = np.empty(len(lo))
    # chunked so that degree-10^6 integrands stay within a few hundred MB
    for k in range(0, len(lo), PANEL_CHUNK):
        l, h = lo[k:k + PANEL_CHUNK], hi[k:k + PANEL_CHUNK]
        half = 0.5 * (h - l)
        t = (0.5 * (h + l))[:, None] + half[:, None] * x[None, :]
        with np.errstate(divide="ignore"):
            vals = logf(t.ravel()).reshape(t.shape) + lw[None, :] + np.log(half)[:, None]
        vals = np.where(np.isnan(vals), -np.inf, vals)
        out[k:k + PANEL_CHUNK] = _row_logsumexp(vals)
    return out


@dataclass
class _Adaptive:
    lo: np.ndarray
    hi: np.ndarray
    log_i: np.ndarray        # refined (two-half) estimate per panel
    log_err: float
    converged: bool


def _adaptive(logf, lo, hi, cfg: QuadConfig, tol: float | None = None, local: bool = False) -> _Adaptive:
    tol = cfg.tol if tol is None else tol
    done_lo, done_hi, done_i, done_e = [], [], [], []
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    coarse = _panel_logs(logf, lo, hi, cfg.nodes)
    converged = False
    for _ in range(cfg.max_rounds):
        mid = 0.5 * (lo + hi)
        left = _panel_logs(logf, lo, mid, cfg.nodes)
        right = _panel_logs(logf, mid, hi, cfg.nodes)
        fine = np.logaddexp(left, right)
        ref = _lse(np.concatenate([fine] + done_i)) if done_i else _lse(fine)
        if not np.isfinite(ref):
            ref = 0.0
        with np.errstate(invalid="ignore", over="ignore"):
            diff = np.abs(np.exp(coarse - ref) - np.exp(fine - ref))
        diff = np.where(np.isnan(diff), 0.0, diff)
        negligible = fine < ref - DROP_NATS
        if local:
            with np.errstate(over="ignore"):
                scale = np.exp(fine - ref)
            bad = diff > tol * scale
        else:
            total_err = float(np.sum(diff)) + sum(float(np.sum(e)) for e in done_e)
            if total_err <= tol:
                bad = np.zeros(len(lo), dtype=bool)
            else:
                bad = diff > tol / max(8 * len(lo), 64)
        tiny = (hi - lo) <= np.maximum(1e-300, 4e-16 * np.abs(mid))
        bad &= ~negligible & ~tiny
        keep = ~bad
        done_lo.append(lo[keep])
        done_hi.append(hi[keep])
        done_i.append(fine[keep])
        done_e.append(diff[keep])
        if not np.any(bad):
            converged = True
            break
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    else:
        done_lo.append(lo)
        done_hi.append(hi)
        done_i.append(coarse)
        done_e.append(np.zeros(len(lo)))
    lo_all = np.concatenate(done_lo)
    order = np.argsort(lo_all, kind="stable")
    log_i = np.concatenate(done_i)[order]
    ref = _lse(log_i)
    err = float(np.sum(np.concatenate(done_e)))
    log_err = (math.log(err) + (ref if np.isfinite(ref) else 0.0)) if err > 0 else -math.inf
    return _Adaptive(lo_all[order], np.concatenate(done_hi)[order], log_i, log_err, converged)


def log_integrate(logf, domain=None, singular=(), cfg: QuadConfig | None = None,
                  width: float | None = None, extra=()) -> tuple:
    """log of the integral of exp(logf) over ``domain``; returns (value, log_err, converged)."""
    cfg = cfg or QuadConfig()
    width = width or 2 * math.pi / cfg.panels
    lo, hi = _panels(domain, width, singular, cfg.depth, extra)
    if len(lo) == 0:
        return -math.inf, -math.inf, True
    res = _adaptive(logf, lo, hi, cfg)
    return _lse(res.log_i), res.log_err, res.converged


def log_integrate_cells(logf, edges, singular=(), cfg: QuadConfig | None = None) -> np.ndarray:
    """Per-cell log integrals with a cell-local relative tolerance."""
    cfg = cfg or QuadConfig()
    edges = np.asarray(edges, dtype=float)
    pts = list(edges)
    width = float(np.min(np.diff(edges)))
    for s in singular:
        pts.extend(_graded_points(float(s), edges[0], edges[-1], width, cfg.depth))
    pts = np.unique(np.asarray(pts))
    res = _adaptive(logf, pts[:-1], pts[1:], cfg, local=True)
    cell = np.clip(np.searchsorted(edges, 0.5 * (res.lo + res.hi)) - 1, 0, len(edges) - 2)
    out = np.full(len(edges) - 1, -np.inf)
    for c in np.unique(cell):
        out[c] = _lse(res.log_i[cell == c])
    return out


# ---------------------------------------------------------------------------
# norms


def _width_for(degree: int, cfg: QuadConfig) -> float:
    return min(2 * math.pi / cfg.panels, math.pi / (2 * max(degree, 1)))


def _integrand(T, w: LogWeight, p: float):
    def logf(t):
        _, lt = T.signlog(t)
        with np.errstate(invalid="ignore"):
            return p * lt + w.log(t)
    return logf


def weighted_lp_norm(T, w: LogWeight, p: float, domain: IntervalSet | None = None,
                     cfg: QuadConfig | None = None) -> LogNorm:
    """log (int_domain |T|^p w)^(1/p); unnormalised measure dt."""
    cfg = cfg or QuadConfig()
    T = as_evaluator(T)
    if math.isinf(p):
        return weighted_sup_norm(T, w, domain, cfg)
    if not p > 0:
        raise PolyweightError("domain", "p must be positive")
    if domain is not None and domain.measure == 0:
        raise PolyweightError("domain", "empty domain")
    width = _width_for(T.degree, cfg)
    extra = T.hints
    if isinstance(T, TrigPoly) and not (p % 2 == 0):
        # |T|^p has kinks at sign changes unless p is an even integer
        extra = np.concatenate([extra, T.real_roots()])
    val, lerr, ok = log_integrate(_integrand(T, w, p), domain, w.singular_points(), cfg,
                                  width, extra)
    if not ok:
        warnings.warn("weighted_lp_norm did not reach tolerance", ConvergenceWarning, stacklevel=2)
    log_value = val / p
    # relative error of the norm is (relative error of the integral) / p
    err = lerr - val - math.log(p) + log_value if np.isfinite(val) and np.isfinite(lerr) else -math.inf
    return LogNorm(float(log_value), float(err), float(p), None, ok)


def _golden_max(f, a: float, b: float, tol: float = 1e-12) -> tuple:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def sup_scan_points(T, w: LogWeight, domain: IntervalSet | None, cfg: QuadConfig) -> np.ndarray:
    arcs = _domain_arcs(domain)
    total = sum(b - a for a, b in arcs)
    n_total = min(cfg.sup_cap, max(512, cfg.sup_density * max(T.degree, 1)))
    pts = []
    for a, b in arcs:
        m = max(16, int(math.ceil(n_total * (b - a) / total)))
        pts.append(np.linspace(a, b, m + 1))
        for s in w.singular_points():
            pts.append(np.asarray(_graded_points(float(s), a, b, min(0.5, b - a), 60)))
        h = T.hints
        if len(h):
            hw = wrap_angle(h)
            pts.append(hw[(hw >= a) & (hw <= b)])
    return np.unique(np.concatenate(pts))


def weighted_sup_norm(T, w: LogWeight, domain: IntervalSet | None = None,
                      cfg: QuadConfig | None = None, top: int = 8) -> LogNorm:
    """log sup |T w| via dense scan plus golden-section refinement of the top maxima."""
    cfg = cfg or QuadConfig()
    T = as_evaluator(T)
    if domain is not None and domain.measure == 0:
        raise PolyweightError("domain", "empty domain")

    def L(t):
        _, lt = T.signlog(t)
        with np.errstate(invalid="ignore"):
            v = lt + w.log(t)
        return np.where(np.isnan(v), -np.inf, v)

    t = sup_scan_points(T, w, domain, cfg)
    v = L(t)
    if not np.any(np.isfinite(v)):
        return LogNorm(-math.inf, -math.inf, math.inf, None, True)
    left = np.concatenate([[-np.inf], v[:-1]])
    right = np.concatenate([v[1:], [-np.inf]])
    cand = np.nonzero((v >= left) & (v >= right) & np.isfinite(v))[0]
    cand = cand[np.argsort(v[cand])[::-1][:top]]
    best_t, best_v = float(t[np.argmax(v)]), float(np.max(v))
    scalar = lambda x: float(L(np.array([x]))[0])
    # neighbours from another arc would let the refinement step across a gap
    starts = np.array(sorted(a for a, _ in _domain_arcs(domain)))
    arc_of = np.searchsorted(starts, t, side="right") - 1
    for i in cand:
        lo_i, hi_i = max(i - 1, 0), min(i + 1, len(t) - 1)
        a = t[lo_i] if arc_of[lo_i] == arc_of[i] else t[i]
        b = t[hi_i] if arc_of[hi_i] == arc_of[i] else t[i]
        if b - a <= 0:
            continue
        tx, vx = _golden_max(scalar, float(a), float(b))
        if vx > best_v:
            best_t, best_v = tx, vx
    return LogNorm(best_v, best_v + math.log(cfg.tol), math.inf, float(wrap_angle(best_t)), True)


def weighted_norm(T, w: LogWeight, p: float, domain=None, cfg=None) -> LogNorm:
    return weighted_sup_norm(T, w, domain, cfg) if math.isinf(p) else weighted_lp_norm(T, w, p, domain, cfg)


# ---------------------------------------------------------------------------
# fixed rules (used for Gram matrices and fast objective evaluation)


def quadrature_rule(w: LogWeight, degree: int, domain: IntervalSet | None = None,
                    cfg: QuadConfig | None = None, tol: float | None = None) -> tuple:
    """Nodes t and log weights (log GL weight + log w(t)) resolving degree-``degree`` integrands."""
    cfg = cfg or QuadConfig()
    width = min(2 * math.pi / cfg.panels, math.pi / (4 * max(degree, 1)))
    lo, hi = _panels(domain, width, w.singular_points(), cfg.depth)
    res = _adaptive(w.log, lo, hi, cfg, tol=min(cfg.tol, 1e-12) if tol is None else tol)
    x, gw, lgw = _gauss(cfg.nodes)
    lo, hi = res.lo, res.hi
    keep = res.log_i > _lse(res.log_i) - 800
    lo, hi = lo[keep], hi[keep]
    half = 0.5 * (hi - lo)
    t = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    lw = w.log(t.ravel()).reshape(t.shape) + lgw[None, :] + np.log(half)[:, None]
    t, lw = t.ravel(), lw.ravel()
    ok = np.isfinite(lw)
    return t[ok], lw[ok]


# ---------------------------------------------------------------------------
# Fourier coefficients


def _segment_nodes(z0: complex, z1: complex, width: float, grade0: bool, grade1: bool,
                   depth: int, nodes: int):
    length = abs(z1 - z0)
    if length == 0:
        return np.array([], dtype=complex), np.array([], dtype=complex)
    n = max(1, int(math.ceil(length / width)))
    s = list(np.linspace(0.0, 1.0, n + 1))
    h = 1.0 / n
    for flag, end in ((grade0, 0.0), (grade1, 1.0)):
        if flag:
            s.extend(end + (1 - 2 * end) * h * 0.5 ** j for j in range(1, depth + 1))
    s = np.unique(np.asarray(s))
    x, gw, _ = _gauss(nodes)
    lo, hi = s[:-1], s[1:]
    tau = (0.5 * (lo + hi))[:, None] + (0.5 * (hi - lo))[:, None] * x[None, :]
    wts = (0.5 * (hi - lo))[:, None] * gw[None, :] * (z1 - z0)
    return (z0 + (z1 - z0) * tau).ravel(), wts.ravel()


def _path(a: float, b: float, Y: float, phi_a: float, phi_b: float):
    ca = 1.0 / math.tan(phi_a)
    cb = 1.0 / math.tan(phi_b)
    p1 = complex(a + Y * ca, Y)
    p2 = complex(b - Y * cb, Y)
    return [complex(a, 0), p1, p2, complex(b, 0)]


def _arc_contour(w: LogWeight, k: int, a: float, b: float, cfg: QuadConfig, width: float):
    tmid = 0.5 * (a + b)
    phi_a, phi_b = w.contour_angle(a), w.contour_angle(b)
    phi = min(phi_a, phi_b)

    # within rounding distance of an endpoint the phase of g is meaningless;
    # those nodes carry at most ~1e-14 of the integral, so they are dropped
    guard = 64 * np.finfo(float).eps * max(1.0, abs(a), abs(b))

    def clog(z):
        with np.errstate(all="ignore"):
            v = w.complex_log(z, tmid) + 1j * k * z
        near = (np.abs(z - a) < guard) | (np.abs(z - b) < guard)
        return np.where(near, complex(-np.inf, 0.0), v)

    Y = 0.0
    if phi > 0 and k > 0:
        ymax = 0.98 * (b - a) / (1 / math.tan(phi_a) + 1 / math.tan(phi_b))
        ymax = min(ymax, 3.0)
        best = None
        for y in np.concatenate([[0.0], np.geomspace(1e-5, ymax, 48)]):
            P = _path(a, b, float(y), phi_a, phi_b)
            zs = np.concatenate([P[i] + (P[i + 1] - P[i]) * np.linspace(0.002, 0.998, 160)
                                 for i in range(3)])
            re = np.real(clog(zs))
            re = np.where(np.isnan(re), np.inf, re)
            m = float(np.max(re))
            if best is None or m < best[0] - 1e-9:
                best = (m, float(y))
        Y = best[1]
    if Y == 0.0:
        P = [complex(a, 0), complex(b, 0)]
    else:
        P = _path(a, b, Y, phi_a, phi_b)
    zs, ws = [], []
    for i in range(len(P) - 1):
        z, wt = _segment_nodes(P[i], P[i + 1], width, i == 0, i == len(P) - 2, cfg.depth, cfg.nodes)
        zs.append(z)
        ws.append(wt)
    return np.concatenate(zs), np.concatenate(ws), clog


def _contour_sum(zs, ws, clog):
    lv = clog(zs)
    re = np.real(lv)
    ok = np.isfinite(re)
    if not np.any(ok):
        return -math.inf, 0j, -math.inf
    L = float(np.max(re[ok]))
    terms = np.exp(lv[ok] - L) * ws[ok]
    return L, complex(np.sum(terms)), L + math.log(float(np.sum(np.abs(terms))) + 1e-300)


def _full_period_sum(w: LogWeight, k: int, cfg: QuadConfig, width: float):
    """No singular points: integrate over a horizontal line shifted by the best height."""
    tmid = 0.0

    def clog(z):
        with np.errstate(all="ignore"):
            return w.complex_log(z, tmid) + 1j * k * z

    Y = 0.0
    if k > 0 and w.contour_angle(0.0) > 0:
        try:
            best = None
            for y in np.concatenate([[0.0], np.geomspace(1e-5, 3.0, 48)]):
                zs = np.linspace(-math.pi, math.pi, 400) + 1j * y
                m = float(np.max(np.real(clog(zs))))
                if best is None or m < best[0] - 1e-9:
                    best = (m, float(y))
            Y = best[1]
        except NotImplementedError:
            Y = 0.0
    return _segment_nodes(complex(-math.pi, Y), complex(math.pi, Y), width, False, False, 0, cfg.nodes), clog


def _complex_integral(w: LogWeight, k: int, cfg: QuadConfig, width: float):
    """Return (L, S, log_abs_scale) with int w e^{ikt} dt = e^L S."""
    sing = np.sort(w.singular_points())
    parts = []
    contour_ok = True
    try:
        w.complex_log(np.array([0.1 + 0.1j]), 0.1)
    except NotImplementedError:
        contour_ok = False
    if not contour_ok:
        def rlog(z):
            t = np.real(z)
            with np.errstate(divide="ignore"):
                return w.log(t) + 1j * k * t
        lo, hi = _panels(None, width, sing, cfg.depth)
        x, gw, _ = _gauss(cfg.nodes)
        half = 0.5 * (hi - lo)
        t = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
        wt = half[:, None] * gw[None, :]
        parts.append(_contour_sum(t.ravel().astype(complex), wt.ravel().astype(complex), rlog))
    elif len(sing) == 0:
        (zs, ws), clog = _full_period_sum(w, k, cfg, width)
        parts.append(_contour_sum(zs, ws, clog))
    else:
        ends = list(sing) + [sing[0] + 2 * math.pi]
        for a, b in zip(ends[:-1], ends[1:]):
            zs, ws, clog = _arc_contour(w, k, float(a), float(b), cfg, width)
            parts.append(_contour_sum(zs, ws, clog))
    Ls = [p[0] for p in parts if np.isfinite(p[0])]
    if not Ls:
        return -math.inf, 0j, -math.inf
    L = max(Ls)
    S = sum(p[1] * math.exp(p[0] - L) for p in parts if np.isfinite(p[0]))
    scale = _lse([p[2] for p in parts])
    return L, S, scale


def fourier_coefficient_pair(w: LogWeight, k: int, cfg: QuadConfig | None = None) -> tuple:
    """((sign, log|a_k|), (sign, log|b_k|)) with a_k = (1/pi) int w cos kt dt."""
    cfg = cfg or QuadConfig()
    if k < 0:
        raise PolyweightError("domain", "k must be nonnegative")
    if k % w.period_divisor:
        return (0.0, -math.inf), (0.0, -math.inf)
    width = min(2 * math.pi / cfg.panels, math.pi / (8 * max(k, 1)))
    prev = None
    ok = False
    for _ in range(6):
        L, S, scale = _complex_integral(w, k, cfg, width)
        if prev is not None:
            diff = abs(S - prev[1] * math.exp(prev[0] - L)) if np.isfinite(L) else 0.0
            floor = 1e-14 * math.exp(scale - L) if np.isfinite(scale) else 0.0
            if diff <= max(cfg.tol * 1e-2 * abs(S), floor):
                ok = True
                break
        prev = (L, S)
        width /= 2
    if not ok:
        warnings.warn("fourier_coefficient did not reach tolerance", ConvergenceWarning, stacklevel=2)
    if not np.isfinite(L):
        return (0.0, -math.inf), (0.0, -math.inf)
    re, im = S.real, S.imag
    if w.is_even:
        # sine coefficients of an even weight vanish
        # rounding noise in im is relative to the absolute sum, not to |S|
        floor = 1e-13 * math.exp(scale - L) if np.isfinite(scale) else 0.0
        if abs(im) > max(1e-6 * abs(S), floor):
            raise PolyweightError("no-convergence", "even weight produced a sine coefficient")
        im = 0.0
    base = L - math.log(math.pi)
    with np.errstate(divide="ignore"):
        return (float(np.sign(re)), base + math.log(abs(re)) if re else -math.inf), \
               (float(np.sign(im)), base + math.log(abs(im)) if im else -math.inf)


def fourier_coefficient(w: LogWeight, k: int, cfg: QuadConfig | None = None) -> float:
    """(1/pi) int_T w(t) cos kt dt."""
    (s, l), _ = fourier_coefficient_pair(w, k, cfg)
    return s * math.exp(l) if np.isfinite(l) else 0.0


def fourier_sine_coefficient(w: LogWeight, k: int, cfg: QuadConfig | None = None) -> float:
    _, (s, l) = fourier_coefficient_pair(w, k, cfg)
    return s * math.exp(l) if np.isfinite(l) else 0.0


def fourier_coefficient_log(w: LogWeight, k: int, cfg: QuadConfig | None = None) -> float:
    """log |(1/pi) int w cos kt dt|; -inf for exact zeros."""
    return fourier_coefficient_pair(w, k, cfg)[0][1]


# ---------------------------------------------------------------------------
# Remez bounds for the unweighted case


def remez_bounds(T: TrigPoly, B: IntervalSet, p: float, cfg: QuadConfig | None = None) -> dict:
    """Check the sup and L_p Remez inequalities for T against the exceptional set B."""
    from .weights import unit_weight

    cfg = cfg or QuadConfig()
    one = unit_weight()
    comp = B.complement()
    n = max(T.degree, 1)
    sup_all = weighted_sup_norm(T, one, None, cfg).log_value
    sup_off = weighted_sup_norm(T, one, comp, cfg).log_value
    lp_all = weighted_lp_norm(T, one, p, None, cfg).log_value
    lp_off = weighted_lp_norm(T, one, p, comp, cfg).log_value
    m = B.measure
    sup_rhs = 4 * n * m + sup_off
    lp_rhs = float(np.logaddexp(0.0, 4 * n * m * p)) + lp_off
    slack = 1e-9
    return {
        "sup_lhs": sup_all, "sup_rhs": sup_rhs, "sup_pass": sup_all <= sup_rhs + slack,
        "lp_lhs": lp_all, "lp_rhs": lp_rhs, "lp_pass": lp_all <= lp_rhs + slack,
    }
