"""Batch experiment driver: ``polyweight <command> [options]``.

Each command evaluates a grid of n values, writes CSV/JSON/SVG artifacts and
exits with 0 when every row-level check passes, 1 when some check fails and 2
on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import PolyweightError

SCHEMA_VERSION = 1
COMMANDS = ("bernstein", "remez", "nikolskii", "decay", "equiv-k", "counterexample",
            "markov", "mrs", "weight-info", "staircase")

SCHEMAS = {
    "bernstein": ["n", "constant_log", "constant_over_rate"],
    "nikolskii": ["n", "constant_log", "constant_over_rate"],
    "markov": ["n", "constant_log", "constant_over_rate"],
    "remez": ["n", "C_fit", "checks", "checks_passed"],
    "decay": ["n", "coeff_log", "n_x1", "censored"],
    "equiv-k": ["n", "K", "worst_log_ratio"],
    "counterexample": ["n", "K", "R", "LB", "b_over_a"],
    "mrs": ["n", "a", "one_minus_a_log"],
    "weight-info": ["n", "x0", "x1"],
    "staircase": ["n", "K", "C"],
}

DEFAULT_P = {"markov": math.inf, "counterexample": math.inf, "remez": math.inf}

# which columns are fitted or censored rather than directly computed
PROVENANCE = {
    "remez": {"C_fit": "fitted"},
    "decay": {"coeff_log": "computed", "censored": "censored"},
}


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    command: str
    weight: str = "omega(pow:1,sin)"
    n: tuple = (4, 8, 16)
    p: float | None = None  # None picks the command's default, see DEFAULT_P
    q: float = math.inf
    C: float | None = None
    alpha: float = 1.0
    gamma: float = 0.05
    tol: float = 1e-9
    seed: int = 0
    restarts: int = 16
    samples: int = 40
    family: str = "concentrated"
    csv: str | None = None
    json: str | None = None
    svg: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PolyweightError("usage", f"unknown command {self.command!r}")
        self.n = tuple(int(v) for v in self.n)
        for name in ("q", "alpha", "gamma", "tol"):
            setattr(self, name, float(getattr(self, name)))
        for name in ("p", "C"):
            if getattr(self, name) is not None:
                setattr(self, name, float(getattr(self, name)))

    @property
    def p_value(self) -> float:
        return DEFAULT_P.get(self.command, 2.0) if self.p is None else self.p

    def to_text(self) -> str:
        d = dataclasses.asdict(self)
        d["n"] = list(self.n)
        # keep the text standard JSON: non-finite floats travel as strings
        d = {k: (_fmt(v) if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_text(text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise PolyweightError("parse", f"line {e.lineno} column {e.colno}: {e.msg}") from None
        if not isinstance(d, dict):
            raise PolyweightError("parse", "line 1 column 1: expected a JSON object")
        names = {f.name for f in dataclasses.fields(ExperimentConfig)}
        for key in d:
            if key not in names:
                line, col = _locate(text, f'"{key}"')
                raise PolyweightError("parse", f"line {line} column {col}: unknown field {key!r}")
        if "command" not in d:
            raise PolyweightError("parse", "line 1 column 1: missing field 'command'")
        try:
            return ExperimentConfig(**d)
        except (TypeError, ValueError) as e:
            if isinstance(e, PolyweightError) and e.code == "usage":
                line, col = _locate(text, '"command"')
                raise PolyweightError("parse", f"line {line} column {col}: {e}") from None
            raise PolyweightError("parse", f"line 1 column 1: {e}") from None


def _locate(text: str, token: str) -> tuple:
    i = text.find(token)
    if i < 0:
        return 1, 1
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


def parse_n_list(text: str) -> tuple:
    """'4,8,16', '3..6' or mixtures such as '2,4..6'."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if ".." in item:
                a, b = item.split("..", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(item))
        except ValueError:
            raise PolyweightError("usage", f"bad n list {text!r}") from None
    if not out:
        raise PolyweightError("usage", "empty n list")
    return tuple(out)


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def csv_text(rows, schema) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(schema)
    for r in rows:
        wr.writerow([_fmt(r.get(c)) for c in schema])
    return buf.getvalue()


def emit_csv(rows, schema, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(rows, schema))


def _ticks(lo: float, hi: float, k: int = 5) -> list:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def svg_text(rows, x: str, y: str, logx: bool = False, title: str = "") -> str:
    W, H, L, R, T, B = 640, 400, 70, 20, 30, 50
    pts = []
    for r in rows:
        xv, yv = r.get(x), r.get(y)
        if isinstance(xv, (int, float)) and isinstance(yv, (int, float)) and math.isfinite(xv) and math.isfinite(yv):
            if logx and xv <= 0:
                continue
            pts.append((math.log10(xv) if logx else float(xv), float(yv)))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<line x1="{L}" y1="{H - B}" x2="{W - R}" y2="{H - B}" stroke="black"/>',
           f'<line x1="{L}" y1="{T}" x2="{L}" y2="{H - B}" stroke="black"/>']
    if title:
        out.append(f'<text x="{W // 2}" y="18" text-anchor="middle" font-size="13">{title}</text>')
    xl = f"log10({x})" if logx else x
    out.append(f'<text x="{(L + W - R) // 2}" y="{H - 12}" text-anchor="middle" font-size="12">{xl}</text>')
    out.append(f'<text x="14" y="{(T + H - B) // 2}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 14 {(T + H - B) // 2})">{y}</text>')
    if pts:
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x0, x1 = x0 - 1, x1 + 1
        if y1 == y0:
            y0, y1 = y0 - 1, y1 + 1
        sx = lambda v: L + (v - x0) / (x1 - x0) * (W - L - R)
        sy = lambda v: H - B - (v - y0) / (y1 - y0) * (H - T - B)
        for v in _ticks(x0, x1):
            out.append(f'<text x="{sx(v):.2f}" y="{H - B + 16}" text-anchor="middle" font-size="10">{v:.4g}</text>')
        for v in _ticks(y0, y1):
            out.append(f'<text x="{L - 6}" y="{sy(v) + 3:.2f}" text-anchor="end" font-size="10">{v:.4g}</text>')
        path = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
        out.append(f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{path}"/>')
        for a, b in pts:
            out.append(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="2.5" fill="#1f5fa8"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(rows, x: str, y: str, path: str, logx: bool = False, title: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_text(rows, x, y, logx, title))


PLOTS = {
    "bernstein": ("n", "constant_over_rate", True),
    "nikolskii": ("n", "constant_over_rate", True),
    "markov": ("n", "constant_over_rate", True),
    "remez": ("n", "C_fit", True),
    "decay": ("n_x1", "coeff_log", False),
    "equiv-k": ("n", "K", True),
    "counterexample": ("n", "R", False),
    "mrs": ("n", "one_minus_a_log", True),
    "weight-info": ("n", "x1", True),
    "staircase": ("n", "C", False),
}


# ---------------------------------------------------------------------------
# running


@dataclass
class RunReport:
    config: ExperimentConfig
    rows: list
    checks: dict
    extra: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        cols = SCHEMAS[self.config.command]
        prov = {c: PROVENANCE.get(self.config.command, {}).get(c, "computed") for c in cols}
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.version,
            "config": json.loads(self.config.to_text()),
            "columns": cols,
            "provenance": prov,
            "rows": [{k: _json_value(v) for k, v in r.items()} for r in self.rows],
            "checks": self.checks,
            "passed": self.passed,
            "extra": _json_value(self.extra),
            "wall_clock_s": self.wall_clock,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _json_value(v):
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else _fmt(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _threads() -> int:
    env = os.environ.get("POLYWEIGHT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise PolyweightError("usage", "POLYWEIGHT_THREADS must be an integer") from None
    return os.cpu_count() or 1


def _map_rows(fn, ns) -> list:
    """Evaluate fn(n) for every n; errors become rows instead of aborting the batch."""
    def safe(n):
        try:
            return fn(n)
        except PolyweightError as e:
            return {"n": n, "error": str(e), "ok": False}
    workers = min(_threads(), max(1, len(ns)))
    if workers == 1:
        return [safe(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(safe, ns))


def _single_omega(spec: str):
    from .weights import parse_weight
    w = parse_weight(spec)
    if len(w.factors) != 1 or w.u is not None or w.log_scale != 0.0:
        raise PolyweightError("bad-spec", "this command needs a single omega(...) factor")
    return w.factors[0]


def _cfg(config):
    from .quad import QuadConfig
    return QuadConfig(tol=config.tol)


def _run_bernstein(c):
    from .extremal import bernstein_l2, bernstein_lp
    from .weights import parse_weight
    w = parse_weight(c.weight)

    def row(n):
        r = bernstein_l2(w, n, _cfg(c)) if c.p_value == 2.0 else bernstein_lp(w, n, c.p_value, c.restarts, c.seed, _cfg(c))
        return {"n": n, "constant_log": r.constant_log, "constant_over_rate": r.normalized,
                "ok": math.isfinite(r.constant_log)}
    return _map_rows(row, c.n), {}


def _run_markov(c):
    from .extremal import algebraic_markov_constant
    from .weights import parse_weight
    w = parse_weight(c.weight)

    def row(n):
        r = algebraic_markov_constant(w, n, c.p_value, c.restarts, c.seed, _cfg(c))
        return {"n": n, "constant_log": r.constant_log, "constant_over_rate": r.normalized,
                "ok": math.isfinite(r.constant_log)}
    return _map_rows(row, c.n), {}


def _run_nikolskii(c):
    from .extremal import nikolskii_ratio
    from .weights import parse_weight
    w = parse_weight(c.weight)

    def row(n):
        r = nikolskii_ratio(w, n, c.p_value, c.q, c.restarts, c.seed, _cfg(c))
        return {"n": n, "constant_log": r.constant_log, "constant_over_rate": r.normalized,
                "ok": math.isfinite(r.constant_log)}
    return _map_rows(row, c.n), {}


def _run_remez(c):
    from .extremal import _sample_E, _sample_T, remez_constant_fit, remez_verify
    from .weights import parse_weight
    w = parse_weight(c.weight)

    def row(n):
        fit = remez_constant_fit(w, c.p_value, [n], c.family, "intervals", c.samples, c.seed, _cfg(c))
        checks = passed = 0
        if c.C is not None:
            rng = np.random.default_rng(c.seed + n)
            for _ in range(c.samples):
                E = _sample_E(n, "intervals", rng)
                T = _sample_T(n, c.family, E, rng)
                checks += 1
                passed += remez_verify(w, c.p_value, T, E, c.C, _cfg(c)).passed
        return {"n": n, "C_fit": fit, "checks": checks, "checks_passed": passed, "ok": passed == checks}
    return _map_rows(row, c.n), {}


def _run_decay(c):
    from .approx import fourier_decay_report
    w = _single_omega(c.weight)
    lo, hi = min(c.n), max(c.n)
    rep = fourier_decay_report(w, lo, hi, points=17, cfg=_cfg(c))
    rows = [{"n": r.n, "coeff_log": r.coeff_log, "n_x1": r.n_x1, "censored": r.censored, "ok": True}
            for r in rep.rows]
    return rows, {"c": rep.c, "window": list(rep.window), "window_ok": rep.window_ok,
                  "slack_ok": rep.slack_ok, "ok": rep.passed and rep.slack_ok}


def _run_equiv(c):
    from .approx import norm_equivalence_K
    w = _single_omega(c.weight)

    def row(n):
        rep = norm_equivalence_K(w, None, c.p_value, n, 64, cfg=_cfg(c))
        worst = rep.worst.get(rep.K, max(rep.worst.values()) if rep.worst else math.nan)
        return {"n": n, "K": rep.K, "worst_log_ratio": worst, "ok": rep.found}
    return _map_rows(row, c.n), {}


def _run_counterexample(c):
    from .construct import divergence_report, neg11_schedule
    w = _single_omega(c.weight)
    s = neg11_schedule(w, c.n)
    div = divergence_report(w, s, c.p_value, _cfg(c))
    rows = [{"n": d.n, "K": d.K, "R": d.R, "LB": d.LB, "b_over_a": d.b_over_a, "ok": d.ok} for d in div]
    inc = all(b["R"] > a["R"] for a, b in zip(rows, rows[1:]))
    sched = [{"n": r.n, "lambda": r.lam, "a": r.a, "c": r.z, "K": r.K, "feasible": r.feasible,
              **r.diagnostics} for r in s.rows]
    return rows, {"schedule": sched, "R_increasing": inc, "ok": inc}


def _run_mrs(c):
    from .extremal import mrs_number

    def row(n):
        a = mrs_number(c.alpha, n)
        return {"n": n, "a": a, "one_minus_a_log": math.log1p(-a), "ok": 0 < a < 1}
    rows = _map_rows(row, c.n)
    good = [r for r in rows if "a" in r]
    extra = {}
    if len(good) >= 2:
        slope = np.polyfit(np.log([r["n"] for r in good]), [r["one_minus_a_log"] for r in good], 1)[0]
        extra["slope"] = float(slope)
    return rows, extra


def _run_weight_info(c):
    from .weights import astar_constant, doubling_ratio, parse_weight, solve_x0, solve_x1
    w = parse_weight(c.weight)
    rows = []
    for n in c.n:
        row = {"n": n, "ok": True}
        if len(w.factors) == 1:
            f = w.factors[0].f
            try:
                row["x0"] = solve_x0(f, n)
                row["x1"] = solve_x1(f, n)
            except PolyweightError as e:
                row.update(error=str(e), ok=False)
        rows.append(row)
    extra = {"doubling_ratio": doubling_ratio(w, 256), "astar_constant": astar_constant(w, 256)}
    return rows, extra


def _run_staircase(c):
    from .construct import staircase_bernstein_check, staircase_weight
    sw = staircase_weight(c.gamma)
    rep = staircase_bernstein_check(sw, list(c.n) if c.n else None, trials=8, seed=c.seed, cfg=_cfg(c))
    rows = [{"n": r.n, "K": r.K, "C": r.C, "ok": math.isfinite(r.C)} for r in rep.rows]
    return rows, {"spread": rep.spread, "n0": sw.n0}


RUNNERS = {
    "bernstein": _run_bernstein, "remez": _run_remez, "nikolskii": _run_nikolskii,
    "decay": _run_decay, "equiv-k": _run_equiv, "counterexample": _run_counterexample,
    "markov": _run_markov, "mrs": _run_mrs, "weight-info": _run_weight_info,
    "staircase": _run_staircase,
}


def run(config: ExperimentConfig) -> RunReport:
    t0 = time.perf_counter()
    rows, extra = RUNNERS[config.command](config)
    checks = {f"row_{i}_n{r.get('n')}": bool(r.get("ok", True)) for i, r in enumerate(rows)}
    if "ok" in extra:
        checks["summary"] = bool(extra.pop("ok"))
    return RunReport(config, rows, checks, extra, time.perf_counter() - t0)


def write_outputs(rep: RunReport) -> None:
    c = rep.config
    schema = SCHEMAS[c.command]
    if c.csv:
        emit_csv(rep.rows, schema, c.csv)
    if c.json:
        with open(c.json, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json())
    if c.svg:
        x, y, logx = PLOTS[c.command]
        emit_plot(rep.rows, x, y, c.svg, logx, c.command)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polyweight", description="Weighted polynomial inequality experiments.")
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", help="JSON experiment config (command line options override it)")
    ap.add_argument("--weight")
    ap.add_argument("--n", help="list such as 4,8,16 or a range 3..6")
    ap.add_argument("--p", type=float)
    ap.add_argument("--q", type=float)
    ap.add_argument("--C", type=float)
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--gamma", type=float)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--restarts", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--family", choices=("random", "concentrated"))
    ap.add_argument("--csv")
    ap.add_argument("--json")
    ap.add_argument("--svg")
    ap.add_argument("--version", action="version", version=f"polyweight {__version__}")
    return ap


def config_from_args(args) -> ExperimentConfig:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = dataclasses.asdict(ExperimentConfig.from_text(fh.read()))
    if args.command:
        base["command"] = args.command
    if "command" not in base:
        raise PolyweightError("usage", "a command is required")
    for name in ("weight", "p", "q", "C", "alpha", "gamma", "tol", "seed", "restarts", "samples",
                 "family", "csv", "json", "svg"):
        v = getattr(args, name)
        if v is not None:
            base[name] = v
    if args.n is not None:
        base["n"] = parse_n_list(args.n)
    return ExperimentConfig(**base)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:  # usage errors, --help and --version
        return int(e.code or 0)
    try:
        config = config_from_args(args)
    except PolyweightError as e:
        ap.print_usage(sys.stderr)
        print(f"polyweight: error: {e}", file=sys.stderr)
        return 2
    try:
        rep = run(config)
    except PolyweightError as e:
        code = 2 if e.code in ("parse", "bad-spec", "usage") else 1
        print(f"polyweight: error: {e}", file=sys.stderr)
        return code
    write_outputs(rep)
    sys.stdout.write(csv_text(rep.rows, SCHEMAS[config.command]))
    for name, ok in rep.checks.items():
        if not ok:
            print(f"check failed: {name}", file=sys.stderr)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
