"""Fourier coefficient decay against exp(-c n x1(n)) and the partial-sum errors.

    python3 scripts/fourier_decay.py --out results/
"""
import argparse
import os

from polyweight.approx import fourier_decay_report, partial_sum_error
from polyweight.cli import SCHEMAS, csv_text, svg_text
from polyweight.weights import omega, solve_x1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for alpha in (1, 2):
        w = omega("power", alpha, "sin")
        rep = fourier_decay_report(w, 64, 1024)
        rows = [{"n": r.n, "coeff_log": r.coeff_log, "n_x1": r.n_x1, "censored": r.censored} for r in rep.rows]
        print(f"alpha={alpha}: fitted c={rep.c:.4f} on n in {rep.window}, window ok {rep.window_ok}, "
              f"c/2 on full range {rep.slack_ok}")
        with open(os.path.join(args.out, f"decay_alpha{alpha}.csv"), "w") as fh:
            fh.write(csv_text(rows, SCHEMAS["decay"]))
        with open(os.path.join(args.out, f"decay_alpha{alpha}.svg"), "w") as fh:
            fh.write(svg_text(rows, "n_x1", "coeff_log", title=f"alpha={alpha}"))
        for n in (16, 32, 64, 128):
            e0, e1 = partial_sum_error(w, n)
            print(f"   n={n:4d}  e0={e0:9.4f}  e1={e1:9.4f}  -c n x1(n)={-rep.c * n * solve_x1(w.f, n):9.4f}")


if __name__ == "__main__":
    main()
