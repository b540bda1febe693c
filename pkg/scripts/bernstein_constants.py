"""L2 Bernstein constants C(n)/n for a few weights, written as CSV and SVG.

    python3 scripts/bernstein_constants.py --out results/
"""
import argparse
import os

from polyweight.cli import csv_text, svg_text
from polyweight.extremal import bernstein_l2
from polyweight.weights import parse_weight

WEIGHTS = ["one", "omega(pow:1,sin)", "omega(pow:2,sin)", "omega(pow:2,sin) * omega(pow:4,cos)",
           "omega(exppow:1,sin)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--n", type=int, nargs="+", default=[2, 4, 8, 16, 32, 64, 128])
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for spec in WEIGHTS:
        w = parse_weight(spec)
        for n in args.n:
            r = bernstein_l2(w, n)
            rows.append({"weight": spec, "n": n, "constant_log": r.constant_log, "constant_over_rate": r.normalized,
                         "method": r.method})
            print(f"{spec:40s} n={n:4d}  C/n={r.normalized:.6f}  ({r.method})")
    with open(os.path.join(args.out, "bernstein_l2.csv"), "w") as fh:
        fh.write(csv_text(rows, ["weight", "n", "constant_log", "constant_over_rate", "method"]))
    for i, spec in enumerate(WEIGHTS):
        sub = [r for r in rows if r["weight"] == spec]
        with open(os.path.join(args.out, f"bernstein_l2_{i}.svg"), "w") as fh:
            fh.write(svg_text(sub, "n", "constant_over_rate", logx=True, title=spec))


if __name__ == "__main__":
    main()
