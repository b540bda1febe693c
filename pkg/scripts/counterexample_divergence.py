"""Schedules for the divergent Bernstein ratio and the measured ratios R_n.

Prints the neg11 schedule (feasible and flagged rows), the divergence rows at
p = inf and, with --finite-p, the same rows in L_p.

    python3 scripts/counterexample_divergence.py --n 2 3 4 5 6 --finite-p 2
"""
import argparse
import math

from polyweight.construct import divergence_report, neg11_schedule, neg_schedule
from polyweight.weights import omega


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4, 5, 6, 7])
    ap.add_argument("--finite-p", type=float, default=None)
    args = ap.parse_args()
    w = omega("exp-power", 1, "sin")

    s = neg11_schedule(w, args.n)
    print("n   lambda     a            K            feasible")
    for r in s.rows:
        print(f"{r.n:<3d} {r.lam:.4f}  {r.a:.6e}  {r.K if r.K is not None else 'overflow':<12}  {r.feasible}")

    print("\nn   K          R          LB         b/a        R*sqrt(1-lam^2)")
    lam = {r.n: r.lam for r in s.rows}
    for d in divergence_report(w, s, math.inf):
        print(f"{d.n:<3d} {d.K:<10d} {d.R:.5f}   {d.LB:.5f}   {d.b_over_a:.4f}     "
              f"{d.R * math.sqrt(1 - lam[d.n] ** 2):.4f}")
    if args.finite_p:
        print(f"\nL_{args.finite_p:g} ratios")
        for d in divergence_report(w, s, args.finite_p):
            print(f"{d.n:<3d} {d.K:<10d} {d.R:.5f}")

    print("\nlambda_n = sqrt(1 - n^-1/2) schedule diagnostics")
    ns = [2 ** k for k in range(4, 11)]
    for r in neg_schedule(w, ns).rows:
        d = r.diagnostics
        print(f"n={r.n:<5d} a={r.a:.5f}  p13={d['p13']:.3f}  p14(r=0.5)={d['p14_r0.5']:.3f}  "
              f"p14(r=0.9)={d['p14_r0.9']:.3f}  z<h: {d['z_below_h']}")


if __name__ == "__main__":
    main()
