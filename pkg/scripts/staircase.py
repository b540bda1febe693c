"""Subsequence Bernstein check for the staircase weight.

    python3 scripts/staircase.py --gamma 0.05
"""
import argparse
import math

from polyweight.construct import staircase_bernstein_check, staircase_weight


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=8)
    args = ap.parse_args()
    sw = staircase_weight(args.gamma)
    print(f"first separated level n0={sw.n0}")
    for n in sw.levels()[:6]:
        print(f"  n={n}: log d_n={sw.log_d(n):.4g}  log alpha_n={sw.log_alpha(n):.4g}  K_n={sw.K(n)}")
    rep = staircase_bernstein_check(sw, trials=args.trials)
    for r in rep.rows:
        print(f"row n={r.n}: K={r.K}  C={r.C:.4f}  times 100: {r.C_scaled:.2f}")
    print(f"spread of C across rows: {rep.spread:.4f}")
    print(f"ratio at the level edges, n=5..8: "
          + ", ".join(f"{sw.e20_ratio(n):.4f} (exp(gamma(2n+1))={math.exp(args.gamma * (2 * n + 1)):.4f})"
                      for n in range(5, 9)))


if __name__ == "__main__":
    main()
