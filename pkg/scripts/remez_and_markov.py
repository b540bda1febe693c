"""Remez constant fits, weighted Markov growth and MRS numbers.

    python3 scripts/remez_and_markov.py
"""
import math

import numpy as np

from polyweight.extremal import algebraic_markov_constant, mrs_number, remez_constant_fit
from polyweight.weights import omega, unit_weight


def main():
    w = omega("power", 1, "sin")
    print("Remez fits (intervals of length >= 1/n)")
    print(f"  unit weight, sup norm, n=4,8,16: random {remez_constant_fit(unit_weight(), math.inf, (4, 8, 16)):.4f}, "
          f"concentrated {remez_constant_fit(unit_weight(), math.inf, (4, 8, 16), 'concentrated'):.4f}")
    for n in (8, 16, 32, 64):
        print(f"  exp(-1/|sin t|), p=1, n={n:3d}: {remez_constant_fit(w, 1.0, (n,), 'concentrated'):.4f}")

    print("\nMarkov constants, sup norm")
    for label, wt in (("unit", unit_weight()), ("exp(-1/sin^2 t) pullback", omega("power", 2, "sin"))):
        ns = [4, 8, 16, 32] if label != "unit" else [2, 3, 4, 5, 6, 7, 8]
        cs = [algebraic_markov_constant(wt, n, math.inf, restarts=4).constant for n in ns]
        slope = np.polyfit(np.log(ns), np.log(cs), 1)[0]
        print(f"  {label}: " + ", ".join(f"{c:.3f}" for c in cs) + f"; growth exponent {slope:.3f}")

    print("\nMRS numbers for Q(x) = (1 - x^2)^-1")
    ns = np.geomspace(1e2, 1e5, 7)
    a = [mrs_number(1.0, n) for n in ns]
    for n, v in zip(ns, a):
        print(f"  n={n:9.1f}  a_n={v:.10f}")
    print(f"  slope of log(1 - a_n): {np.polyfit(np.log(ns), np.log1p(-np.array(a)), 1)[0]:.4f}")


if __name__ == "__main__":
    main()
