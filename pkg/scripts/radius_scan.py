#!/usr/bin/env python3
"""Scan ratio estimates of the convergence radius against the bracket.

Computes the even coefficients a_{2k} of the developed series up to the
requested level and prints sqrt(a_{2k} / a_{2k+2}) for each k, alongside
the certified pole bracket the tail should approach.
"""

import argparse
from fractions import Fraction

from disksig.hierarchy import HierarchyState, a_coefficients, radius_estimate
from disksig.polefinder import locate_pole


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=60,
                    help="highest series level to compute (default 60)")
    args = ap.parse_args()

    state = HierarchyState()
    a_vals = a_coefficients(state, args.levels)
    estimates = radius_estimate(a_vals)

    cert = locate_pole(Fraction(1, 1000))
    lo, hi = float(cert.bracket_lo), float(cert.bracket_hi)
    print(f"certified pole bracket: [{lo:.6f}, {hi:.6f}]")
    print(f"{'k':>4}  {'lambda_hat':>18}")
    for k, est in enumerate(estimates, start=1):
        marker = " <- inside bracket" if lo <= est <= hi else ""
        print(f"{k:>4}  {est:>18.12f}{marker}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
