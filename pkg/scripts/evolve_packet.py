"""Evolve one Gaussian packet under the three dispersion laws and report the deviation growth."""
from __future__ import annotations

import argparse

from twdirac.evolution import (Scheme, compare_runs, fitted_growth_rate, gaussian_state,
                               predicted_growth_rate, write_csv)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v", type=float, default=0.05)
    ap.add_argument("--k0", type=float, default=0.5)
    ap.add_argument("--width", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=40)
    ap.add_argument("--dt", type=float, default=0.05)
    ap.add_argument("--csv")
    args = ap.parse_args()
    v = (0.0, 0.0, args.v)
    g0 = gaussian_state(1, 1024, 400.0, (0.0, 0.0, args.k0), args.width)
    s = compare_runs(g0, list(Scheme), v, 1.0, args.dt, args.steps)
    for a, b in s.deviations:
        fit = fitted_growth_rate(s.t, s.deviations[(a, b)])
        pred = predicted_growth_rate(g0, a, b, v, 1.0)
        print(f"{a.value:>16s} vs {b.value:<16s} fitted {fit:.6f}  predicted {pred:.6f}")
    if args.csv:
        write_csv(s, args.csv)


if __name__ == "__main__":
    main()
