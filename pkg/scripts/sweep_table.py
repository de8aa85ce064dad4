"""Print the fitted truncation order of every registered sweep along a few boost directions."""
from __future__ import annotations

from twdirac.harness import SWEEPS, order_sweep

DIRECTIONS = [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (1.0, 2.0, -2.0)]


def main() -> None:
    print(f"{'sweep':48s} {'direction':>16s} {'slope':>7s} {'R2':>8s}  window")
    for key in SWEEPS:
        eq, fam = key.split("/")
        for d in DIRECTIONS:
            r = order_sweep(eq, fam, d)
            tag = "ok" if r.passed else "outside"
            print(f"{key:48s} {str(d):>16s} {r.slope:7.3f} {r.r2:8.5f}  {r.window} {tag}")


if __name__ == "__main__":
    main()
