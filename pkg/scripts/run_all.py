"""Run every check once and write reports, sweeps and an evolution CSV to a directory.

    python3 scripts/run_all.py OUT_DIR
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from twdirac.algebra import BoostSpec, Mode
from twdirac.bw import boost_multispinor, bw_residual, product_plane_wave, traveling_bw_residual
from twdirac.em import check_amu_identities, potential_family
from twdirac.equations import (operator_difference, residual_traveling_dirac,
                               residual_two_component_traveling)
from twdirac.evolution import Scheme, compare_runs, gaussian_state, write_csv
from twdirac.fields import boost_field, dirac_plane_wave, gaussian_packet
from twdirac.harness import SWEEPS, aggregate, order_sweep
from twdirac.pauli import (PauliParams, landau_ground_state, pauli_chain_check,
                           pauli_galilean_difference, residual_pauli)


def collect() -> list:
    out = []
    pdir = np.array([2.0, -1.0, 2.0]) / 3.0
    for p in (0.1, 0.2, 0.3):
        for speed in (0.1, 0.2, 0.3):
            b = BoostSpec((0.0, speed, 0.0))
            f = boost_field(dirac_plane_wave(p * pdir, 1.0), b)
            out.append(residual_traveling_dirac(f, 1.0, b, Mode.EXACT))
    b = BoostSpec((0.03, -0.05, 0.04))
    out.append(residual_two_component_traveling(gaussian_packet((0.3, -0.2, 0.4), 1.2, 4), 1.0, b))
    for pair, n in ((("nr_schrodinger_traveling", "naive_galilean_schrodinger"), 1),
                    (("weyl_traveling_left", "naive_galilean_weyl_left"), 2),
                    (("weyl_traveling_right", "naive_galilean_weyl_right"), 2),
                    (("nr_dirac", "nr_schrodinger_traveling"), 2)):
        out.append(operator_difference(*pair, gaussian_packet((0.3, -0.2, 0.4), 1.2, n), b, 1.3))
    for fam in ("constant", "linear", "plane"):
        out.append(check_amu_identities(potential_family(fam), BoostSpec((0.0, 0.0, 0.05))))
    psi = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    for fam in ("constant", "linear", "plane"):
        A = potential_family(fam)
        pp = PauliParams(1.3, 0.7, BoostSpec((0.0, 0.0, 0.05)))
        out.append(pauli_chain_check(psi, A, pp))
        out.append(pauli_galilean_difference(psi, A, pp))
    landau, A, _ = landau_ground_state(0.8, 1.3, 0.7, -1)
    out.append(residual_pauli(landau, A, PauliParams(1.3, 0.7)))
    F = product_plane_wave((0.1, -0.2, 0.15), 1.0)
    b = BoostSpec((0.1, 0.2, -0.15))
    for k in (0, 1):
        out.append(bw_residual(F, 1.0, k))
        out.append(traveling_bw_residual(boost_multispinor(F, b), 1.0, b, Mode.EXACT, k))
    for key in SWEEPS:
        eq, fam = key.split("/")
        out.append(order_sweep(eq, fam))
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out", type=Path)
    args = parser.parse_args(argv)
    summary = aggregate(collect(), args.out)
    g0 = gaussian_state(1, 1024, 400.0, (0.0, 0.0, 0.5), 10.0)
    series = compare_runs(g0, list(Scheme), (0.0, 0.0, 0.05), 1.0, 0.05, 200)
    write_csv(series, args.out / "evolution.csv")
    print((args.out / "summary.md").read_text())
    return 0 if summary["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
