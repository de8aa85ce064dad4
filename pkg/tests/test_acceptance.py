"""Acceptance gate: one test (and one PASS/FAIL line) per criterion."""
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conftest import record_criterion
from twdirac.algebra import BoostSpec, Mode, identity_suite
from twdirac.bw import (MultiSpinorField, boost_multispinor, bw_residual, product_plane_wave,
                        traveling_bw_residual)
from twdirac.em import check_amu_identities, potential_family
from twdirac.equations import (operator_difference, residual_dirac, residual_nr_dirac,
                               residual_nr_schrodinger_traveling, residual_traveling_dirac,
                               residual_two_component_traveling)
from twdirac.evolution import (Scheme, compare_runs, dispersion, fitted_growth_rate,
                               gaussian_state, plane_mode_state, predicted_growth_rate, propagate)
from twdirac.fields import (PolynomialField, boost_field, dirac_plane_wave, gaussian_packet,
                            seeded_boosts, seeded_gaussian, seeded_vectors)
from twdirac.harness import fit_slope, order_sweep
from twdirac.pauli import (PauliParams, gauge_covariance_deviation, intermediate_minus_final,
                           landau_ground_state, residual_pauli, residual_traveling_pauli)
from twdirac.em import plane_wave_potential, sine_gauge

ROOT = Path(__file__).resolve().parents[1]
EPS = dict(eps_min=1e-3, eps_max=1e-1, points=8)


def _sweep_line(r):
    return f"{r.equation}/{r.family} slope {r.slope:.4f} R2 {r.r2:.5f} window {r.window}"


def test_criterion_01_algebra_identities():
    checks = identity_suite(seeded_boosts(20, 0.9), seeded_vectors(20))
    ok = all(v <= 1e-12 for v in checks.values())
    record_criterion("1", ok, ", ".join(f"{k} {v:.2e}" for k, v in checks.items()))
    assert ok


def test_criterion_02_exact_equivalence():
    pdir = np.array([2.0, -1.0, 2.0]) / 3.0
    directions = [(1, 0, 0), (0, 0, 1), (1, 1, 1)]
    worst = 0.0
    for p in (0.1, 0.2, 0.3):
        for speed in (0.1, 0.2, 0.3):
            for d in directions:
                d = np.asarray(d, float) / np.linalg.norm(d)
                b = BoostSpec(tuple(speed * d))
                f = boost_field(dirac_plane_wave(p * pdir, 1.0), b)
                worst = max(worst, residual_traveling_dirac(f, 1.0, b, Mode.EXACT).relative)
    ok = worst <= 1e-10
    record_criterion("2", ok, f"worst relative residual over 27 cases {worst:.2e}")
    assert ok


def test_criterion_03_block_form_identity():
    b = BoostSpec((0.03, -0.05, 0.04))
    families = [
        dirac_plane_wave((0.1, -0.2, 0.15), 1.0),
        boost_field(dirac_plane_wave((0.2, 0.0, 0.1), 1.3), (0.05, 0.1, -0.2)),
        gaussian_packet((0.3, -0.2, 0.4), 1.2, 4),
        PolynomialField(4, seed=9),
        seeded_gaussian(17, 4),
    ]
    worst = 0.0
    for f in families:
        fo = residual_traveling_dirac(f, 1.3, b, Mode.FIRST_ORDER).values
        tc = residual_two_component_traveling(f, 1.3, b).values
        fo = np.concatenate([fo[:, 2:], fo[:, :2]], axis=1)
        worst = max(worst, float(np.abs(fo - tc).max()))
    ok = worst <= 1e-14
    record_criterion("3", ok, f"max entrywise difference over 5 families {worst:.2e}")
    assert ok


@pytest.mark.parametrize("label,equations", [
    ("4a", ["traveling_dirac"]),
    ("4b", ["weyl_traveling_left", "weyl_traveling_right"]),
    ("4c", ["nr_dirac", "nr_schrodinger_traveling"]),
    ("4d", ["small_component"]),
])
def test_criterion_04_truncation_orders(label, equations):
    results = [order_sweep(eq, **EPS) for eq in equations]
    ok = all(1.8 <= r.slope <= 2.5 and r.r2 >= 0.98 for r in results)
    record_criterion(label, ok, "; ".join(_sweep_line(r) for r in results))
    assert ok


def test_first_order_truncation_is_third_order():
    # companion to 4a/4b/9: the measured order of the first-order boost residuals
    for eq in ("traveling_dirac", "weyl_traveling_left", "weyl_traveling_right", "traveling_bw"):
        r = order_sweep(eq, **EPS)
        assert r.slope == pytest.approx(3.0, abs=0.05) and r.r2 >= 0.99


def test_criterion_05_sigma_term_cancellation():
    b = BoostSpec((0.04, -0.02, 0.03))
    worst = 0.0
    for seed in range(50):
        f = seeded_gaussian(seed, 2)
        a = residual_nr_dirac(f, 1.1, b).values
        c = residual_nr_schrodinger_traveling(f, 1.1, b).values
        worst = max(worst, float(np.linalg.norm(a - c) / np.linalg.norm(c)))
    ok = worst <= 1e-12
    record_criterion("5", ok, f"worst relative operator difference over 50 fields {worst:.2e}")
    assert ok


def test_criterion_06_galilean_contrast():
    b = BoostSpec((0.04, -0.02, 0.03))
    pairs = [(("nr_schrodinger_traveling", "naive_galilean_schrodinger"), 1, "schrodinger"),
             (("weyl_traveling_left", "naive_galilean_weyl_left"), 2, "weyl-left"),
             (("weyl_traveling_right", "naive_galilean_weyl_right"), 2, "weyl-right")]
    worst, slopes = 0.0, []
    for pair, n, fam in pairs:
        f = gaussian_packet((0.3, -0.2, 0.4), 1.2, n)
        worst = max(worst, operator_difference(*pair, f, b, 1.3).relative)
        slopes.append(order_sweep("operator_difference", fam, **EPS).slope)
    ok = worst <= 1e-13 and all(abs(s - 1.0) <= 0.1 for s in slopes)
    record_criterion("6", ok, f"closed-form match {worst:.2e}; slopes "
                     + ", ".join(f"{s:.4f}" for s in slopes))
    assert ok


@pytest.mark.parametrize("family", ["constant", "linear", "plane"])
def test_criterion_07_em_identities(family):
    A = potential_family(family)
    betas = np.geomspace(1e-3, 1e-1, 8)
    rel = np.array([check_amu_identities(A, BoostSpec((0.0, 0.0, b))).relative for b in betas])
    slope = fit_slope(betas, np.maximum(rel, 1e-16))[0]
    ok = rel.max() <= 1e-12 and abs(slope) <= 0.1
    record_criterion(f"7[{family}]", ok, f"max relative {rel.max():.2e}, slope {slope:.3f}")
    assert ok


def test_criterion_08_pauli():
    psi = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    collapse = 0.0
    for fam in ("constant", "linear", "plane"):
        A = potential_family(fam)
        p0 = PauliParams(1.3, 0.7)
        collapse = max(collapse, float(np.abs(residual_pauli(psi, A, p0).values
                                              - residual_traveling_pauli(psi, A, p0).values).max()))
    A = plane_wave_potential(pol=(0, 1, 0), direction=(0, 0, 1))
    betas = np.geomspace(1e-3, 1e-1, 8)
    diffs = [intermediate_minus_final(psi, A, PauliParams(1.3, 0.7, BoostSpec((0, b, 0))))
             .l2_residual for b in betas]
    order = fit_slope(betas, diffs)[0]
    gauge = max(gauge_covariance_deviation(seeded_gaussian(s, 2), potential_family(fam),
                                           PauliParams(1.1, 0.6), sine_gauge())
                for s in range(3) for fam in ("constant", "linear", "plane"))
    landau = max(residual_pauli(*landau_ground_state(0.8, 1.3, 0.7, s)[:2],
                                PauliParams(1.3, 0.7)).relative for s in (1, -1))
    ok = collapse <= 1e-14 and order >= 1.8 and gauge <= 1e-12 and landau <= 1e-12
    record_criterion("8", ok, f"collapse {collapse:.1e}, intermediate-final slope {order:.3f}, "
                     f"gauge {gauge:.1e}, constant-B eigenstate {landau:.1e}")
    assert ok


def test_criterion_09_bargmann_wigner():
    g = gaussian_packet((0.2, 0.1, 0.0), 1.0, 4)
    b = BoostSpec((0.1, 0.2, -0.15))
    rank1 = (np.array_equal(bw_residual(MultiSpinorField(g, 1), 1.3).values,
                            residual_dirac(g, 1.3).values)
             and np.array_equal(traveling_bw_residual(MultiSpinorField(g, 1), 1.3, b).values,
                                residual_traveling_dirac(g, 1.3, b).values))
    F = boost_multispinor(product_plane_wave((0.1, -0.2, 0.15), 1.0), b)
    exact = max(traveling_bw_residual(F, 1.0, b, Mode.EXACT, k).relative for k in (0, 1))
    sweep = order_sweep("traveling_bw", **EPS)
    ok = rank1 and exact <= 1e-10 and abs(sweep.slope - 2.0) <= 0.3
    record_criterion("9", ok, f"rank-1 identical {rank1}, rank-2 exact {exact:.1e}, "
                     f"first-order slope {sweep.slope:.4f}")
    assert ok


def test_criterion_10_evolution():
    v, m = (0.02, 0.0, 0.1), 1.0
    g = plane_mode_state(1, 64, 40.0, 3)
    k = np.array([0.0, 0.0, 2 * np.pi * 3 / 40.0])
    phase = max(float(np.abs(propagate(g, s, v, m, 0.37, 1000).amp
                             - g.amp * np.exp(-1j * dispersion(s, k, v, m) * 370.0)).max())
                for s in Scheme)
    packet = gaussian_state(1, 256, 100.0, (0, 0, 0.5), 5.0)
    runs = compare_runs(packet, list(Scheme), (0, 0, 0.05), 1.0, 0.05, 1000)
    drift = max(float(np.abs(runs.norms[s] - runs.norms[s][0]).max()) for s in Scheme)
    omega = float(dispersion("traveling", [0, 0, 1], [0, 0, 0.1], 1.0))
    g0 = gaussian_state(1, 1024, 400.0, (0, 0, 0.5), 10.0)
    s = compare_runs(g0, ["traveling", "naive_galilean"], (0, 0, 0.05), 1.0, 0.05, 40)
    fitted = fitted_growth_rate(s.t, s.deviation("traveling", "naive_galilean"))
    predicted = predicted_growth_rate(g0, "traveling", "naive_galilean", (0, 0, 0.05), 1.0)
    growth = abs(fitted / predicted - 1)
    ok = phase <= 1e-12 and drift <= 1e-12 and abs(omega - 0.47619048) <= 1e-8 and growth <= 0.1
    record_criterion("10", ok, f"mode phase {phase:.1e}, norm drift {drift:.1e}, "
                     f"omega {omega:.8f}, growth-rate mismatch {growth:.3f}")
    assert ok


def test_criterion_11_determinism(tmp_path):
    script = ROOT / "scripts" / "run_all.py"
    for name in ("a", "b"):
        subprocess.run([sys.executable, str(script), str(tmp_path / name)], check=False,
                       capture_output=True)
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*")
                     if p.suffix in (".json", ".csv"))
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*")
                     if p.suffix in (".json", ".csv"))
    same = files_a == files_b and len(files_a) > 0 and all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files_a)
    record_criterion("11", same, f"{len(files_a)} JSON/CSV files byte-identical across two runs")
    assert same


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
