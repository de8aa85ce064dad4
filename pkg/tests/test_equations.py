import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twdirac.algebra import BoostSpec, Mode
from twdirac.equations import (EquationId, make_report, operator_difference,
                               residual_dirac, residual_massive_two_component_traveling,
                               residual_naive_galilean_schrodinger, residual_nr_dirac,
                               residual_nr_schrodinger_traveling, residual_traveling_dirac,
                               residual_two_component_traveling, residual_weyl_traveling,
                               schrodinger_mode, small_component, small_component_deviation)
from twdirac.fields import (PolynomialField, SamplePlan, big_component, boost_field,
                            dirac_plane_wave, gaussian_packet, massless_plane_wave,
                            seeded_gaussian, small_component_exact, strip_rest_mass)

PLAN = SamplePlan(counts=(3, 3, 3, 3), extra=40)


def four_component_families():
    return [
        dirac_plane_wave((0.1, -0.2, 0.15), 1.0),
        boost_field(dirac_plane_wave((0.2, 0.0, 0.1), 1.3), (0.05, 0.1, -0.2)),
        gaussian_packet((0.3, -0.2, 0.4), 1.2, 4),
        PolynomialField(4, seed=9),
        seeded_gaussian(17, 4),
    ]


def test_report_relative_and_schema():
    r = make_report("dirac", [np.ones((4, 2)), -np.ones((4, 2)) * 0.5], tol=1e-3)
    assert r.l2_reference == pytest.approx(np.sqrt(2))
    assert r.relative == pytest.approx(0.5)
    assert not r.passed
    assert set(r.to_dict()) == {"equation", "family", "params", "beta", "mode", "samples",
                                "l2_residual", "max_residual", "l2_reference", "relative",
                                "tolerance", "pass"}


def test_equation_id_parsing():
    assert EquationId.parse("traveling-dirac") is EquationId.TRAVELING_DIRAC
    assert EquationId.parse("weyl_traveling_l") is EquationId.WEYL_TRAVELING_LEFT
    with pytest.raises(ValueError):
        EquationId.parse("nonsense")


def test_dirac_plane_wave_is_solution():
    assert residual_dirac(dirac_plane_wave((0.3, 0.1, -0.2), 1.7, 1), 1.7).relative <= 1e-14


def test_dirac_rejects_wrong_components():
    with pytest.raises(ValueError):
        residual_dirac(gaussian_packet((0, 0, 0), 1.0, 2), 1.0)


@given(st.floats(0.0, 0.3), st.floats(0.0, 0.3), st.sampled_from(
    [(0, 0, 1), (1, 0, 0), (1, 1, 1), (2, -1, 2)]))
def test_exact_traveling_dirac(p_ratio, speed, direction):
    d = np.asarray(direction, float) / np.linalg.norm(direction)
    f = dirac_plane_wave(p_ratio * np.array([0.6, 0.0, 0.8]), 1.0)
    b = BoostSpec(tuple(speed * d))
    assert residual_traveling_dirac(boost_field(f, b), 1.0, b, Mode.EXACT).relative <= 1e-10


def test_unboosted_traveling_reduces_to_dirac():
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 4)
    a = residual_traveling_dirac(f, 1.0, (0, 0, 0), Mode.FIRST_ORDER).values
    assert np.array_equal(a, residual_dirac(f, 1.0).values)


def _as_chiral_pair(values):
    # Dirac rows are ordered (R-equation, L-equation); two-component output is (L, R)
    return np.concatenate([values[:, 2:], values[:, :2]], axis=1)


@pytest.mark.parametrize("f", four_component_families(), ids=lambda f: f.family)
def test_block_form_matches_first_order_dirac(f):
    b = BoostSpec((0.03, -0.05, 0.04))
    fo = residual_traveling_dirac(f, 1.3, b, Mode.FIRST_ORDER, PLAN).values
    tc = residual_two_component_traveling(f, 1.3, b, PLAN).values
    assert np.abs(_as_chiral_pair(fo) - tc).max() <= 1e-14 * max(1.0, np.abs(tc).max())


@pytest.mark.parametrize("f", four_component_families(), ids=lambda f: f.family)
def test_massive_form_matches_block_form(f):
    b = BoostSpec((0.03, -0.05, 0.04))
    a = residual_massive_two_component_traveling(f, 0.7, b, PLAN).values
    c = residual_two_component_traveling(f, 0.7, b, PLAN).values
    assert np.abs(a - c).max() <= 1e-13


def test_first_order_dirac_residual_is_third_order():
    # the O(eta^2) part of the first-order bispinor boost is a multiple of the identity
    res = []
    etas = np.array([0.01, 0.02, 0.04])
    for eta in etas:
        b = BoostSpec.from_rapidity(eta, (0, 0.6, 0.8))
        f = boost_field(dirac_plane_wave((0.02, -0.01, 0.02), 1.0), b)
        res.append(residual_traveling_dirac(f, 1.0, b, Mode.FIRST_ORDER).relative)
    slopes = np.diff(np.log(res)) / np.diff(np.log(etas))
    assert np.allclose(slopes, 3.0, atol=0.05)


@pytest.mark.parametrize("chirality", ["L", "R"])
def test_weyl_unboosted_plane_wave(chirality):
    f = massless_plane_wave((0.3, -0.4, 1.2), chirality)
    assert residual_weyl_traveling(f, (0, 0, 0), chirality).relative <= 1e-14


@pytest.mark.parametrize("chirality", ["L", "R"])
def test_massless_limit_of_massive_form_is_weyl(chirality):
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 4)
    b = BoostSpec((0.02, 0.01, -0.03))
    massive = residual_massive_two_component_traveling(f, 1e-300, b, PLAN).values
    sl = slice(0, 2) if chirality == "L" else slice(2, 4)
    g = boost_field(f, (0, 0, 0))
    from twdirac.fields import MatrixField
    proj = np.eye(4)[sl]
    weyl = residual_weyl_traveling(MatrixField(g, proj), b, chirality, PLAN).values
    assert np.abs(massive[:, sl] - weyl).max() <= 1e-14


def test_schrodinger_mode_is_exact_solution():
    f = schrodinger_mode((0.3, -0.2, 0.5), 1.2, (0.02, 0.03, -0.01))
    r = residual_nr_schrodinger_traveling(f, 1.2, (0.02, 0.03, -0.01))
    assert r.relative <= 1e-14


def test_naive_schrodinger_at_zero_velocity_is_free():
    f = schrodinger_mode((0.3, -0.2, 0.5), 1.2)
    assert residual_naive_galilean_schrodinger(f, 1.2, (0, 0, 0)).relative <= 1e-14


@pytest.mark.parametrize("seed", range(50))
def test_sigma_terms_cancel(seed):
    f = seeded_gaussian(seed, 2)
    b = BoostSpec((0.04, -0.02, 0.03))
    a = residual_nr_dirac(f, 1.1, b, PLAN)
    c = residual_nr_schrodinger_traveling(f, 1.1, b, PLAN)
    assert np.linalg.norm(a.values - c.values) / np.linalg.norm(c.values) <= 1e-12


@pytest.mark.parametrize("pair,n", [
    (("nr_schrodinger_traveling", "naive_galilean_schrodinger"), 1),
    (("weyl_traveling_left", "naive_galilean_weyl_left"), 2),
    (("weyl_traveling_right", "naive_galilean_weyl_right"), 2),
    (("nr_dirac", "nr_schrodinger_traveling"), 2),
    (("two_component_traveling", "massive_two_component_traveling"), 4),
])
def test_registered_differences(pair, n):
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, n)
    b = BoostSpec((0.04, -0.02, 0.03))
    assert operator_difference(*pair, f, b, 1.3, PLAN).relative <= 1e-13
    assert operator_difference(pair[1], pair[0], f, b, 1.3, PLAN).relative <= 1e-13


def test_difference_of_operator_with_itself_is_zero():
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    r = operator_difference("nr_dirac", "nr_dirac", f, (0.1, 0, 0), 1.0, PLAN)
    assert r.l2_residual == 0.0


def test_unregistered_difference_raises():
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    with pytest.raises(KeyError):
        operator_difference("nr_dirac", "weyl_traveling_left", f, (0.1, 0, 0), 1.0, PLAN)


def test_small_component_formula_for_plane_wave_and_jet_agree():
    b = BoostSpec((0.0, 0.05, 0.02))
    stripped = strip_rest_mass(boost_field(dirac_plane_wave((0.02, 0.01, 0.0), 1.0), b), 1.0)
    big = big_component(stripped)
    X = PLAN.events()
    via_jet = small_component(big, 1.0, b).jet(X).val
    pw = stripped.__class__(big.jet(np.zeros((1, 4))).val[0], stripped.k_lower)
    via_pw = small_component(pw, 1.0, b).jet(X).val
    assert np.allclose(via_jet, via_pw, atol=1e-14)
    assert small_component_deviation(big, small_component_exact(stripped), 1.0, b,
                                      PLAN).relative < 1e-2


def test_nr_forms_validate_mass():
    f = gaussian_packet((0, 0, 0), 1.0, 2)
    with pytest.raises(ValueError):
        residual_nr_dirac(f, 0.0, (0, 0, 0))
