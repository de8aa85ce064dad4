import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twdirac.algebra import BoostSpec, Mode
from twdirac.em import (amu_terms, check_amu_identities, constant_potential, derive_fields,
                        divergence_b, fd_check_potential, gauge_transform, plane_wave_potential,
                        potential_family, predicted_amu_residual, sine_gauge, transform_potential,
                        uniform_field_potential)
from twdirac.fields import SamplePlan

PLAN = SamplePlan(counts=(3, 3, 3, 3), extra=40)
small = st.floats(-0.08, 0.08)


def test_constant_potential_transform_example():
    A = transform_potential(constant_potential(1.0), (0, 0, 0.1), Mode.FIRST_ORDER)
    phi, _, Av, _ = A.jet(np.zeros((1, 4)))
    assert phi[0] == pytest.approx(1.0)
    assert np.allclose(Av[0], [0, 0, 0.1])


def test_exact_transform_agrees_to_first_order():
    A = plane_wave_potential()
    X = PLAN.events()
    for beta in (0.01, 0.02):
        a = transform_potential(A, (0, beta, beta), Mode.EXACT).jet(X)[2]
        c = transform_potential(A, (0, beta, beta), Mode.FIRST_ORDER).jet(X)[2]
        assert np.abs(a - c).max() < 10 * beta**2


def test_fields_of_uniform_potential():
    F = derive_fields(uniform_field_potential(0.3, 0.4))
    X = PLAN.events()
    assert np.allclose(F.evec(X), [0, 0, 0.3])
    assert np.allclose(F.bvec(X), [0, 0, 0.4])


def test_plane_wave_fields_are_transverse_and_equal():
    F = derive_fields(plane_wave_potential())
    X = PLAN.events()
    E, B = F.evec(X), F.bvec(X)
    assert np.allclose(E[:, 2], 0) and np.allclose(B[:, 2], 0)
    assert np.allclose(np.linalg.norm(E, axis=1), np.linalg.norm(B, axis=1))
    assert np.abs(divergence_b(plane_wave_potential(), X)).max() < 1e-8


@pytest.mark.parametrize("family", ["constant", "linear", "plane"])
def test_potential_derivatives(family):
    assert fd_check_potential(potential_family(family), PLAN) < 1e-7


def test_gauge_transform_leaves_fields_unchanged():
    A = plane_wave_potential()
    G = gauge_transform(A, sine_gauge())
    X = PLAN.events()
    assert np.abs(derive_fields(A).evec(X) - derive_fields(G).evec(X)).max() < 1e-14
    assert np.abs(derive_fields(A).bvec(X) - derive_fields(G).bvec(X)).max() < 1e-14


@given(small, small, small, st.sampled_from(["constant", "linear", "plane"]))
def test_identity_residual_closed_form(bx, by, bz, family):
    # curl identity exact; gradient identity misses exactly -v (v.E)
    A = potential_family(family)
    X = PLAN.events()
    res, _ = amu_terms(A, (bx, by, bz), X)
    assert np.abs(res - predicted_amu_residual(A, (bx, by, bz), X)).max() <= 1e-13


@pytest.mark.parametrize("family", ["constant", "plane"])
def test_identities_hold_when_velocity_is_transverse_to_e(family):
    r = check_amu_identities(potential_family(family), BoostSpec((0, 0, 0.05)), PLAN)
    assert r.passed


def test_new_frame_derivative_reading_fails_at_first_order():
    A = plane_wave_potential()
    rel = [check_amu_identities(A, (0, 0, b), PLAN, derivatives="new").relative
           for b in (0.01, 0.02)]
    assert rel[1] / rel[0] == pytest.approx(2.0, rel=0.05)


def test_invalid_derivative_option():
    with pytest.raises(ValueError):
        check_amu_identities(constant_potential(), (0, 0, 0.1), PLAN, derivatives="both")
