import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twdirac.algebra import GAMMA, BoostSpec
from twdirac.fields import (ComposedField, DEFAULT_PLAN, PolynomialField, QuadraticExpField,
                            SamplePlan, boost_field, dirac_plane_wave, fd_check, gaussian_packet,
                            massless_plane_wave, rest_spinor_check, seeded_gaussian, splitmix64,
                            strip_rest_mass, uniform01)

SMALL = SamplePlan(counts=(2, 2, 2, 2), extra=20)


def test_splitmix64_reference_values():
    # published reference outputs for seed 0
    g = splitmix64(0)
    assert next(g) == 0xE220A8397B1DCDAF
    assert next(g) == 0x6E789E6AA1B965F4


def test_uniform01_range_and_reproducibility():
    u = uniform01(42, 1000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert np.array_equal(u, uniform01(42, 1000))
    assert not np.array_equal(u, uniform01(43, 1000))


def test_sample_plan_layout():
    X = DEFAULT_PLAN.events()
    assert X.shape == (5**4 + 125, 4)
    assert X[:, 0].min() >= 0 and X[:, 0].max() <= 2.0
    assert np.abs(X[:, 1:]).max() <= 2.0
    assert np.array_equal(X, SamplePlan().events())
    with pytest.raises(ValueError):
        SamplePlan(counts=(0, 0, 0, 0), extra=0).events()


@pytest.mark.parametrize("field", [
    dirac_plane_wave((0.3, -0.1, 0.2), 1.5),
    gaussian_packet((0.3, -0.2, 0.4), 1.2, 4),
    PolynomialField(3, seed=5),
    QuadraticExpField(-0.2 * np.eye(4), [0.1j, 0, 0.2, 0], [1.0, 0.5j]),
    ComposedField(gaussian_packet((0.1, 0.0, 0.2), 1.0, 2), np.eye(4) + 0.1),
], ids=["planewave", "gaussian", "polynomial", "quadexp", "composed"])
def test_derivatives_match_finite_differences(field):
    assert fd_check(field, SMALL, h=1e-4, order=1) <= 1e-6
    assert fd_check(field, SMALL, h=1e-4, order=2) <= 1e-6


def test_fd_error_is_second_order_in_h():
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    ratio = fd_check(f, SMALL, 2e-2) / fd_check(f, SMALL, 1e-2)
    assert ratio == pytest.approx(4.0, rel=0.05)


@given(st.tuples(*[st.floats(-0.5, 0.5)] * 3), st.floats(0.5, 3.0), st.sampled_from([0, 1]))
def test_dirac_spinor_normalisation_and_mass_shell(p, m, spin):
    f = dirac_plane_wave(p, m, spin)
    assert rest_spinor_check(f) == pytest.approx(2 * m, rel=1e-12)
    k = f.four_momentum
    assert k[0] ** 2 - k[1:] @ k[1:] == pytest.approx(m * m, rel=1e-12)
    # (gamma.p - m) u = 0
    gp = np.einsum("m,mab->ab", f.k_lower, GAMMA)
    assert np.abs((gp - m * np.eye(4)) @ f.amp).max() <= 1e-12 * (1 + np.abs(f.amp).max())


def test_dirac_energy_value():
    f = dirac_plane_wave((0.03, 0.04, 0.0), 2.0)
    assert f.k_lower[0] == pytest.approx(np.sqrt(4.0025), abs=1e-12)


def test_boosted_plane_wave_momentum():
    f = dirac_plane_wave((0.0, 0.0, 0.0), 1.0)
    g = boost_field(f, BoostSpec((0.0, 0.0, 0.6)))
    # a particle at rest seen from the relabelled frame moves along z with gamma * beta
    assert np.allclose(g.four_momentum, [1.25, 0.0, 0.0, 0.75])


def test_boost_field_composed_matches_plane_wave():
    b = BoostSpec((0.1, -0.2, 0.3))
    f = dirac_plane_wave((0.2, 0.1, 0.0), 1.0)
    a = boost_field(f, b).jet(SMALL.events())
    c = boost_field(1.0 * f, b).jet(SMALL.events())
    assert np.allclose(a.val, c.val) and np.allclose(a.d2, c.d2)


def test_strip_rest_mass_general_field():
    g = seeded_gaussian(3, 2)
    s = strip_rest_mass(g, 1.5)
    assert fd_check(s, SMALL, h=1e-4, order=2) <= 1e-6
    X = SMALL.events()
    assert np.allclose(s.jet(X).val, np.exp(1.5j * X[:, :1]) * g.jet(X).val)


def test_massless_plane_wave_helicity():
    k = np.array([0.3, -0.4, 1.2])
    n = k / np.linalg.norm(k)
    from twdirac.algebra import sigma_dot
    for chi, sign in (("L", -1), ("R", 1)):
        amp = massless_plane_wave(k, chi).amp
        assert np.allclose(sigma_dot(n) @ amp, sign * amp)
    with pytest.raises(ValueError):
        massless_plane_wave((0, 0, 0), "L")
