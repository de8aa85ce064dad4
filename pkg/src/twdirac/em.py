"""Electromagnetic four-potentials, their first-order frame transform, and field identities.

A potential evaluates to (phi, dphi, A, dA) at events X (N, 4):
phi (N,), dphi (N, 4) with dphi[:, mu] = d_mu phi, A (N, 3), dA (N, 4, 3).
"""
from __future__ import annotations

import numpy as np

from .algebra import LEVI_CIVITA, BoostSpec, Mode, lorentz_boost
from .equations import EquationId, ResidualReport, make_report
from .fields import DEFAULT_PLAN, SamplePlan


class EMPotential:
    family: str = "potential"

    def __init__(self, fn, family: str, params: dict | None = None):
        self._fn = fn
        self.family = family
        self.params = params or {}

    def jet(self, X):
        return self._fn(np.atleast_2d(np.asarray(X, dtype=float)))

    def __add__(self, other: "EMPotential") -> "EMPotential":
        def fn(X):
            a, b = self.jet(X), other.jet(X)
            return tuple(x + y for x, y in zip(a, b))

        return EMPotential(fn, f"{self.family}+{other.family}")

    def __rmul__(self, c) -> "EMPotential":
        def fn(X):
            return tuple(c * x for x in self.jet(X))

        return EMPotential(fn, self.family, dict(self.params))


class EMFields:
    """Electric and magnetic field evaluators, each returning (N, 3)."""

    def __init__(self, efn, bfn):
        self._efn, self._bfn = efn, bfn

    def evec(self, X):
        return self._efn(np.atleast_2d(np.asarray(X, dtype=float)))

    def bvec(self, X):
        return self._bfn(np.atleast_2d(np.asarray(X, dtype=float)))


def constant_potential(phi0: float = 1.0, A0=(0.0, 0.0, 0.0)) -> EMPotential:
    A0 = np.asarray(A0, dtype=float)

    def fn(X):
        N = X.shape[0]
        return (np.full(N, float(phi0)), np.zeros((N, 4)),
                np.tile(A0, (N, 1)), np.zeros((N, 4, 3)))

    return EMPotential(fn, "constant", {"phi0": phi0, "A0": list(A0)})


def linear_potential(phi0: float = 0.0, phi_grad=(0.0, 0.0, 0.0, -1.0), A0=(0.0, 0.0, 0.0),
                     A_grad=None) -> EMPotential:
    """phi = phi0 + c.X, A = A0 + M X; defaults to a uniform field along z."""
    c = np.asarray(phi_grad, dtype=float)
    A0 = np.asarray(A0, dtype=float)
    M = np.zeros((3, 4)) if A_grad is None else np.asarray(A_grad, dtype=float)

    def fn(X):
        N = X.shape[0]
        return (phi0 + X @ c, np.tile(c, (N, 1)), A0 + X @ M.T,
                np.broadcast_to(M.T, (N, 4, 3)).copy())

    return EMPotential(fn, "linear", {"phi_grad": list(c), "A_grad": M.tolist()})


def uniform_field_potential(E0: float = 0.3, B0: float = 0.4) -> EMPotential:
    """phi = -E0 z and A = B0/2 (-y, x, 0): uniform E = E0 z and B = B0 z."""
    M = np.zeros((3, 4))
    M[0, 2] = -0.5 * B0
    M[1, 1] = 0.5 * B0
    return linear_potential(0.0, (0.0, 0.0, 0.0, -E0), A_grad=M)


def uniform_magnetic_potential(B0: float) -> EMPotential:
    """Symmetric gauge A = B0/2 (-y, x, 0), phi = 0."""
    pot = uniform_field_potential(0.0, B0)
    pot.family = "uniform-B"
    pot.params = {"B0": B0}
    return pot


def plane_wave_potential(a: float = 0.2, omega: float = 1.3, pol=(0.0, 1.0, 0.0),
                         direction=(0.0, 0.0, 1.0), phase: float = 0.0) -> EMPotential:
    """A = a pol cos(omega (t - n.x) + phase), phi = 0 (radiation gauge)."""
    pol = np.asarray(pol, dtype=float)
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    kl = omega * np.concatenate([[1.0], -n])

    def fn(X):
        N = X.shape[0]
        arg = X @ kl + phase
        A = a * np.cos(arg)[:, None] * pol[None, :]
        dA = -a * np.sin(arg)[:, None, None] * kl[None, :, None] * pol[None, None, :]
        return np.zeros(N), np.zeros((N, 4)), A, dA

    return EMPotential(fn, "plane", {"a": a, "omega": omega, "pol": list(pol),
                                     "direction": list(n)})


def potential_family(name: str) -> EMPotential:
    if name == "constant":
        return constant_potential(1.0, (0.1, -0.2, 0.3))
    if name == "linear":
        return uniform_field_potential()
    if name == "plane":
        return plane_wave_potential()
    raise ValueError(f"unknown potential family {name!r}")


def relabel(A: EMPotential, L: np.ndarray) -> EMPotential:
    """A(L x) with derivatives by the chain rule."""
    L = np.asarray(L, dtype=float)

    def fn(X):
        phi, dphi, Av, dA = A.jet(X @ L.T)
        return phi, dphi @ L, Av, np.einsum("am,nai->nmi", L, dA)

    return EMPotential(fn, A.family, dict(A.params))


def first_order_inverse(beta) -> np.ndarray:
    """Inverse of the first-order map t' = t + v.x, x' = x + v t (to O(v))."""
    v = np.asarray(beta, dtype=float)
    L = np.eye(4)
    L[0, 1:] = -v
    L[1:, 0] = -v
    return L


def inverse_relabel_matrix(b: BoostSpec, mode=Mode.EXACT) -> np.ndarray:
    if Mode(mode) is Mode.EXACT:
        return lorentz_boost(b.inverse(), Mode.EXACT).matrix
    return first_order_inverse(b.beta)


def mix_potential(A: EMPotential, v) -> EMPotential:
    """(phi + v.A, A + v phi), the O(v) four-vector transform without relabelling."""
    v = np.asarray(v, dtype=float)

    def fn(X):
        phi, dphi, Av, dA = A.jet(X)
        return (phi + Av @ v, dphi + dA @ v, Av + phi[:, None] * v[None, :],
                dA + dphi[:, :, None] * v[None, None, :])

    return EMPotential(fn, A.family, dict(A.params))


def _boost(b) -> BoostSpec:
    return b if isinstance(b, BoostSpec) else BoostSpec(tuple(b))


def transform_potential(A: EMPotential, b, mode=Mode.EXACT) -> EMPotential:
    """(phi' + v.A', A' + v phi') with phi', A' the potentials at Lambda^-1 x."""
    b = _boost(b)
    out = mix_potential(relabel(A, inverse_relabel_matrix(b, mode)), b.velocity)
    out.params = dict(A.params, boost=list(b.beta))
    return out


def electric(phi, dphi, A, dA) -> np.ndarray:
    return -dphi[:, 1:] - dA[:, 0, :]


def magnetic(phi, dphi, A, dA) -> np.ndarray:
    return np.einsum("ijk,njk->ni", LEVI_CIVITA, dA[:, 1:, :])


def derive_fields(A: EMPotential) -> EMFields:
    """E = -grad phi - dA/dt, B = curl A from the closed-form derivatives."""
    return EMFields(lambda X: electric(*A.jet(X)), lambda X: magnetic(*A.jet(X)))


def relabeled_fields(A: EMPotential, L: np.ndarray) -> EMFields:
    """Old-frame E, B evaluated at L x (fields carried to new coordinates)."""
    L = np.asarray(L, dtype=float)
    F = derive_fields(A)
    return EMFields(lambda X: F.evec(X @ L.T), lambda X: F.bvec(X @ L.T))


def divergence_b(A: EMPotential, X) -> np.ndarray:
    """div B is identically zero for closed-form potentials; evaluated by
    finite differences of B here as a consistency probe."""
    h = 1e-4
    F = derive_fields(A)
    out = np.zeros(X.shape[0])
    for i in range(3):
        e = np.zeros(4)
        e[i + 1] = h
        out += (F.bvec(X + e)[:, i] - F.bvec(X - e)[:, i]) / (2 * h)
    return out


def amu_terms(A: EMPotential, b, X, derivatives: str = "old") -> tuple[np.ndarray, list]:
    """Residuals of both identities, stacked (N, 6), and their individual terms.

    curl(A' + v phi') = B + v x E
    -grad(phi' + v.A') = E - v x B + d/dt (A' + v phi')

    Relabelling uses the first-order coordinate map.  ``derivatives="old"``
    takes E, B as the original-frame fields carried to the new coordinates;
    ``"new"`` derives them from the relabelled pair with new-frame derivatives.
    """
    b = _boost(b)
    v = b.velocity
    L = first_order_inverse(v)
    rel = relabel(A, L)
    if derivatives == "old":
        F = relabeled_fields(A, L)
    elif derivatives == "new":
        F = derive_fields(rel)
    else:
        raise ValueError("derivatives must be 'old' or 'new'")
    E, B = F.evec(X), F.bvec(X)
    Phi, dPhi, Aw, dAw = mix_potential(rel, v).jet(X)
    curl = magnetic(Phi, dPhi, Aw, dAw)
    vxE = np.cross(v[None, :], E)
    vxB = np.cross(v[None, :], B)
    grad = -dPhi[:, 1:]
    dtA = dAw[:, 0, :]
    r1 = curl - B - vxE
    r2 = grad - E + vxB - dtA
    z = np.zeros_like(r1)

    def s1(a):
        return np.concatenate([a, z], axis=1)

    def s2(a):
        return np.concatenate([z, a], axis=1)

    terms = [s1(curl), s1(B), s1(vxE), s2(grad), s2(E), s2(vxB), s2(dtA)]
    return np.concatenate([r1, r2], axis=1), terms


def check_amu_identities(A: EMPotential, b, plan: SamplePlan = DEFAULT_PLAN,
                         tol: float = 1e-12, derivatives: str = "old") -> ResidualReport:
    b = _boost(b)
    X = plan.events()
    residual, terms = amu_terms(A, b, X, derivatives)
    return make_report(EquationId.AMU_IDENTITIES, terms, family=A.family,
                       params=dict(A.params, derivatives=derivatives), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol, residual=residual)


def predicted_amu_residual(A: EMPotential, b, X) -> np.ndarray:
    """Closed form of the identity residuals under the old-frame reading.

    The curl identity is exact; the gradient identity misses -v (v.E).
    """
    b = _boost(b)
    v = b.velocity
    E = relabeled_fields(A, first_order_inverse(v)).evec(X)
    r2 = -v[None, :] * (E @ v)[:, None]
    return np.concatenate([np.zeros_like(r2), r2], axis=1)


def gauge_transform(A: EMPotential, chi_jet) -> EMPotential:
    """phi -> phi - d_t chi, A -> A + grad chi; ``chi_jet(X)`` gives (chi, dchi, ddchi)."""

    def fn(X):
        phi, dphi, Av, dA = A.jet(X)
        chi, dchi, ddchi = chi_jet(X)
        return (phi - dchi[:, 0], dphi - ddchi[:, :, 0], Av + dchi[:, 1:],
                dA + ddchi[:, :, 1:])

    return EMPotential(fn, A.family + "+gauge", dict(A.params))


def sine_gauge(amplitude: float = 0.3, K=(0.4, 0.7, -0.5, 0.2)):
    """chi = amplitude * sin(K.X) with its closed-form derivatives."""
    K = np.asarray(K, dtype=float)

    def chi_jet(X):
        arg = X @ K
        return (amplitude * np.sin(arg),
                amplitude * np.cos(arg)[:, None] * K[None, :],
                -amplitude * np.sin(arg)[:, None, None] * np.outer(K, K)[None])

    return chi_jet


def fd_check_potential(A: EMPotential, plan: SamplePlan = DEFAULT_PLAN, h: float = 1e-4) -> float:
    X = plan.events()
    phi, dphi, Av, dA = A.jet(X)
    scale = max(np.abs(dphi).max(), np.abs(dA).max(), 1e-300)
    dev = 0.0
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        pp, pm = A.jet(X + e), A.jet(X - e)
        dev = max(dev, np.abs((pp[0] - pm[0]) / (2 * h) - dphi[:, mu]).max(),
                  np.abs((pp[2] - pm[2]) / (2 * h) - dA[:, mu]).max())
    return float(dev / scale)
