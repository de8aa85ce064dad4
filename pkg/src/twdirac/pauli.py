"""Ordinary and traveling-wave Pauli equations in an external electromagnetic potential.

Coupling convention: one signed charge ``q`` with D_mu = d_mu + i q A_mu in
three-vector form, i.e. i d_t -> i d_t - q phi and grad -> grad - i q A.
Under phi -> phi - d_t chi, A -> A + grad chi, Psi -> exp(i q chi) Psi the
ordinary residual picks up the same phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import LEVI_CIVITA, SIGMA_VEC, BoostSpec, Mode, sigma_dot
from .em import (EMPotential, gauge_transform, inverse_relabel_matrix, magnetic, mix_potential,
                 relabel, relabeled_fields, uniform_magnetic_potential)
from .equations import (EquationId, ResidualReport, dir_grad, laplacian, make_report, mat,
                        sigma_grad)
from .fields import DEFAULT_PLAN, AnalyticField, Jet, QuadraticExpField, SamplePlan, \
    ScalarFactorField


@dataclass(frozen=True)
class PauliParams:
    m: float = 1.0
    q: float = 1.0
    b: BoostSpec = field(default_factory=lambda: BoostSpec((0.0, 0.0, 0.0)))

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass must be > 0")
        if not isinstance(self.b, BoostSpec):
            object.__setattr__(self, "b", BoostSpec(tuple(self.b)))

    @property
    def w(self) -> np.ndarray:
        return self.b.velocity


def _check(f: AnalyticField):
    if f.n != 2:
        raise ValueError(f"expected a 2-component field, got {f.n}")


def _sigma_field(F: np.ndarray, val: np.ndarray) -> np.ndarray:
    """sigma . F(x) applied per event; F is (N, 3)."""
    return np.einsum("ni,iab,nb->na", F, SIGMA_VEC, val)


def _kinetic_terms(j: Jet, A: np.ndarray, dA: np.ndarray, q: float, m: float) -> list:
    """(1/2m)(grad - i q A)^2 Psi split into its four pieces."""
    divA = np.einsum("nii->n", dA[:, 1:, :])
    c = 1.0 / (2 * m)
    return [
        c * laplacian(j.d2),
        c * (-2j * q) * np.einsum("ni,nia->na", A, j.d1[:, 1:]),
        c * (-1j * q) * divA[:, None] * j.val,
        c * (-q * q) * np.sum(A * A, axis=1)[:, None] * j.val,
    ]


def pauli_terms(j: Jet, phi, A, dA, B, m: float, q: float) -> list:
    """[i d_t - q phi] Psi + (1/2m)(grad - i q A)^2 Psi + (q/2m) sigma.B Psi."""
    return [1j * j.d1[:, 0], -q * phi[:, None] * j.val,
            *_kinetic_terms(j, A, dA, q, m),
            q / (2 * m) * _sigma_field(B, j.val)]


def residual_pauli(psi: AnalyticField, A: EMPotential, p: PauliParams,
                   plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12) -> ResidualReport:
    _check(psi)
    X = plan.events()
    j = psi.jet(X)
    phi, dphi, Av, dA = A.jet(X)
    B = magnetic(phi, dphi, Av, dA)
    terms = pauli_terms(j, phi, Av, dA, B, p.m, p.q)
    return make_report(EquationId.PAULI, terms, family=f"{psi.family}/{A.family}",
                       params=dict(psi.params, m=p.m, q=p.q), tol=tol)


@dataclass
class FrameData:
    """Potentials and fields seen by the traveling description at events X.

    ``phi``, ``A`` are the original potentials at Lambda^-1 x; ``Phi_w``,
    ``A_w`` add the O(v) four-vector mixing; ``E``, ``B`` are the original
    fields carried to the same points.
    """

    phi: np.ndarray
    dphi: np.ndarray
    A: np.ndarray
    dA: np.ndarray
    Phi_w: np.ndarray
    dPhi_w: np.ndarray
    A_w: np.ndarray
    dA_w: np.ndarray
    E: np.ndarray
    B: np.ndarray


def frame_data(A: EMPotential, b: BoostSpec, X: np.ndarray) -> FrameData:
    L = inverse_relabel_matrix(b, Mode.EXACT)
    rel = relabel(A, L)
    F = relabeled_fields(A, L)
    return FrameData(*rel.jet(X), *mix_potential(rel, b.velocity).jet(X), F.evec(X), F.bvec(X))


def traveling_pauli_terms(j: Jet, fd: FrameData, w, m: float, q: float) -> list:
    w = np.asarray(w, dtype=float)
    G = fd.dphi[:, 1:] + fd.E
    wG = G @ w
    wxG = np.cross(w[None, :], G)
    dt = j.d1[:, 0]
    return [
        1j * dt,
        -q * fd.Phi_w[:, None] * j.val,
        *_kinetic_terms(j, fd.A, fd.dA, q, m),
        q / (2 * m) * _sigma_field(fd.B, j.val),
        dir_grad(w, j.d2[:, 0]) / (2 * m),
        (-1j * q / (2 * m)) * (fd.A @ w)[:, None] * dt,
        (1j * q / (4 * m)) * wG[:, None] * j.val,
        (-q / (4 * m)) * _sigma_field(wxG, j.val),
    ]


def residual_traveling_pauli(psi: AnalyticField, A: EMPotential, p: PauliParams,
                             plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12
                             ) -> ResidualReport:
    """Residual of the traveling Pauli operator; ``A`` is the original-frame potential."""
    _check(psi)
    X = plan.events()
    j = psi.jet(X)
    terms = traveling_pauli_terms(j, frame_data(A, p.b, X), p.w, p.m, p.q)
    return make_report(EquationId.TRAVELING_PAULI, terms, family=f"{psi.family}/{A.family}",
                       params=dict(psi.params, m=p.m, q=p.q), beta=p.b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


def intermediate_terms(j: Jet, fd: FrameData, w, m: float, q: float) -> list:
    """Covariantly substituted reduced operator before simplification.

    [i d0 - q Phi_w] Psi + (1/2m)(sigma.D)^2 Psi
      + (1/4m)(sigma.D)(sigma.w) d0 Psi + (1/4m)(sigma.w) d0 (sigma.D) Psi
    with D = grad - i q A_w.
    """
    w = np.asarray(w, dtype=float)
    sw = sigma_dot(w)
    curl = magnetic(fd.Phi_w, fd.dPhi_w, fd.A_w, fd.dA_w)
    dt = j.d1[:, 0]
    # D_i d0 Psi, then sigma.D acting on (sigma.w) d0 Psi
    Ddt = j.d2[:, 1:, 0] - 1j * q * fd.A_w[:, :, None] * dt[:, None, :]
    t1 = np.einsum("iab,bc,nic->na", SIGMA_VEC, sw, Ddt)
    # d0 of (sigma.D Psi) with the connection differentiated in time
    dtD = (j.d2[:, 0, 1:] - 1j * q * fd.dA_w[:, 0, :, None] * j.val[:, None, :]
           - 1j * q * fd.A_w[:, :, None] * dt[:, None, :])
    t2 = np.einsum("ab,ibc,nic->na", sw, SIGMA_VEC, dtD)
    return [
        1j * dt,
        -q * fd.Phi_w[:, None] * j.val,
        *_kinetic_terms(j, fd.A_w, fd.dA_w, q, m),
        q / (2 * m) * _sigma_field(curl, j.val),
        t1 / (4 * m),
        t2 / (4 * m),
    ]


def intermediate_minus_final(psi: AnalyticField, A: EMPotential, p: PauliParams,
                             plan: SamplePlan = DEFAULT_PLAN, tol: float = np.inf
                             ) -> ResidualReport:
    """Intermediate minus final traveling operator applied to ``psi``."""
    _check(psi)
    X = plan.events()
    j = psi.jet(X)
    fd = frame_data(A, p.b, X)
    ti = intermediate_terms(j, fd, p.w, p.m, p.q)
    tf = traveling_pauli_terms(j, fd, p.w, p.m, p.q)
    return make_report(EquationId.PAULI_CHAIN, ti + tf, family=f"{psi.family}/{A.family}",
                       params=dict(psi.params, m=p.m, q=p.q, compare="intermediate-final"),
                       beta=p.b.beta, mode=Mode.FIRST_ORDER, tol=tol,
                       residual=sum(ti) - sum(tf))


# --- mechanical substitution on the reduced big-component operator ----------

# The reduced operator as products of factors (applied right to left):
# "D0" time derivative, "SD" sigma.grad, "SV" sigma.v.  Each word carries a
# coefficient and its power of 1/m.
NR_DIRAC_WORDS = (
    (1j, 0, ("D0",)),
    (0.5j, 0, ("SD", "SV")),
    (0.5, 1, ("SD", "SD")),
    (-0.5j, 0, ("SD", "SV")),
    (0.25, 1, ("SV", "D0", "SD")),
    (0.25, 1, ("SD", "SV", "D0")),
)


@dataclass
class _Level:
    """An intermediate expression with its first derivatives (second optional)."""

    val: np.ndarray
    d1: np.ndarray
    d2: np.ndarray | None


def _apply_d(lv: _Level, mu: int, C: np.ndarray, dC: np.ndarray) -> _Level:
    # (d_mu + C_mu) f and its gradient
    val = lv.d1[:, mu] + C[:, mu, None] * lv.val
    d1 = None
    if lv.d2 is not None:
        d1 = (lv.d2[:, :, mu] + dC[:, :, mu, None] * lv.val[:, None, :]
              + C[:, None, mu, None] * lv.d1)
    return _Level(val, d1, None)


def _apply_matrix(lv: _Level, M: np.ndarray) -> _Level:
    return _Level(mat(M, lv.val), None if lv.d1 is None else mat(M, lv.d1),
                  None if lv.d2 is None else mat(M, lv.d2))


def _apply_sigma_d(lv: _Level, C, dC) -> _Level:
    out = None
    for i in range(3):
        part = _apply_matrix(_apply_d(lv, i + 1, C, dC), SIGMA_VEC[i])
        if out is None:
            out = part
        else:
            out = _Level(out.val + part.val,
                         None if part.d1 is None else out.d1 + part.d1, None)
    return out


def connection(fd: FrameData, q: float) -> tuple[np.ndarray, np.ndarray]:
    """C_mu with d_mu + C_mu the covariant derivative and dC[n, nu, mu] = d_nu C_mu."""
    N = fd.Phi_w.shape[0]
    C = np.zeros((N, 4), complex)
    dC = np.zeros((N, 4, 4), complex)
    C[:, 0] = 1j * q * fd.Phi_w
    C[:, 1:] = -1j * q * fd.A_w
    dC[:, :, 0] = 1j * q * fd.dPhi_w
    dC[:, :, 1:] = -1j * q * fd.dA_w
    return C, dC


def substituted_operator(j: Jet, fd: FrameData, w, m: float, q: float,
                         words=NR_DIRAC_WORDS) -> list:
    """Apply d -> D to every factor of the reduced operator.

    Time derivatives inside the 1/m words keep the plain d0, since q phi' is
    small against the mass there.
    """
    C, dC = connection(fd, q)
    C_space, dC_space = C.copy(), dC.copy()
    C_space[:, 0] = 0.0
    dC_space[:, :, 0] = 0.0
    sv = sigma_dot(np.asarray(w, dtype=float))
    terms = []
    for coef, power, factors in words:
        Ct, dCt = (C, dC) if power == 0 else (C_space, dC_space)
        lv = _Level(j.val, j.d1, j.d2)
        for fac in reversed(factors):
            if fac == "D0":
                lv = _apply_d(lv, 0, Ct, dCt)
            elif fac == "SD":
                lv = _apply_sigma_d(lv, Ct, dCt)
            elif fac == "SV":
                lv = _apply_matrix(lv, sv)
            else:
                raise ValueError(f"unknown factor {fac!r}")
        terms.append(coef / m**power * lv.val)
    return terms


def pauli_chain_check(psi: AnalyticField, A: EMPotential, p: PauliParams,
                      plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12) -> ResidualReport:
    """Mechanically substituted operator versus the hand-written intermediate form."""
    _check(psi)
    X = plan.events()
    j = psi.jet(X)
    fd = frame_data(A, p.b, X)
    mech = substituted_operator(j, fd, p.w, p.m, p.q)
    hand = intermediate_terms(j, fd, p.w, p.m, p.q)
    return make_report(EquationId.PAULI_CHAIN, hand, family=f"{psi.family}/{A.family}",
                       params=dict(psi.params, m=p.m, q=p.q, compare="mechanical-manual"),
                       beta=p.b.beta, mode=Mode.FIRST_ORDER, tol=tol,
                       residual=sum(mech) - sum(hand))


# --- naive Galilean replacement -------------------------------------------


def naive_galilean_pauli_terms(j: Jet, fd: FrameData, w, m: float, q: float) -> list:
    """Pauli operator with d_t -> d_t + w.grad in the time term and
    grad -> grad + w d_t inside the kinetic term, potentials only relabelled."""
    w = np.asarray(w, dtype=float)
    dt = j.d1[:, 0]
    wD0 = dir_grad(w, j.d2[:, 0]) - 1j * q * (fd.A @ w)[:, None] * dt
    return [
        1j * dt,
        1j * dir_grad(w, j.d1),
        -q * fd.phi[:, None] * j.val,
        *_kinetic_terms(j, fd.A, fd.dA, q, m),
        wD0 / m,
        (-1j * q / (2 * m)) * (fd.dA[:, 0, :] @ w)[:, None] * j.val,
        q / (2 * m) * _sigma_field(fd.B, j.val),
    ]


def predicted_pauli_difference(j: Jet, fd: FrameData, w, m: float, q: float) -> np.ndarray:
    """Closed form of (traveling - naive Galilean) Pauli operator on Psi."""
    w = np.asarray(w, dtype=float)
    dt = j.d1[:, 0]
    G = fd.dphi[:, 1:] + fd.E
    wD0 = dir_grad(w, j.d2[:, 0]) - 1j * q * (fd.A @ w)[:, None] * dt
    return (-q * (fd.A @ w)[:, None] * j.val
            - 1j * dir_grad(w, j.d1)
            - wD0 / (2 * m)
            + (1j * q / (2 * m)) * (fd.dA[:, 0, :] @ w)[:, None] * j.val
            + (1j * q / (4 * m)) * (G @ w)[:, None] * j.val
            - (q / (4 * m)) * _sigma_field(np.cross(w[None, :], G), j.val))


def pauli_galilean_difference(psi: AnalyticField, A: EMPotential, p: PauliParams,
                              plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-13
                              ) -> ResidualReport:
    """Deviation of (traveling - naive) applied to ``psi`` from the closed form."""
    _check(psi)
    X = plan.events()
    j = psi.jet(X)
    fd = frame_data(A, p.b, X)
    tt = traveling_pauli_terms(j, fd, p.w, p.m, p.q)
    tn = naive_galilean_pauli_terms(j, fd, p.w, p.m, p.q)
    residual = sum(tt) - sum(tn) - predicted_pauli_difference(j, fd, p.w, p.m, p.q)
    return make_report(EquationId.OPERATOR_DIFFERENCE, tt + tn,
                       family=f"{psi.family}/{A.family}",
                       params=dict(psi.params, m=p.m, q=p.q,
                                   pair=["traveling_pauli", "naive_galilean_pauli"]),
                       beta=p.b.beta, mode=Mode.FIRST_ORDER, tol=tol, residual=residual)


def pauli_difference_norm(psi: AnalyticField, A: EMPotential, p: PauliParams,
                          plan: SamplePlan = DEFAULT_PLAN) -> float:
    """RMS norm of the registered difference; nonzero at first order in v."""
    X = plan.events()
    j = psi.jet(X)
    d = predicted_pauli_difference(j, frame_data(A, p.b, X), p.w, p.m, p.q)
    return float(np.sqrt(np.mean(np.sum(np.abs(d) ** 2, axis=1))))


# --- gauge covariance and exact solutions ----------------------------------


def gauge_covariance_deviation(psi: AnalyticField, A: EMPotential, p: PauliParams,
                               chi_jet, plan: SamplePlan = DEFAULT_PLAN) -> float:
    """max | |r'| - |r| | / l2_reference over events after a gauge transformation."""

    def phase(X):
        chi, dchi, ddchi = chi_jet(X)
        s = np.exp(1j * p.q * chi)
        ds = 1j * p.q * dchi * s[:, None]
        dds = (1j * p.q * ddchi - p.q**2 * np.einsum("ni,nj->nij", dchi, dchi)) * s[:, None, None]
        return s, ds, dds

    r0 = residual_pauli(psi, A, p, plan)
    r1 = residual_pauli(ScalarFactorField(psi, phase), gauge_transform(A, chi_jet), p, plan)
    n0 = np.linalg.norm(r0.values, axis=1)
    n1 = np.linalg.norm(r1.values, axis=1)
    return float(np.abs(n1 - n0).max() / max(r0.l2_reference, 1e-300))


def landau_ground_state(B0: float, m: float, q: float, spin: int = 1
                        ) -> tuple[QuadraticExpField, EMPotential, float]:
    """Lowest Landau level in the symmetric gauge for uniform B = B0 z.

    Psi = exp(-|q B0| r_perp^2 / 4 - i E t) chi_s with
    E = |q B0|/2m - s q B0/2m, s = +1 for spin up along z.
    """
    if spin not in (1, -1):
        raise ValueError("spin must be +1 or -1")
    alpha = abs(q * B0) / 4.0
    E = abs(q * B0) / (2 * m) - spin * q * B0 / (2 * m)
    Q = np.zeros((4, 4))
    Q[1, 1] = Q[2, 2] = -2.0 * alpha
    chi = np.array([1.0, 0.0]) if spin == 1 else np.array([0.0, 1.0])
    psi = QuadraticExpField(Q, np.array([-1j * E, 0, 0, 0]), chi, family="landau",
                            params={"B0": B0, "spin": spin, "E": E})
    return psi, uniform_magnetic_potential(B0), E
