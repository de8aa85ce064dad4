"""Residual evaluators for the traveling-wave Dirac, Weyl and Schroedinger-type equations.

Each evaluator returns the residual as a list of additive *terms* so that a
report can normalise by the largest single term.  Two velocity vectors occur:

* the Dirac-level first-order forms (two-component, massive, Weyl) use the
  rapidity vector ``eta * nhat`` so they coincide with the first-order bispinor
  boost exactly;
* the non-relativistic forms use ``beta`` itself.

They agree to O(beta^3), which no truncation-order sweep can resolve.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import GAMMA, LEVI_CIVITA, SIGMA_VEC, BoostSpec, Mode, sigma_dot, spinor_boost
from .fields import DEFAULT_PLAN, AnalyticField, Jet, PlaneWave, SamplePlan


class EquationId(str, enum.Enum):
    DIRAC = "dirac"
    TRAVELING_DIRAC = "traveling_dirac"
    TWO_COMPONENT_TRAVELING = "two_component_traveling"
    WEYL_TRAVELING_LEFT = "weyl_traveling_left"
    WEYL_TRAVELING_RIGHT = "weyl_traveling_right"
    NAIVE_GALILEAN_WEYL_LEFT = "naive_galilean_weyl_left"
    NAIVE_GALILEAN_WEYL_RIGHT = "naive_galilean_weyl_right"
    MASSIVE_TWO_COMPONENT_TRAVELING = "massive_two_component_traveling"
    NR_DIRAC = "nr_dirac"
    NR_SCHRODINGER_TRAVELING = "nr_schrodinger_traveling"
    NAIVE_GALILEAN_SCHRODINGER = "naive_galilean_schrodinger"
    SMALL_COMPONENT = "small_component"
    # reports produced by the em, pauli and bw modules
    AMU_IDENTITIES = "amu_identities"
    PAULI = "pauli"
    TRAVELING_PAULI = "traveling_pauli"
    NAIVE_GALILEAN_PAULI = "naive_galilean_pauli"
    PAULI_CHAIN = "pauli_chain"
    BW = "bw"
    TRAVELING_BW = "traveling_bw"
    OPERATOR_DIFFERENCE = "operator_difference"

    @classmethod
    def parse(cls, name) -> "EquationId":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"weyl_traveling_l": "weyl_traveling_left",
                   "weyl_traveling_r": "weyl_traveling_right",
                   "naive_galilean_weyl_l": "naive_galilean_weyl_left",
                   "naive_galilean_weyl_r": "naive_galilean_weyl_right"}
        return cls(aliases.get(key, key))


@dataclass
class ResidualReport:
    equation: str
    family: str
    params: dict
    beta: list
    mode: str
    samples: int
    l2_residual: float
    max_residual: float
    l2_reference: float
    relative: float
    tolerance: float
    passed: bool
    values: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "family": self.family,
            "params": self.params,
            "beta": list(self.beta),
            "mode": self.mode,
            "samples": self.samples,
            "l2_residual": self.l2_residual,
            "max_residual": self.max_residual,
            "l2_reference": self.l2_reference,
            "relative": self.relative,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _norm(a: np.ndarray) -> float:
    """RMS over events of the per-event component norm."""
    a = a.reshape(a.shape[0], -1)
    return float(np.sqrt(np.mean(np.sum(np.abs(a) ** 2, axis=1))))


def make_report(equation, terms, *, family="", params=None, beta=(0.0, 0.0, 0.0),
                mode="exact", tol=1e-12, residual=None) -> ResidualReport:
    """Reduce per-event terms to a report; ``residual`` defaults to sum(terms)."""
    if residual is None:
        residual = sum(terms[1:], terms[0].copy())
    N = residual.shape[0]
    l2 = _norm(residual)
    ref = max((_norm(t) for t in terms), default=0.0)
    flat = residual.reshape(N, -1)
    rel = l2 / max(ref, 1e-300)
    return ResidualReport(
        equation=EquationId.parse(equation).value,
        family=family,
        params=params or {},
        beta=[float(x) for x in beta],
        mode=str(getattr(mode, "value", mode)),
        samples=int(N),
        l2_residual=l2,
        max_residual=float(np.sqrt(np.sum(np.abs(flat) ** 2, axis=1)).max()),
        l2_reference=ref,
        relative=rel,
        tolerance=float(tol),
        passed=bool(rel <= tol),
        values=residual,
    )


# --- two-component operator building blocks -------------------------------


def mat(M: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Apply a constant matrix to the trailing component axis."""
    return a @ M.T


def sigma_grad(d1: np.ndarray) -> np.ndarray:
    """(sigma . grad) f from first derivatives (N, 4, 2)."""
    return np.einsum("iab,nib->na", SIGMA_VEC, d1[:, 1:])


def dir_grad(w, d1: np.ndarray) -> np.ndarray:
    """(w . grad) f."""
    return np.einsum("i,nia->na", np.asarray(w, dtype=complex), d1[:, 1:])


def sigma_cross_grad(w, d1: np.ndarray) -> np.ndarray:
    """sigma . (w x grad) f."""
    C = np.einsum("ijk,j->ik", LEVI_CIVITA, np.asarray(w, dtype=float))
    return np.einsum("iab,ik,nkb->na", SIGMA_VEC, C, d1[:, 1:])


def laplacian(d2: np.ndarray) -> np.ndarray:
    return d2[:, 1, 1] + d2[:, 2, 2] + d2[:, 3, 3]


def time_slice(j: Jet) -> np.ndarray:
    """First derivatives of d_0 f, shape (N, 4, n)."""
    return j.d2[:, 0]


def _check_components(f: AnalyticField, n: int):
    if f.n != n:
        raise ValueError(f"expected a {n}-component field, got {f.n}")


def _check_mass(m):
    if m <= 0:
        raise ValueError("mass must be > 0")


def _boost(b) -> BoostSpec:
    if b is None:
        return BoostSpec((0.0, 0.0, 0.0))
    return b if isinstance(b, BoostSpec) else BoostSpec(tuple(b))


# --- four-component forms -----------------------------------------------


def dirac_terms(j: Jet, m: float) -> list[np.ndarray]:
    """Terms of (i gamma^mu d_mu - m) f."""
    terms = [1j * mat(GAMMA[mu], j.d1[:, mu]) for mu in range(4)]
    terms.append(-m * j.val)
    return terms


def residual_dirac(f: AnalyticField, m: float, plan: SamplePlan = DEFAULT_PLAN,
                   tol: float = 1e-12) -> ResidualReport:
    _check_components(f, 4)
    j = f.jet(plan.events())
    return make_report(EquationId.DIRAC, dirac_terms(j, m), family=f.family,
                       params=dict(f.params, m=m), tol=tol)


def residual_traveling_dirac(f: AnalyticField, m: float, b, mode=Mode.EXACT,
                             plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-10
                             ) -> ResidualReport:
    """(i gamma^mu d_mu - m) Lambda_1/2 f~ on the relabelled field."""
    _check_components(f, 4)
    b = _boost(b)
    S = spinor_boost(b, mode).matrix
    j = f.jet(plan.events()).map(S)
    return make_report(EquationId.TRAVELING_DIRAC, dirac_terms(j, m), family=f.family,
                       params=dict(f.params, m=m), beta=b.beta, mode=Mode(mode), tol=tol)


def two_component_terms(j: Jet, m: float, w) -> list[np.ndarray]:
    """Chiral block equations with (1 -/+ 1/2 sigma.w) dressing, stacked (L, R).

    L: i(d0 - sigma.grad)[(1 - s/2) psi_L] - m (1 + s/2) psi_R
    R: i(d0 + sigma.grad)[(1 + s/2) psi_R] - m (1 - s/2) psi_L
    """
    s = sigma_dot(w)
    one = np.eye(2)
    PL, PR = one - 0.5 * s, one + 0.5 * s
    L1 = j.d1[:, :, :2] @ PL.T
    R1 = j.d1[:, :, 2:] @ PR.T
    zero = np.zeros_like(j.val[:, :2])

    def stack(a, b):
        return np.concatenate([a, b], axis=1)

    return [
        stack(1j * L1[:, 0], zero),
        stack(-1j * sigma_grad(L1), zero),
        stack(-m * mat(PR, j.val[:, 2:]), zero),
        stack(zero, 1j * R1[:, 0]),
        stack(zero, 1j * sigma_grad(R1)),
        stack(zero, -m * mat(PL, j.val[:, :2])),
    ]


def residual_two_component_traveling(f: AnalyticField, m: float, b,
                                     plan: SamplePlan = DEFAULT_PLAN,
                                     tol: float = 1e-12) -> ResidualReport:
    _check_components(f, 4)
    b = _boost(b)
    j = f.jet(plan.events())
    return make_report(EquationId.TWO_COMPONENT_TRAVELING,
                       two_component_terms(j, m, b.rapidity_vector), family=f.family,
                       params=dict(f.params, m=m), beta=b.beta, mode=Mode.FIRST_ORDER,
                       tol=tol)


def weyl_terms(val, d1, w, chirality: str) -> list[np.ndarray]:
    """i{d0 -/+ sigma.grad -/+ 1/2 (sigma.w) d0 + 1/2[(w.grad) - i sigma.(w x grad)]}."""
    sgn = _chirality_sign(chirality)
    s = sigma_dot(w)
    return [
        1j * d1[:, 0],
        -sgn * 1j * sigma_grad(d1),
        -sgn * 0.5j * mat(s, d1[:, 0]),
        0.5j * dir_grad(w, d1),
        0.5 * sigma_cross_grad(w, d1),
    ]


def naive_galilean_weyl_terms(val, d1, w, chirality: str) -> list[np.ndarray]:
    """i(d0 -/+ sigma.grad) after d0 -> d0 + w.grad, grad -> grad + w d0."""
    sgn = _chirality_sign(chirality)
    s = sigma_dot(w)
    return [
        1j * d1[:, 0],
        1j * dir_grad(w, d1),
        -sgn * 1j * sigma_grad(d1),
        -sgn * 1j * mat(s, d1[:, 0]),
    ]


def _chirality_sign(chirality: str) -> int:
    if chirality in ("L", "left"):
        return 1
    if chirality in ("R", "right"):
        return -1
    raise ValueError(f"chirality must be 'L' or 'R', got {chirality!r}")


def residual_weyl_traveling(f: AnalyticField, b, chirality: str,
                            plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12
                            ) -> ResidualReport:
    _chirality_sign(chirality)
    _check_components(f, 2)
    b = _boost(b)
    j = f.jet(plan.events())
    eq = EquationId.WEYL_TRAVELING_LEFT if chirality in ("L", "left") else EquationId.WEYL_TRAVELING_RIGHT
    return make_report(eq, weyl_terms(j.val, j.d1, b.rapidity_vector, chirality),
                       family=f.family, params=dict(f.params), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


def residual_naive_galilean_weyl(f: AnalyticField, b, chirality: str,
                                 plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12
                                 ) -> ResidualReport:
    _chirality_sign(chirality)
    _check_components(f, 2)
    b = _boost(b)
    j = f.jet(plan.events())
    eq = (EquationId.NAIVE_GALILEAN_WEYL_LEFT if chirality in ("L", "left")
          else EquationId.NAIVE_GALILEAN_WEYL_RIGHT)
    return make_report(eq, naive_galilean_weyl_terms(j.val, j.d1, b.rapidity_vector, chirality),
                       family=f.family, params=dict(f.params), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


def massive_two_component_terms(j: Jet, m: float, w) -> list[np.ndarray]:
    s = sigma_dot(w)
    L, R = j.val[:, :2], j.val[:, 2:]
    zero = np.zeros_like(L)

    def top(a):
        return np.concatenate([a, zero], axis=1)

    def bottom(a):
        return np.concatenate([zero, a], axis=1)

    terms = [top(t) for t in weyl_terms(L, j.d1[:, :, :2], w, "L")]
    terms += [top(-m * R), top(-0.5 * m * mat(s, R))]
    terms += [bottom(t) for t in weyl_terms(R, j.d1[:, :, 2:], w, "R")]
    terms += [bottom(-m * L), bottom(0.5 * m * mat(s, L))]
    return terms


def residual_massive_two_component_traveling(f: AnalyticField, m: float, b,
                                             plan: SamplePlan = DEFAULT_PLAN,
                                             tol: float = 1e-12) -> ResidualReport:
    _check_components(f, 4)
    b = _boost(b)
    j = f.jet(plan.events())
    return make_report(EquationId.MASSIVE_TWO_COMPONENT_TRAVELING,
                       massive_two_component_terms(j, m, b.rapidity_vector),
                       family=f.family, params=dict(f.params, m=m), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


# --- non-relativistic forms -----------------------------------------------


def nr_dirac_terms(j: Jet, m: float, v) -> list[np.ndarray]:
    """LHS - RHS of the reduced equation for the big component.

    LHS: i[d0 + 1/2 (sigma.grad)(sigma.v)] Psi
    RHS: -lap/2m Psi + i/2 (sigma.grad)(sigma.v) Psi
         - 1/4m (sigma.v) d0 (sigma.grad) Psi - 1/4m (sigma.grad)(sigma.v) d0 Psi
    with (sigma.grad)(sigma.v) = (v.grad) - i sigma.(v x grad).
    """
    s = sigma_dot(v)

    def gs(d1):
        return dir_grad(v, d1) - 1j * sigma_cross_grad(v, d1)

    dt = time_slice(j)
    return [
        1j * j.d1[:, 0],
        0.5j * gs(j.d1),
        laplacian(j.d2) / (2 * m),
        -0.5j * gs(j.d1),
        mat(s, sigma_grad(dt)) / (4 * m),
        sigma_grad(dt @ s.T) / (4 * m),
    ]


def nr_schrodinger_terms(j: Jet, m: float, v) -> list[np.ndarray]:
    """i d0 Psi + lap Psi / 2m + (v.grad) d0 Psi / 2m."""
    return [
        1j * j.d1[:, 0],
        laplacian(j.d2) / (2 * m),
        dir_grad(v, time_slice(j)) / (2 * m),
    ]


def naive_galilean_schrodinger_terms(j: Jet, m: float, v) -> list[np.ndarray]:
    """i(d0 + v.grad) Psi + lap Psi / 2m + (v.grad) d0 Psi / m."""
    return [
        1j * j.d1[:, 0],
        1j * dir_grad(v, j.d1),
        laplacian(j.d2) / (2 * m),
        dir_grad(v, time_slice(j)) / m,
    ]


def residual_nr_dirac(f: AnalyticField, m: float, b, plan: SamplePlan = DEFAULT_PLAN,
                      tol: float = 1e-12) -> ResidualReport:
    _check_mass(m)
    _check_components(f, 2)
    b = _boost(b)
    j = f.jet(plan.events())
    return make_report(EquationId.NR_DIRAC, nr_dirac_terms(j, m, b.velocity),
                       family=f.family, params=dict(f.params, m=m), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


def residual_nr_schrodinger_traveling(f: AnalyticField, m: float, b,
                                      plan: SamplePlan = DEFAULT_PLAN,
                                      tol: float = 1e-12) -> ResidualReport:
    _check_mass(m)
    b = _boost(b)
    j = f.jet(plan.events())
    return make_report(EquationId.NR_SCHRODINGER_TRAVELING,
                       nr_schrodinger_terms(j, m, b.velocity), family=f.family,
                       params=dict(f.params, m=m), beta=b.beta, mode=Mode.FIRST_ORDER,
                       tol=tol)


def residual_naive_galilean_schrodinger(f: AnalyticField, m: float, b,
                                        plan: SamplePlan = DEFAULT_PLAN,
                                        tol: float = 1e-12) -> ResidualReport:
    _check_mass(m)
    b = _boost(b)
    j = f.jet(plan.events())
    return make_report(EquationId.NAIVE_GALILEAN_SCHRODINGER,
                       naive_galilean_schrodinger_terms(j, m, b.velocity),
                       family=f.family, params=dict(f.params, m=m), beta=b.beta,
                       mode=Mode.FIRST_ORDER, tol=tol)


def schrodinger_mode(k, m: float, v=(0.0, 0.0, 0.0), amp=(1.0,)) -> PlaneWave:
    """exp(i(k.x - w t)) solving the traveling Schroedinger-type equation exactly."""
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    omega = (k @ k / (2 * m)) / (1.0 + (v @ k) / (2 * m))
    return PlaneWave(np.asarray(amp, complex), np.concatenate([[omega], -k]),
                     family="schrodinger-mode", params={"k": list(k), "m": m})


def galilean_shifted_mode(k, m: float, v, amp=(1.0,)) -> PlaneWave:
    """exp(i(k.(x - v t) - k^2 t / 2m)): a free solution translated with velocity v."""
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    omega = k @ k / (2 * m) + v @ k
    return PlaneWave(np.asarray(amp, complex), np.concatenate([[omega], -k]),
                     family="galilean-mode", params={"k": list(k), "m": m})


# --- small component ------------------------------------------------------


class _SmallComponentField(AnalyticField):
    """{1/2 sigma.v + i sigma.grad/2m + i/4m (sigma.v) d0} Psi.

    Values and first derivatives are closed form; second derivatives would
    need third derivatives of Psi and are returned as NaN.
    """

    def __init__(self, f: AnalyticField, m: float, v):
        self.f, self.m, self.v = f, m, np.asarray(v, dtype=float)
        self.n = 2
        self.family = f"small({f.family})"
        self.params = dict(f.params)

    def _apply(self, val, d1, ddt):
        s = sigma_dot(self.v)
        return 0.5 * mat(s, val) + 0.5j * sigma_grad(d1) / self.m + 0.25j * mat(s, ddt) / self.m

    def jet(self, X):
        j = self.f.jet(X)
        val = self._apply(j.val, j.d1, j.d1[:, 0])
        d1 = np.stack([self._apply(j.d1[:, mu], j.d2[:, mu], j.d2[:, mu, 0])
                       for mu in range(4)], axis=1)
        d2 = np.full(d1.shape[:2] + (4, 2), np.nan, dtype=complex)
        return Jet(val, d1, d2)


def small_component_terms(j: Jet, m: float, v) -> list[np.ndarray]:
    s = sigma_dot(v)
    return [0.5 * mat(s, j.val), 0.5j * sigma_grad(j.d1) / m, 0.25j * mat(s, j.d1[:, 0]) / m]


def small_component(big: AnalyticField, m: float, b) -> AnalyticField:
    """Leading-order small component Psi_L - Psi_R slaved to the big one."""
    _check_mass(m)
    _check_components(big, 2)
    v = _boost(b).velocity
    if isinstance(big, PlaneWave):
        # operator acts algebraically on a plane wave: d_mu -> -i k_mu
        s = sigma_dot(v)
        kl = big.k_lower
        M = 0.5 * s + (0.5j / m) * sigma_dot(-1j * kl[1:]) + (0.25j / m) * (-1j * kl[0]) * s
        return PlaneWave(M @ big.amp, kl, family=f"small({big.family})", params=dict(big.params))
    return _SmallComponentField(big, m, v)


def small_component_deviation(big: AnalyticField, small_exact: AnalyticField, m: float, b,
                              plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-12
                              ) -> ResidualReport:
    """Phi_exact - formula(Psi), normalised by the largest term of the formula."""
    b = _boost(b)
    X = plan.events()
    j = big.jet(X)
    terms = small_component_terms(j, m, b.velocity)
    phi = small_exact.jet(X).val
    residual = phi - sum(terms)
    return make_report(EquationId.SMALL_COMPONENT, [phi] + terms, family=big.family,
                       params=dict(big.params, m=m), beta=b.beta, mode=Mode.FIRST_ORDER,
                       tol=tol, residual=residual)


# --- operator differences --------------------------------------------------


def _op(eq: EquationId) -> tuple[int, Callable]:
    """(component count, terms(jet, m, b)) for each single-field evaluator."""
    table = {
        EquationId.DIRAC: (4, lambda j, m, b: dirac_terms(j, m)),
        EquationId.TRAVELING_DIRAC: (4, lambda j, m, b: dirac_terms(
            j.map(spinor_boost(b, Mode.EXACT).matrix), m)),
        EquationId.TWO_COMPONENT_TRAVELING: (4, lambda j, m, b: two_component_terms(
            j, m, b.rapidity_vector)),
        EquationId.MASSIVE_TWO_COMPONENT_TRAVELING: (4, lambda j, m, b: massive_two_component_terms(
            j, m, b.rapidity_vector)),
        EquationId.WEYL_TRAVELING_LEFT: (2, lambda j, m, b: weyl_terms(
            j.val, j.d1, b.rapidity_vector, "L")),
        EquationId.WEYL_TRAVELING_RIGHT: (2, lambda j, m, b: weyl_terms(
            j.val, j.d1, b.rapidity_vector, "R")),
        EquationId.NAIVE_GALILEAN_WEYL_LEFT: (2, lambda j, m, b: naive_galilean_weyl_terms(
            j.val, j.d1, b.rapidity_vector, "L")),
        EquationId.NAIVE_GALILEAN_WEYL_RIGHT: (2, lambda j, m, b: naive_galilean_weyl_terms(
            j.val, j.d1, b.rapidity_vector, "R")),
        EquationId.NR_DIRAC: (2, lambda j, m, b: nr_dirac_terms(j, m, b.velocity)),
        EquationId.NR_SCHRODINGER_TRAVELING: (0, lambda j, m, b: nr_schrodinger_terms(
            j, m, b.velocity)),
        EquationId.NAIVE_GALILEAN_SCHRODINGER: (0, lambda j, m, b: naive_galilean_schrodinger_terms(
            j, m, b.velocity)),
    }
    if eq not in table:
        raise KeyError(f"no single-field evaluator for {eq.value}")
    return table[eq]


def _diff_schrodinger(j: Jet, m, b):
    # traveling minus naive: -i (v.grad) Psi - (v.grad) d0 Psi / 2m
    v = b.velocity
    return -1j * dir_grad(v, j.d1) - dir_grad(v, time_slice(j)) / (2 * m)


def _diff_weyl(chirality):
    # traveling minus naive-Galilean Weyl operator:
    #   L: i{ +1/2 (sigma.w) d0 - 1/2 (w.grad) - i/2 sigma.(w x grad) }
    #   R: i{ -1/2 (sigma.w) d0 - 1/2 (w.grad) - i/2 sigma.(w x grad) }
    sgn = _chirality_sign(chirality)

    def pred(j: Jet, m, b):
        w = b.rapidity_vector
        s = sigma_dot(w)
        return (sgn * 0.5j * mat(s, j.d1[:, 0]) - 0.5j * dir_grad(w, j.d1)
                + 0.5 * sigma_cross_grad(w, j.d1))

    return pred


def _diff_zero(j: Jet, m, b):
    return np.zeros_like(j.val)


# predicted (OpA - OpB) f, derived by hand and stored as analytic operators
DIFFERENCE_REGISTRY: dict[tuple[EquationId, EquationId], Callable] = {
    (EquationId.NR_SCHRODINGER_TRAVELING, EquationId.NAIVE_GALILEAN_SCHRODINGER): _diff_schrodinger,
    (EquationId.WEYL_TRAVELING_LEFT, EquationId.NAIVE_GALILEAN_WEYL_LEFT): _diff_weyl("L"),
    (EquationId.WEYL_TRAVELING_RIGHT, EquationId.NAIVE_GALILEAN_WEYL_RIGHT): _diff_weyl("R"),
    # the sigma-terms cancel and the anticommutator collapses the mixed terms
    (EquationId.NR_DIRAC, EquationId.NR_SCHRODINGER_TRAVELING): _diff_zero,
    (EquationId.TWO_COMPONENT_TRAVELING, EquationId.MASSIVE_TWO_COMPONENT_TRAVELING): _diff_zero,
}


def operator_difference(idA, idB, f: AnalyticField, b, m: float = 1.0,
                        plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-13
                        ) -> ResidualReport:
    """Deviation of (OpA - OpB) f from the registered closed-form difference."""
    idA, idB = EquationId.parse(idA), EquationId.parse(idB)
    b = _boost(b)
    nA, opA = _op(idA)
    nB, opB = _op(idB)
    for n in (nA, nB):
        if n and f.n != n:
            raise ValueError(f"expected a {n}-component field, got {f.n}")
    if idA == idB:
        pred = _diff_zero
    elif (idA, idB) in DIFFERENCE_REGISTRY:
        pred = DIFFERENCE_REGISTRY[(idA, idB)]
    elif (idB, idA) in DIFFERENCE_REGISTRY:
        inner = DIFFERENCE_REGISTRY[(idB, idA)]

        def pred(j, m, b):
            return -inner(j, m, b)
    else:
        raise KeyError(f"no registered difference for ({idA.value}, {idB.value})")
    j = f.jet(plan.events())
    tA, tB = opA(j, m, b), opB(j, m, b)
    diff = sum(tA) - sum(tB)
    residual = diff - pred(j, m, b)
    return make_report(EquationId.OPERATOR_DIFFERENCE, tA + tB, family=f.family,
                       params=dict(f.params, m=m, pair=[idA.value, idB.value]),
                       beta=b.beta, mode=Mode.FIRST_ORDER, tol=tol, residual=residual)


def predicted_difference(idA, idB, f: AnalyticField, b, m: float = 1.0,
                         plan: SamplePlan = DEFAULT_PLAN) -> np.ndarray:
    """The registered difference expression itself, per event."""
    idA, idB = EquationId.parse(idA), EquationId.parse(idB)
    b = _boost(b)
    j = f.jet(plan.events())
    if (idA, idB) in DIFFERENCE_REGISTRY:
        return DIFFERENCE_REGISTRY[(idA, idB)](j, m, b)
    return -DIFFERENCE_REGISTRY[(idB, idA)](j, m, b)
