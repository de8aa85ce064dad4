"""Multi-spinor fields obeying a Dirac equation in every index (ranks 1 and 2)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GAMMA, BoostSpec, Mode, spinor_boost
from .equations import EquationId, ResidualReport, make_report
from .fields import (DEFAULT_PLAN, AnalyticField, Jet, PlaneWave, SamplePlan, boost_field,
                     dirac_spinor)

_SYMMETRY_TOL = 1e-12


def swap_indices(a: np.ndarray) -> np.ndarray:
    """Exchange the two spinor indices of a flattened rank-2 trailing axis."""
    shape = a.shape[:-1]
    return a.reshape(*shape, 4, 4).swapaxes(-1, -2).reshape(*shape, 16)


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + swap_indices(a))


def index_operator(M: np.ndarray, k: int, rank: int) -> np.ndarray:
    """M acting on spinor index k of a rank-``rank`` multi-spinor."""
    if rank == 1:
        return M
    eye = np.eye(4, dtype=complex)
    return np.kron(M, eye) if k == 0 else np.kron(eye, M)


def all_index_boost(b, mode, rank: int) -> np.ndarray:
    S = spinor_boost(b, mode).matrix
    return S if rank == 1 else np.kron(S, S)


@dataclass
class MultiSpinorField:
    """Wraps an analytic field with 4**rank components; index (a, b) -> 4a + b."""

    field: AnalyticField
    rank: int
    symmetric: bool = False

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise ValueError("rank must be 1 or 2")
        if self.field.n != 4**self.rank:
            raise ValueError(f"rank {self.rank} needs {4**self.rank} components, got {self.field.n}")
        if self.symmetric and self.rank == 2:
            dev = self.symmetry_deviation()
            if dev > _SYMMETRY_TOL:
                raise ValueError(f"field is not symmetric under index exchange (deviation {dev:.3g})")

    def symmetry_deviation(self, plan: SamplePlan = DEFAULT_PLAN) -> float:
        if self.rank == 1:
            return 0.0
        v = self.field.jet(plan.events()).val
        return float(np.abs(v - swap_indices(v)).max() / max(np.abs(v).max(), 1e-300))

    @property
    def family(self) -> str:
        return self.field.family


def product_plane_wave(p, m: float, spins=(0, 1), symmetric: bool = True) -> MultiSpinorField:
    """u(p, s1) (x) u(p, s2) exp(-i p.x), symmetrised when requested."""
    u1, u2 = dirac_spinor(p, m, spins[0]), dirac_spinor(p, m, spins[1])
    amp = np.kron(u1, u2)
    if symmetric:
        amp = symmetrize(amp)
    E = float(np.sqrt(m * m + np.dot(p, p)))
    kl = np.concatenate([[E], -np.asarray(p, dtype=float)])
    f = PlaneWave(amp, kl, family="bw-product",
                  params={"p": [float(x) for x in p], "m": m, "spins": list(spins)})
    return MultiSpinorField(f, 2, symmetric)


def antisymmetric_product(p, m: float) -> AnalyticField:
    u1, u2 = dirac_spinor(p, m, 0), dirac_spinor(p, m, 1)
    amp = 0.5 * (np.kron(u1, u2) - np.kron(u2, u1))
    E = float(np.sqrt(m * m + np.dot(p, p)))
    return PlaneWave(amp, np.concatenate([[E], -np.asarray(p, dtype=float)]), family="bw-anti")


def _check_index(F: MultiSpinorField, k: int):
    if not 0 <= k < F.rank:
        raise IndexError(f"index {k} out of range for rank {F.rank}")


def bw_terms(j: Jet, m: float, k: int, rank: int) -> list[np.ndarray]:
    """Terms of (i gamma^mu d_mu - m) acting on index k."""
    terms = [1j * j.d1[:, mu] @ index_operator(GAMMA[mu], k, rank).T for mu in range(4)]
    terms.append(-m * j.val)
    return terms


def bw_residual(F: MultiSpinorField, m: float, k: int = 0, plan: SamplePlan = DEFAULT_PLAN,
                tol: float = 1e-12) -> ResidualReport:
    _check_index(F, k)
    j = F.field.jet(plan.events())
    return make_report(EquationId.BW, bw_terms(j, m, k, F.rank), family=F.family,
                       params=dict(F.field.params, m=m, index=k, rank=F.rank), tol=tol)


def boost_multispinor(F: MultiSpinorField, b) -> MultiSpinorField:
    """F(Lambda^-1 x); components unchanged."""
    return MultiSpinorField(boost_field(F.field, b), F.rank, F.symmetric)


def traveling_bw_residual(Ft: MultiSpinorField, m: float, b, mode=Mode.EXACT, k: int = 0,
                          plan: SamplePlan = DEFAULT_PLAN, tol: float = 1e-10) -> ResidualReport:
    """Lambda_1/2 on every index, then the Dirac operator on index k."""
    _check_index(Ft, k)
    b = b if isinstance(b, BoostSpec) else BoostSpec(tuple(b))
    S = all_index_boost(b, mode, Ft.rank)
    j = Ft.field.jet(plan.events()).map(S)
    return make_report(EquationId.TRAVELING_BW, bw_terms(j, m, k, Ft.rank), family=Ft.family,
                       params=dict(Ft.field.params, m=m, index=k, rank=Ft.rank),
                       beta=b.beta, mode=mode, tol=tol)


def symmetrize_boost_commutator(F: MultiSpinorField, b, mode=Mode.EXACT,
                                plan: SamplePlan = DEFAULT_PLAN) -> float:
    """max | sym(S (x) S F) - S (x) S sym(F) | relative to max |F|."""
    S = all_index_boost(b, mode, 2)
    v = F.field.jet(plan.events()).val
    a = symmetrize(v @ S.T)
    c = symmetrize(v) @ S.T
    return float(np.abs(a - c).max() / max(np.abs(v).max(), 1e-300))
