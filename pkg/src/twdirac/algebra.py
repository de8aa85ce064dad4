"""Pauli and gamma matrices, Lorentz boosts of coordinates and of bispinors.

Conventions: metric signature (+,-,-,-), chiral (Weyl) basis with
gamma^mu = [[0, sigma^mu], [sigmabar^mu, 0]], natural units.  A boost is
described by its dimensionless velocity ``beta = v/c``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

_SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
_SIGMA.setflags(write=False)

# spatial Pauli matrices stacked, shape (3, 2, 2)
SIGMA_VEC = _SIGMA[1:]

# Levi-Civita symbol, used for cross products with the gradient operator
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0


class Mode(str, enum.Enum):
    EXACT = "exact"
    FIRST_ORDER = "first-order"


def pauli(i: int) -> np.ndarray:
    """Return sigma^i; index 0 is the 2x2 identity."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be in 0..3, got {i!r}")
    return _SIGMA[i].copy()


def sigma_dot(vec) -> np.ndarray:
    """sigma . vec for a real or complex 3-vector."""
    return np.einsum("i,iab->ab", np.asarray(vec), SIGMA_VEC)


def gamma_weyl() -> list[np.ndarray]:
    """gamma^0..gamma^3 in the chiral basis."""
    gammas = []
    for mu in range(4):
        s = _SIGMA[mu]
        sbar = s if mu == 0 else -s
        g = np.zeros((4, 4), dtype=complex)
        g[:2, 2:] = s
        g[2:, :2] = sbar
        gammas.append(g)
    return gammas


GAMMA = np.array(gamma_weyl())
GAMMA.setflags(write=False)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def clifford_deviation() -> float:
    """max_{mu,nu} | {gamma^mu, gamma^nu} - 2 g^{mu nu} I |."""
    dev = 0.0
    for mu in range(4):
        for nu in range(4):
            lhs = anticommutator(GAMMA[mu], GAMMA[nu])
            dev = max(dev, np.abs(lhs - 2 * METRIC[mu, nu] * np.eye(4)).max())
    return float(dev)


@dataclass(frozen=True)
class BoostSpec:
    """Pure boost with velocity ``beta`` (units of c)."""

    beta: tuple[float, float, float]
    eta: float = field(init=False)
    nhat: tuple[float, float, float] = field(init=False)

    def __post_init__(self):
        b = np.asarray(self.beta, dtype=float)
        if b.shape != (3,) or not np.all(np.isfinite(b)):
            raise ValueError("beta must be a finite 3-vector")
        speed = float(np.linalg.norm(b))
        if speed >= 1.0:
            raise ValueError("beta magnitude must be < 1")
        object.__setattr__(self, "beta", tuple(float(x) for x in b))
        object.__setattr__(self, "eta", float(np.arctanh(speed)))
        n = b / speed if speed > 0 else np.array([0.0, 0.0, 1.0])
        object.__setattr__(self, "nhat", tuple(float(x) for x in n))

    @classmethod
    def from_rapidity(cls, eta: float, nhat) -> "BoostSpec":
        n = np.asarray(nhat, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(tuple(np.tanh(eta) * n))

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.beta))

    @property
    def velocity(self) -> np.ndarray:
        return np.asarray(self.beta)

    @property
    def rapidity_vector(self) -> np.ndarray:
        """eta * nhat; the velocity used by the first-order boost matrices."""
        return self.eta * np.asarray(self.nhat)

    def inverse(self) -> "BoostSpec":
        return BoostSpec(tuple(-x for x in self.beta))


@dataclass(frozen=True)
class LorentzMatrix:
    matrix: np.ndarray
    mode: Mode


@dataclass(frozen=True)
class SpinorBoost:
    matrix: np.ndarray
    mode: Mode
    boost: BoostSpec


def _as_boost(b) -> BoostSpec:
    return b if isinstance(b, BoostSpec) else BoostSpec(tuple(b))


def lorentz_boost(b, mode=Mode.EXACT) -> LorentzMatrix:
    """Contravariant boost matrix x' = L x mixing t with the x.nhat direction.

    The exact form is the cosh/sinh rapidity block; the first-order form keeps
    only the terms linear in eta.
    """
    b = _as_boost(b)
    mode = Mode(mode)
    n = np.asarray(b.nhat)
    L = np.eye(4)
    if mode is Mode.EXACT:
        ch, sh = np.cosh(b.eta), np.sinh(b.eta)
        L[0, 0] = ch
        L[0, 1:] = sh * n
        L[1:, 0] = sh * n
        L[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    else:
        L[0, 1:] = b.eta * n
        L[1:, 0] = b.eta * n
    return LorentzMatrix(L, mode)


def spinor_boost(b, mode=Mode.EXACT) -> SpinorBoost:
    """Bispinor representation of the boost, block-diagonal in the chiral basis.

    Exact: diag(exp(-eta/2 sigma.n), exp(+eta/2 sigma.n)).
    First order: 1 - (eta/2) diag(sigma.n, -sigma.n).
    """
    b = _as_boost(b)
    mode = Mode(mode)
    sn = sigma_dot(b.nhat)
    one = np.eye(2, dtype=complex)
    h = 0.5 * b.eta
    S = np.zeros((4, 4), dtype=complex)
    if mode is Mode.EXACT:
        S[:2, :2] = np.cosh(h) * one - np.sinh(h) * sn
        S[2:, 2:] = np.cosh(h) * one + np.sinh(h) * sn
    else:
        S[:2, :2] = one - h * sn
        S[2:, 2:] = one + h * sn
    return SpinorBoost(S, mode, b)


def spin_generators() -> np.ndarray:
    """S^{mu nu} = (i/4)[gamma^mu, gamma^nu], shape (4, 4, 4, 4)."""
    S = np.zeros((4, 4, 4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            S[mu, nu] = 0.25j * (GAMMA[mu] @ GAMMA[nu] - GAMMA[nu] @ GAMMA[mu])
    return S


def check_covariance(b) -> float:
    """max_mu | L12^-1 gamma^mu L12 - Lambda^mu_nu gamma^nu | for the exact boost."""
    b = _as_boost(b)
    S = spinor_boost(b, Mode.EXACT).matrix
    L = lorentz_boost(b, Mode.EXACT).matrix
    Sinv = np.linalg.inv(S)
    dev = 0.0
    for mu in range(4):
        lhs = Sinv @ GAMMA[mu] @ S
        rhs = np.einsum("n,nab->ab", L[mu], GAMMA)
        dev = max(dev, np.abs(lhs - rhs).max())
    return float(dev)


def sigma_product_check(P, v) -> float:
    """Deviation of (P.sigma)(v.sigma) from P.v + i (P x v).sigma."""
    P = np.asarray(P, dtype=float)
    v = np.asarray(v, dtype=float)
    lhs = sigma_dot(P) @ sigma_dot(v)
    rhs = np.dot(P, v) * np.eye(2) + 1j * sigma_dot(np.cross(P, v))
    return float(np.abs(lhs - rhs).max())


def identity_suite(boosts, vectors=()) -> dict[str, float]:
    """Worst deviations of the defining identities over the given boosts.

    ``vectors`` is a sequence of (P, v) pairs for the sigma-product formula.
    """
    det_dev = cov_dev = 0.0
    for b in boosts:
        S = spinor_boost(b, Mode.EXACT).matrix
        det_dev = max(det_dev, abs(np.linalg.det(S) - 1.0))
        cov_dev = max(cov_dev, check_covariance(b))
    sig_dev = max((sigma_product_check(P, v) for P, v in vectors), default=0.0)
    return {
        "clifford": clifford_deviation(),
        "sigma_product": float(sig_dev),
        "determinant": float(det_dev),
        "covariance": float(cov_dev),
    }
