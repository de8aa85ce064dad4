"""Manufactured analytic fields with closed-form derivatives.

Every field evaluates a *jet* at a batch of events ``X`` of shape (N, 4)
(columns t, x, y, z): the value (N, n), first derivatives d_mu (N, 4, n) and
second derivatives d_mu d_nu (N, 4, 4, n).  Derivatives are always closed
form; finite differences live only in :func:`fd_check`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import GAMMA, BoostSpec, Mode, lorentz_boost, spinor_boost, sigma_dot

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """SplitMix64 stream (Steele, Lea & Flood); yields unsigned 64-bit ints."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def uniform01(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [0, 1) from the top 53 bits of SplitMix64."""
    gen = splitmix64(seed)
    return np.array([(next(gen) >> 11) * 2.0**-53 for _ in range(count)])


@dataclass(frozen=True)
class Jet:
    val: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def map(self, M: np.ndarray) -> "Jet":
        """Apply a constant matrix to the component index."""
        return Jet(self.val @ M.T, self.d1 @ M.T, self.d2 @ M.T)

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.val + other.val, self.d1 + other.d1, self.d2 + other.d2)

    def scale(self, c) -> "Jet":
        return Jet(c * self.val, c * self.d1, c * self.d2)


@dataclass(frozen=True)
class SamplePlan:
    """Regular space-time lattice plus seeded pseudo-random events.

    Events lie in [-L, L]^3 x [0, T].  Extra points come from SplitMix64
    seeded with ``seed``, four draws per event in (t, x, y, z) order.
    """

    half_width: float = 2.0
    duration: float = 2.0
    counts: tuple[int, int, int, int] = (5, 5, 5, 5)
    extra: int = 125
    seed: int = 20240601

    def events(self) -> np.ndarray:
        nt, nx, ny, nz = self.counts
        axes = [
            np.linspace(0.0, self.duration, nt) if nt > 1 else np.zeros(1),
            *(
                np.linspace(-self.half_width, self.half_width, c) if c > 1 else np.zeros(1)
                for c in (nx, ny, nz)
            ),
        ]
        parts = []
        if min(self.counts) > 0:
            grid = np.array(list(itertools.product(*axes)), dtype=float)
            parts.append(grid)
        if self.extra > 0:
            u = uniform01(self.seed, 4 * self.extra).reshape(self.extra, 4)
            pts = np.empty_like(u)
            pts[:, 0] = u[:, 0] * self.duration
            pts[:, 1:] = (2.0 * u[:, 1:] - 1.0) * self.half_width
            parts.append(pts)
        if not parts:
            raise ValueError("sample plan has no events")
        return np.concatenate(parts, axis=0)


DEFAULT_PLAN = SamplePlan()


class AnalyticField:
    """Base class; subclasses implement :meth:`jet`."""

    n: int
    family: str = "field"
    params: dict

    def jet(self, X: np.ndarray) -> Jet:
        raise NotImplementedError

    def value(self, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        v = self.jet(X).val
        return v[0] if np.ndim(x) == 1 else v

    def d(self, mu: int, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        v = self.jet(X).d1[:, mu]
        return v[0] if np.ndim(x) == 1 else v

    def d2(self, mu: int, nu: int, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        v = self.jet(X).d2[:, mu, nu]
        return v[0] if np.ndim(x) == 1 else v

    def __add__(self, other):
        return SumField(self, other)

    def __rmul__(self, c):
        return ScaledField(self, c)


class PlaneWave(AnalyticField):
    """amp * exp(-i k_mu x^mu) with the covariant wave vector ``k_lower``."""

    def __init__(self, amp, k_lower, family="planewave", params=None):
        self.amp = np.asarray(amp, dtype=complex)
        self.k_lower = np.asarray(k_lower, dtype=float)
        self.n = self.amp.size
        self.family = family
        self.params = params or {}

    @property
    def four_momentum(self) -> np.ndarray:
        """Contravariant k^mu."""
        return self.k_lower * np.array([1.0, -1.0, -1.0, -1.0])

    def jet(self, X):
        phase = np.exp(-1j * (X @ self.k_lower))
        val = phase[:, None] * self.amp[None, :]
        mk = -1j * self.k_lower
        d1 = mk[None, :, None] * val[:, None, :]
        d2 = np.multiply.outer(mk, mk)[None, :, :, None] * val[:, None, None, :]
        return Jet(val, d1, d2)


class GaussianPacket(AnalyticField):
    """exp(-|x|^2 / (2 w^2)) exp(i k0.x) (1 + t) chi."""

    def __init__(self, k0, width, chi):
        if width <= 0:
            raise ValueError("width must be > 0")
        self.k0 = np.asarray(k0, dtype=float)
        self.width = float(width)
        self.chi = np.asarray(chi, dtype=complex)
        self.n = self.chi.size
        self.family = "gaussian"
        self.params = {"k0": list(self.k0), "width": self.width}

    def jet(self, X):
        N = X.shape[0]
        t, r = X[:, 0], X[:, 1:]
        w2 = self.width**2
        g = np.exp(-np.sum(r * r, axis=1) / (2 * w2) + 1j * (r @ self.k0))
        # grad of the exponent, shape (N, 3)
        s1 = -r / w2 + 1j * self.k0[None, :]
        tf = 1.0 + t
        base = g[:, None] * self.chi[None, :]
        val = tf[:, None] * base
        d1 = np.zeros((N, 4, self.n), dtype=complex)
        d1[:, 0] = base
        d1[:, 1:] = s1[:, :, None] * val[:, None, :]
        d2 = np.zeros((N, 4, 4, self.n), dtype=complex)
        d2[:, 0, 1:] = s1[:, :, None] * base[:, None, :]
        d2[:, 1:, 0] = d2[:, 0, 1:]
        hess = np.einsum("ni,nj->nij", s1, s1) - np.eye(3)[None] / w2
        d2[:, 1:, 1:] = hess[:, :, :, None] * val[:, None, None, :]
        return Jet(val, d1, d2)


class QuadraticExpField(AnalyticField):
    """exp(1/2 x^T Q x + b.x) chi with complex symmetric Q (4x4) and b (4)."""

    def __init__(self, Q, b, chi, family="quadexp", params=None):
        Q = np.asarray(Q, dtype=complex)
        self.Q = 0.5 * (Q + Q.T)
        self.b = np.asarray(b, dtype=complex)
        self.chi = np.asarray(chi, dtype=complex)
        self.n = self.chi.size
        self.family = family
        self.params = params or {}

    def jet(self, X):
        S = 0.5 * np.einsum("ni,ij,nj->n", X, self.Q, X) + X @ self.b
        s1 = X @ self.Q + self.b[None, :]
        val = np.exp(S)[:, None] * self.chi[None, :]
        d1 = s1[:, :, None] * val[:, None, :]
        hess = np.einsum("ni,nj->nij", s1, s1) + self.Q[None]
        d2 = hess[:, :, :, None] * val[:, None, None, :]
        return Jet(val, d1, d2)


class PolynomialField(AnalyticField):
    """Quadratic polynomial in (t, x, y, z) per component, seeded coefficients."""

    def __init__(self, n: int, seed: int, scale: float = 0.5):
        u = uniform01(seed, 2 * n * 15)
        z = scale * ((2 * u[: n * 15] - 1) + 1j * (2 * u[n * 15 :] - 1))
        z = z.reshape(n, 15)
        self.c0 = z[:, 0]
        self.c1 = z[:, 1:5].T  # (4, n)
        Q = np.zeros((4, 4, n), dtype=complex)
        iu = np.triu_indices(4)
        Q[iu[0], iu[1]] = z[:, 5:15].T
        Q[iu[1], iu[0]] = z[:, 5:15].T
        self.Q = Q
        self.n = n
        self.family = "polynomial"
        self.params = {"seed": seed}

    def jet(self, X):
        N = X.shape[0]
        val = (
            self.c0[None, :]
            + X @ self.c1
            + 0.5 * np.einsum("ni,ijc,nj->nc", X, self.Q, X)
        )
        d1 = self.c1[None] + np.einsum("ijc,nj->nic", self.Q, X)
        d2 = np.broadcast_to(self.Q[None], (N, 4, 4, self.n)).copy()
        return Jet(val, d1, d2)


class ComposedField(AnalyticField):
    """f(L x) for a constant 4x4 matrix L (exact chain rule)."""

    def __init__(self, f: AnalyticField, L: np.ndarray, family=None, params=None):
        self.f = f
        self.L = np.asarray(L, dtype=float)
        self.n = f.n
        self.family = family or f.family
        self.params = params or dict(f.params)

    def jet(self, X):
        j = self.f.jet(X @ self.L.T)
        d1 = np.einsum("am,nac->nmc", self.L, j.d1)
        d2 = np.einsum("am,bk,nabc->nmkc", self.L, self.L, j.d2)
        return Jet(j.val, d1, d2)


class MatrixField(AnalyticField):
    """M f for a constant (n_out, n_in) matrix."""

    def __init__(self, f: AnalyticField, M: np.ndarray, family=None, params=None):
        self.f = f
        self.M = np.asarray(M, dtype=complex)
        self.n = self.M.shape[0]
        self.family = family or f.family
        self.params = params or dict(f.params)

    def jet(self, X):
        return self.f.jet(X).map(self.M)


class SumField(AnalyticField):
    def __init__(self, a: AnalyticField, b: AnalyticField):
        if a.n != b.n:
            raise ValueError("component count mismatch")
        self.a, self.b = a, b
        self.n = a.n
        self.family = f"{a.family}+{b.family}"
        self.params = {}

    def jet(self, X):
        return self.a.jet(X) + self.b.jet(X)


class ScaledField(AnalyticField):
    def __init__(self, f: AnalyticField, c):
        self.f, self.c = f, complex(c)
        self.n = f.n
        self.family = f.family
        self.params = dict(f.params)

    def jet(self, X):
        return self.f.jet(X).scale(self.c)


class ScalarFactorField(AnalyticField):
    """s(x) f(x) where ``scalar_jet(X)`` returns (s, ds (N,4), dds (N,4,4))."""

    def __init__(self, f: AnalyticField, scalar_jet, family=None, params=None):
        self.f = f
        self.scalar_jet = scalar_jet
        self.n = f.n
        self.family = family or f.family
        self.params = params or dict(f.params)

    def jet(self, X):
        s, ds, dds = self.scalar_jet(X)
        j = self.f.jet(X)
        val = s[:, None] * j.val
        d1 = ds[:, :, None] * j.val[:, None, :] + s[:, None, None] * j.d1
        d2 = (
            dds[:, :, :, None] * j.val[:, None, None, :]
            + ds[:, :, None, None] * j.d1[:, None, :, :]
            + ds[:, None, :, None] * j.d1[:, :, None, :]
            + s[:, None, None, None] * j.d2
        )
        return Jet(val, d1, d2)


class ZeroField(AnalyticField):
    def __init__(self, n: int):
        self.n = n
        self.family = "zero"
        self.params = {}

    def jet(self, X):
        N = X.shape[0]
        return Jet(
            np.zeros((N, self.n), complex),
            np.zeros((N, 4, self.n), complex),
            np.zeros((N, 4, 4, self.n), complex),
        )


def _spin_basis(spin: int) -> np.ndarray:
    if spin not in (0, 1):
        raise ValueError("spin index must be 0 or 1")
    return np.eye(2, dtype=complex)[spin]


def dirac_spinor(p, m: float, spin: int = 0) -> np.ndarray:
    """Positive-energy u(p): the exact boost to (E, p) applied to sqrt(m)(xi, xi)."""
    if m <= 0:
        raise ValueError("mass must be > 0")
    p = np.asarray(p, dtype=float)
    xi = _spin_basis(spin)
    rest = np.sqrt(m) * np.concatenate([xi, xi])
    pn = np.linalg.norm(p)
    if pn == 0:
        return rest
    b = BoostSpec.from_rapidity(np.arcsinh(pn / m), p / pn)
    return spinor_boost(b, Mode.EXACT).matrix @ rest


def dirac_plane_wave(p, m: float, spin: int = 0) -> PlaneWave:
    """u(p) exp(-i(E t - p.x)), E = sqrt(p^2 + m^2)."""
    if m <= 0:
        raise ValueError("mass must be > 0")
    p = np.asarray(p, dtype=float)
    E = float(np.sqrt(p @ p + m * m))
    u = dirac_spinor(p, m, spin)
    return PlaneWave(
        u,
        np.concatenate([[E], -p]),
        family="planewave",
        params={"p": list(map(float, p)), "m": float(m), "spin": spin},
    )


def massless_plane_wave(k, chirality: str) -> PlaneWave:
    """Two-component Weyl plane wave chi exp(-i|k|(t - n.x)).

    For chirality "L", (sigma.n) chi = -chi; for "R", (sigma.n) chi = +chi.
    """
    k = np.asarray(k, dtype=float)
    E = float(np.linalg.norm(k))
    if E == 0:
        raise ValueError("massless plane wave needs nonzero momentum")
    w, V = np.linalg.eigh(sigma_dot(k / E))
    if chirality == "L":
        chi = V[:, np.argmin(w)]
    elif chirality == "R":
        chi = V[:, np.argmax(w)]
    else:
        raise ValueError(f"chirality must be 'L' or 'R', got {chirality!r}")
    return PlaneWave(
        chi,
        np.concatenate([[E], -k]),
        family="weyl-planewave",
        params={"k": list(map(float, k)), "chirality": chirality},
    )


def boost_field(f: AnalyticField, b) -> ComposedField:
    """Traveling-wave relabelling f~(x) = f(Lambda^-1 x) with the exact boost."""
    b = b if isinstance(b, BoostSpec) else BoostSpec(tuple(b))
    Linv = lorentz_boost(b.inverse(), Mode.EXACT).matrix
    params = dict(f.params)
    params["boost"] = list(b.beta)
    if isinstance(f, PlaneWave):
        # exponent is linear, so the result is again a plane wave
        return PlaneWave(f.amp, f.k_lower @ Linv, family=f.family, params=params)
    return ComposedField(f, Linv, params=params)


def strip_rest_mass(f: AnalyticField, m: float) -> AnalyticField:
    """exp(+i m t) f, removing the rest-energy oscillation."""
    if f.n not in (2, 4):
        raise ValueError("rest-mass stripping expects a 2- or 4-component field")
    if isinstance(f, PlaneWave):
        params = dict(f.params, stripped_mass=float(m))
        k = f.k_lower.copy()
        k[0] -= m
        return PlaneWave(f.amp, k, family=f.family, params=params)

    def phase(X):
        N = X.shape[0]
        s = np.exp(1j * m * X[:, 0])
        ds = np.zeros((N, 4), complex)
        ds[:, 0] = 1j * m * s
        dds = np.zeros((N, 4, 4), complex)
        dds[:, 0, 0] = -m * m * s
        return s, ds, dds

    return ScalarFactorField(f, phase, params=dict(f.params, stripped_mass=float(m)))


_BIG = np.hstack([np.eye(2), np.eye(2)]).astype(complex)
_SMALL = np.hstack([np.eye(2), -np.eye(2)]).astype(complex)


def big_component(f: AnalyticField) -> MatrixField:
    """Psi_L + Psi_R of a four-component field."""
    return MatrixField(f, _BIG)


def small_component_exact(f: AnalyticField) -> MatrixField:
    """Psi_L - Psi_R of a four-component field."""
    return MatrixField(f, _SMALL)


def gaussian_packet(k0, width: float, n: int, chi=None) -> GaussianPacket:
    if chi is None:
        chi = np.array([1.0, 0.5 - 0.25j, -0.3 + 0.4j, 0.2j][:n], dtype=complex)
        if n == 1:
            chi = np.array([1.0 + 0.0j])
    return GaussianPacket(k0, width, chi)


def seeded_gaussian(seed: int, n: int) -> GaussianPacket:
    """Gaussian packet with seeded wave vector, width and polarisation."""
    u = uniform01(seed, 4 + 2 * n)
    k0 = 2.0 * u[:3] - 1.0
    width = 0.8 + u[3]
    chi = (2 * u[4 : 4 + n] - 1) + 1j * (2 * u[4 + n :] - 1)
    g = GaussianPacket(k0, width, chi)
    g.params["seed"] = seed
    return g


def rest_spinor_check(f: PlaneWave) -> float:
    """ubar u for a plane-wave Dirac field."""
    u = f.amp
    return float(np.real(u.conj() @ GAMMA[0] @ u))


def fd_check(f: AnalyticField, plan: SamplePlan = DEFAULT_PLAN, h: float = 1e-3,
             order: int = 1) -> float:
    """Max relative deviation of closed-form derivatives from central differences.

    ``order=1`` checks first derivatives against differences of the value,
    ``order=2`` checks second derivatives against differences of the first.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    X = plan.events()
    j = f.jet(X)
    exact = j.d1 if order == 1 else j.d2
    scale = np.abs(exact).max()
    if scale == 0.0:
        scale = 1.0
    dev = 0.0
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        jp, jm = f.jet(X + e), f.jet(X - e)
        if order == 1:
            fd = (jp.val - jm.val) / (2 * h)
            dev = max(dev, np.abs(fd - exact[:, mu]).max())
        else:
            fd = (jp.d1 - jm.d1) / (2 * h)
            dev = max(dev, np.abs(fd - exact[:, mu]).max())
    return float(dev / scale)


def seeded_boosts(count: int, max_speed: float = 0.9, seed: int = 7) -> list[BoostSpec]:
    """Boosts with seeded directions and speeds uniform in [0, max_speed]."""
    u = uniform01(seed, 3 * count).reshape(count, 3)
    out = []
    for a, c, s in u:
        cos_t = 2 * a - 1
        sin_t = np.sqrt(1 - cos_t**2)
        n = np.array([sin_t * np.cos(2 * np.pi * c), sin_t * np.sin(2 * np.pi * c), cos_t])
        out.append(BoostSpec(tuple(max_speed * s * n)))
    return out


def seeded_vectors(count: int, seed: int = 11) -> list[tuple[np.ndarray, np.ndarray]]:
    u = 2 * uniform01(seed, 6 * count).reshape(count, 6) - 1
    return [(row[:3], row[3:]) for row in u]
