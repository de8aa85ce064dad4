"""Spectral time evolution of free Schroedinger-type equations on periodic grids.

Every equation here is linear with constant coefficients, so each Fourier
mode exp(i(k.x - w t)) evolves by an exact phase and there is no
time-stepping error.  A one-dimensional grid lies along the z axis.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

GUARD = 0.5


class Scheme(str, enum.Enum):
    TRAVELING = "traveling"
    ORDINARY = "ordinary"
    NAIVE_GALILEAN = "naive_galilean"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        return cls({"naive": "naive_galilean"}.get(key, key))


def dispersion(scheme, k, v, m: float) -> np.ndarray:
    """Frequency of the mode exp(i(k.x - w t)); ``k`` has shape (..., 3).

    traveling:      w (1 + v.k/2m) = k^2/2m
    ordinary:       w = k^2/2m
    naive_galilean: w = k^2/2m + v.k
    """
    if m <= 0:
        raise ValueError("mass must be > 0")
    scheme = Scheme.parse(scheme)
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    k2 = np.sum(k * k, axis=-1)
    vk = k @ v
    w0 = k2 / (2 * m)
    if scheme is Scheme.ORDINARY:
        return w0
    if scheme is Scheme.NAIVE_GALILEAN:
        return w0 + vk
    factor = 1.0 + vk / (2 * m)
    if np.any(factor < GUARD):
        worst = float(np.min(factor))
        raise ValueError(f"validity guard violated: 1 + v.k/2m = {worst:.6g} < {GUARD}")
    return w0 / factor


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass
class GridState:
    dim: int
    n: int
    box: float
    amp: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if self.dim not in (1, 3):
            raise ValueError("dimension must be 1 or 3")
        if not _is_pow2(self.n):
            raise ValueError(f"grid points per axis must be a power of two, got {self.n}")
        if self.box <= 0:
            raise ValueError("box length must be > 0")
        self.amp = np.asarray(self.amp, dtype=complex)
        if self.amp.shape != (self.n,) * self.dim:
            raise ValueError(f"amplitude shape {self.amp.shape} does not match grid")
        if not np.all(np.isfinite(self.amp)):
            raise ValueError("amplitudes must be finite")

    @property
    def dx(self) -> float:
        return self.box / self.n

    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    def wavevectors(self) -> np.ndarray:
        """Mode wave vectors as 3-vectors, shape grid + (3,)."""
        k1 = 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        if self.dim == 1:
            K = np.zeros((self.n, 3))
            K[:, 2] = k1
            return K
        kx, ky, kz = np.meshgrid(k1, k1, k1, indexing="ij")
        return np.stack([kx, ky, kz], axis=-1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amp) ** 2) * self.dx**self.dim))


def gaussian_state(dim: int, n: int, box: float, k0, width: float) -> GridState:
    """Normalised Gaussian packet centred in the box with mean wave vector k0."""
    k0 = np.asarray(k0, dtype=float)
    x = (np.arange(n) - n // 2) * (box / n)
    if dim == 1:
        r2 = x**2
        phase = k0[2] * x
    else:
        X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
        r2 = X**2 + Y**2 + Z**2
        phase = k0[0] * X + k0[1] * Y + k0[2] * Z
    amp = np.exp(-r2 / (2 * width**2) + 1j * phase)
    g = GridState(dim, n, box, amp)
    g.amp = g.amp / g.norm()
    return g


def plane_mode_state(dim: int, n: int, box: float, index) -> GridState:
    """A single Fourier mode exp(i k.x) with integer mode index per axis."""
    x = (np.arange(n) - n // 2) * (box / n)
    idx = np.atleast_1d(index)
    k = 2 * np.pi * idx / box
    if dim == 1:
        amp = np.exp(1j * k[-1] * x)
    else:
        X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
        amp = np.exp(1j * (k[0] * X + k[1] * Y + k[2] * Z))
    return GridState(dim, n, box, amp)


def _phases(g: GridState, scheme, v, m, t) -> np.ndarray:
    return np.exp(-1j * dispersion(scheme, g.wavevectors(), v, m) * t)


def propagate(g: GridState, scheme, v, m: float, dt: float, steps: int) -> GridState:
    """Evolve by ``steps`` steps of ``dt`` with the exact per-mode phase."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    t = dt * steps
    phase = _phases(g, scheme, v, m, t)
    if steps == 0:
        return replace(g, amp=g.amp.copy())
    amp = np.fft.ifftn(np.fft.fftn(g.amp) * phase)
    return GridState(g.dim, g.n, g.box, amp, g.t + t)


@dataclass
class DeviationSeries:
    t: np.ndarray
    schemes: list
    norms: dict = field(default_factory=dict)
    deviations: dict = field(default_factory=dict)

    def deviation(self, a, b) -> np.ndarray:
        a, b = Scheme.parse(a), Scheme.parse(b)
        if a == b:
            return np.zeros_like(self.t)
        key = (a, b) if (a, b) in self.deviations else (b, a)
        return self.deviations[key]


def compare_runs(g0: GridState, schemes, v, m: float, dt: float, steps: int) -> DeviationSeries:
    """Evolve copies of g0 under each scheme; record norms and pairwise L2 deviations per step."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    schemes = [Scheme.parse(s) for s in schemes]
    spec0 = np.fft.fftn(g0.amp)
    K = g0.wavevectors()
    omegas = {s: dispersion(s, K, v, m) for s in schemes}
    t = dt * np.arange(steps + 1)
    dv = g0.dx**g0.dim
    out = DeviationSeries(t, schemes)
    for s in schemes:
        out.norms[s] = np.empty(steps + 1)
    for a, b in combinations(schemes, 2):
        out.deviations[(a, b)] = np.empty(steps + 1)
    for i, ti in enumerate(t):
        states = {s: np.fft.ifftn(spec0 * np.exp(-1j * omegas[s] * ti)) for s in schemes}
        for s in schemes:
            out.norms[s][i] = np.sqrt(np.sum(np.abs(states[s]) ** 2) * dv)
        for a, b in combinations(schemes, 2):
            out.deviations[(a, b)][i] = np.sqrt(np.sum(np.abs(states[a] - states[b]) ** 2) * dv)
    return out


def predicted_growth_rate(g0: GridState, a, b, v, m: float) -> float:
    """||g0|| times the |psi_k|^2-weighted mean of |w_a(k) - w_b(k)|."""
    K = g0.wavevectors()
    weight = np.abs(np.fft.fftn(g0.amp)) ** 2
    gap = np.abs(dispersion(a, K, v, m) - dispersion(b, K, v, m))
    return float(g0.norm() * np.sum(weight * gap) / np.sum(weight))


def fitted_growth_rate(t: np.ndarray, dev: np.ndarray) -> float:
    """Least-squares slope of dev(t) through the origin."""
    return float(np.dot(t, dev) / np.dot(t, t))


CSV_HEADER = ["t", "norm_traveling", "norm_ordinary", "norm_naive",
              "dev_trav_ord", "dev_trav_naive", "dev_ord_naive"]


def write_csv(series: DeviationSeries, path) -> None:
    T, O, N = Scheme.TRAVELING, Scheme.ORDINARY, Scheme.NAIVE_GALILEAN
    missing = {T, O, N} - set(series.schemes)
    if missing:
        raise ValueError("CSV output needs all three schemes")
    cols = [series.t, series.norms[T], series.norms[O], series.norms[N],
            series.deviation(T, O), series.deviation(T, N), series.deviation(O, N)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(*cols):
            w.writerow(["%.17g" % x for x in row])
