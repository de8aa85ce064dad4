"""Convergence-order sweeps, log-log slope fits and report aggregation."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import _json
from .algebra import BoostSpec, Mode
from .bw import boost_multispinor, product_plane_wave, traveling_bw_residual
from .em import plane_wave_potential
from .equations import (EquationId, ResidualReport, predicted_difference, residual_nr_dirac,
                        residual_nr_schrodinger_traveling, residual_traveling_dirac,
                        residual_two_component_traveling, residual_weyl_traveling,
                        small_component_deviation)
from .fields import (DEFAULT_PLAN, SamplePlan, big_component, boost_field, dirac_plane_wave,
                     gaussian_packet, massless_plane_wave, small_component_exact,
                     strip_rest_mass)
from .pauli import PauliParams, intermediate_minus_final, pauli_difference_norm

RESIDUAL_FLOOR = 1e-14
P_DIRECTION = (2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0)


def load_windows() -> dict:
    """Expected slope windows, keyed "equation/family"."""
    text = resources.files("twdirac").joinpath("slope_windows.json").read_text()
    return json.loads(text)


def fit_slope(xs, ys) -> tuple[float, float, float]:
    """Least squares fit of log y = slope log x + intercept; returns (slope, intercept, R^2)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2 or x.size != y.size:
        raise ValueError("need at least two (x, y) pairs")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("slope fit needs positive inputs")
    if np.unique(x).size != x.size:
        raise ValueError("x values must be distinct")
    lx, ly = np.log(x), np.log(y)
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    ss_res = float(np.sum((ly - A @ np.array([slope, intercept])) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


@dataclass
class SweepConfig:
    m: float = 1.0
    p_ratio: float = 0.5
    p_direction: tuple = P_DIRECTION
    mode: Mode = Mode.FIRST_ORDER
    plan: SamplePlan = DEFAULT_PLAN


@dataclass
class SweepResult:
    equation: str
    family: str
    direction: list
    eps: list
    residuals: list
    slope: float
    intercept: float
    r2: float
    window: list
    r2_min: float
    mode: str = "first-order"
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        lo, hi = self.window
        return bool(lo <= self.slope <= hi and self.r2 >= self.r2_min)

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "family": self.family,
            "direction": self.direction,
            "mode": self.mode,
            "params": self.params,
            "eps": self.eps,
            "residuals": self.residuals,
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "window": self.window,
            "r2_min": self.r2_min,
            "pass": self.passed,
        }


class SweepFloorError(ValueError):
    """A sweep point reached the rounding floor, so no order can be fitted."""


# --- manufactured problems per (equation, family) ----------------------------


def _dirac_boosted(eps, d, cfg):
    p = cfg.p_ratio * eps * cfg.m * np.asarray(cfg.p_direction)
    b = BoostSpec(tuple(eps * d))
    return boost_field(dirac_plane_wave(p, cfg.m), b), b


def _stripped_big(eps, d, cfg):
    f, b = _dirac_boosted(eps, d, cfg)
    stripped = strip_rest_mass(f, cfg.m)
    return big_component(stripped), small_component_exact(stripped), b


def _traveling_dirac(eps, d, cfg):
    f, b = _dirac_boosted(eps, d, cfg)
    return residual_traveling_dirac(f, cfg.m, b, cfg.mode, cfg.plan).relative


def _two_component(eps, d, cfg):
    f, b = _dirac_boosted(eps, d, cfg)
    return residual_two_component_traveling(f, cfg.m, b, cfg.plan).relative


def _weyl(chirality):
    def run(eps, d, cfg):
        b = BoostSpec(tuple(eps * d))
        f = boost_field(massless_plane_wave(np.asarray(cfg.p_direction), chirality), b)
        return residual_weyl_traveling(f, b, chirality, cfg.plan).relative

    return run


def _nr_dirac(eps, d, cfg):
    big, _, b = _stripped_big(eps, d, cfg)
    return residual_nr_dirac(big, cfg.m, b, cfg.plan).relative


def _nr_schrodinger(eps, d, cfg):
    big, _, b = _stripped_big(eps, d, cfg)
    return residual_nr_schrodinger_traveling(big, cfg.m, b, cfg.plan).relative


def _small(eps, d, cfg):
    big, small, b = _stripped_big(eps, d, cfg)
    return small_component_deviation(big, small, cfg.m, b, cfg.plan).relative


def _bw(eps, d, cfg):
    p = cfg.p_ratio * eps * cfg.m * np.asarray(cfg.p_direction)
    b = BoostSpec(tuple(eps * d))
    F = boost_multispinor(product_plane_wave(p, cfg.m), b)
    return traveling_bw_residual(F, cfg.m, b, cfg.mode, 0, cfg.plan).relative


def _rms(a: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.sum(np.abs(a) ** 2, axis=1))))


def _difference(pair, n):
    """Size of the registered (derived - naive) difference relative to the field."""

    def run(eps, d, cfg):
        b = BoostSpec(tuple(eps * d))
        f = gaussian_packet((0.3, -0.2, 0.4), 1.2, n)
        diff = predicted_difference(pair[0], pair[1], f, b, cfg.m, cfg.plan)
        return _rms(diff) / _rms(f.jet(cfg.plan.events()).val)

    return run


def _pauli_difference(eps, d, cfg):
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    A = plane_wave_potential()
    p = PauliParams(cfg.m, 0.7, BoostSpec(tuple(eps * d)))
    return pauli_difference_norm(f, A, p, cfg.plan)


def _pauli_intermediate(eps, d, cfg):
    f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
    # polarisation along the boost, propagation transverse to it
    e = np.eye(3)[int(np.argmin(np.abs(d)))]
    A = plane_wave_potential(pol=tuple(d), direction=tuple(np.cross(d, e)))
    p = PauliParams(cfg.m, 0.7, BoostSpec(tuple(eps * d)))
    return intermediate_minus_final(f, A, p, cfg.plan).relative


SWEEPS: dict[str, Callable] = {
    "traveling_dirac/planewave": _traveling_dirac,
    "two_component_traveling/planewave": _two_component,
    "weyl_traveling_left/planewave": _weyl("L"),
    "weyl_traveling_right/planewave": _weyl("R"),
    "nr_dirac/stripped-planewave": _nr_dirac,
    "nr_schrodinger_traveling/stripped-planewave": _nr_schrodinger,
    "small_component/stripped-planewave": _small,
    "traveling_bw/planewave": _bw,
    "operator_difference/schrodinger": _difference(
        ("nr_schrodinger_traveling", "naive_galilean_schrodinger"), 1),
    "operator_difference/weyl-left": _difference(
        ("weyl_traveling_left", "naive_galilean_weyl_left"), 2),
    "operator_difference/weyl-right": _difference(
        ("weyl_traveling_right", "naive_galilean_weyl_right"), 2),
    "operator_difference/pauli": _pauli_difference,
    "pauli_chain/intermediate-final": _pauli_intermediate,
}

DEFAULT_FAMILY = {
    "nr_dirac": "stripped-planewave",
    "nr_schrodinger_traveling": "stripped-planewave",
    "small_component": "stripped-planewave",
    "operator_difference": "schrodinger",
    "pauli_chain": "intermediate-final",
}


def sweep_key(equation, family=None) -> str:
    eq = EquationId.parse(equation).value
    fam = family or DEFAULT_FAMILY.get(eq, "planewave")
    key = f"{eq}/{fam}"
    if key not in SWEEPS:
        raise KeyError(f"no sweep registered for {key}")
    return key


def order_sweep(equation, family=None, direction=(0.0, 0.0, 1.0), eps_min: float = 1e-3,
                eps_max: float = 1e-1, points: int = 8, config: SweepConfig | None = None,
                windows: dict | None = None) -> SweepResult:
    """Residual versus eps on a geometric grid with beta = eps * direction."""
    if not 0 < eps_min < eps_max < 0.3:
        raise ValueError("need 0 < eps_min < eps_max < 0.3")
    if points < 4:
        raise ValueError("need at least 4 sweep points")
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or not np.linalg.norm(d) > 0:
        raise ValueError("direction must be a nonzero 3-vector")
    d = d / np.linalg.norm(d)
    key = sweep_key(equation, family)
    cfg = config or SweepConfig()
    entry = (windows or load_windows())[key]
    if "mode" in entry and config is None:
        cfg.mode = Mode(entry["mode"])
    eps = np.geomspace(eps_min, eps_max, points)
    res = []
    for e in eps:
        r = SWEEPS[key](float(e), d, cfg)
        if not r > RESIDUAL_FLOOR:
            raise SweepFloorError(f"residual floor reached at eps={e:.6g} (residual {r:.3g})")
        res.append(float(r))
    slope, intercept, r2 = fit_slope(eps, res)
    eq, fam = key.split("/")
    return SweepResult(eq, fam, [float(x) for x in d], [float(x) for x in eps], res, slope,
                       intercept, r2, list(entry["window"]), float(entry["r2_min"]),
                       Mode(cfg.mode).value,
                       {"m": cfg.m, "p_ratio": cfg.p_ratio,
                        "p_direction": list(cfg.p_direction)})


# --- aggregation ------------------------------------------------------------


def _slug(s: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]+", "-", s).strip("-") or "none"


def _row(r) -> dict:
    if isinstance(r, SweepResult):
        return {"equation": r.equation, "family": r.family, "beta": "-", "kind": "slope",
                "value": r.slope, "pass": r.passed}
    return {"equation": r.equation, "family": r.family, "beta": list(r.beta),
            "kind": "relative", "value": r.relative, "pass": r.passed}


def aggregate(reports, out_dir) -> dict:
    """Write one JSON per report plus summary.json and summary.md; returns the summary."""
    out = Path(out_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    rows = []
    for i, r in enumerate(reports):
        name = f"{_slug(r.equation)}__{_slug(r.family)}__{i:03d}.json"
        _json.dump(r.to_dict(), out / "reports" / name)
        rows.append(dict(_row(r), file=f"reports/{name}"))
    summary = {"pass": all(row["pass"] for row in rows), "count": len(rows), "rows": rows}
    _json.dump(summary, out / "summary.json")
    lines = ["| equation | family | beta | measure | value | pass |",
             "|---|---|---|---|---|---|"]
    for row in rows:
        beta = row["beta"] if row["beta"] == "-" else ",".join("%.6g" % x for x in row["beta"])
        lines.append(f"| {row['equation']} | {row['family']} | {beta} | {row['kind']} | "
                     f"{row['value']:.6g} | {'PASS' if row['pass'] else 'FAIL'} |")
    lines.append("")
    lines.append(f"Overall: {'PASS' if summary['pass'] else 'FAIL'} ({len(rows)} rows)")
    (out / "summary.md").write_text("\n".join(lines) + "\n")
    return summary


def load_reports(in_dir) -> list[dict]:
    """Report dictionaries from a directory written by :func:`aggregate` (sorted by name)."""
    folder = Path(in_dir)
    if (folder / "reports").is_dir():
        folder = folder / "reports"
    return [json.loads(p.read_text()) for p in sorted(folder.glob("*.json"))]


__all__ = ["ResidualReport", "SweepResult", "SweepConfig", "fit_slope", "order_sweep",
           "aggregate", "load_windows", "load_reports", "SweepFloorError"]
