"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a tolerance or window failure,
2 on usage or validation errors (one line on stderr starting with "error:").
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import _json
from .algebra import BoostSpec, Mode, identity_suite
from .bw import MultiSpinorField, boost_multispinor, product_plane_wave, traveling_bw_residual
from .em import check_amu_identities, potential_family
from .equations import (EquationId, operator_difference, residual_dirac,
                        residual_massive_two_component_traveling, residual_naive_galilean_schrodinger,
                        residual_naive_galilean_weyl, residual_nr_dirac,
                        residual_nr_schrodinger_traveling, residual_traveling_dirac,
                        residual_two_component_traveling, residual_weyl_traveling,
                        small_component_deviation)
from .evolution import Scheme, compare_runs, gaussian_state, write_csv
from .fields import (SamplePlan, PlaneWave, big_component, boost_field, dirac_plane_wave,
                     gaussian_packet, massless_plane_wave, seeded_boosts, seeded_vectors,
                     small_component_exact, strip_rest_mass)
from .harness import SweepFloorError, aggregate, load_reports, order_sweep
from .pauli import PauliParams, residual_pauli, residual_traveling_pauli


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _vec(text: str) -> tuple[float, float, float]:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a 3-vector: {text!r}") from None
    if len(parts) != 3 or not all(np.isfinite(parts)):
        raise argparse.ArgumentTypeError(f"not a finite 3-vector: {text!r}")
    return tuple(parts)


def _pos(text: str) -> float:
    x = float(text)
    if not x > 0 or not np.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return x


def _emit(obj, out) -> None:
    text = _json.dumps(obj)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------


def cmd_algebra_selftest(args) -> int:
    boosts = seeded_boosts(args.count, 0.9, args.seed)
    checks = identity_suite(boosts, seeded_vectors(args.count, args.seed + 1))
    result = {"tolerance": args.tol, "boosts": args.count, "checks": checks,
              "pass": all(v <= args.tol for v in checks.values())}
    _emit(result, args.out)
    return 0 if result["pass"] else 1


_TWO = {EquationId.WEYL_TRAVELING_LEFT, EquationId.WEYL_TRAVELING_RIGHT,
        EquationId.NAIVE_GALILEAN_WEYL_LEFT, EquationId.NAIVE_GALILEAN_WEYL_RIGHT}
_NR = {EquationId.NR_DIRAC, EquationId.NR_SCHRODINGER_TRAVELING,
       EquationId.NAIVE_GALILEAN_SCHRODINGER, EquationId.SMALL_COMPONENT}


def _chirality(eq: EquationId) -> str:
    return "L" if eq.value.endswith("left") else "R"


def _verify_report(args):
    eq = EquationId.parse(args.equation)
    b = BoostSpec(args.beta)
    m, p, fam = args.m, np.asarray(args.p), args.family
    plan = SamplePlan(extra=args.samples, seed=args.seed)
    kw = {"plan": plan}
    if args.tol is not None:
        kw["tol"] = args.tol

    def four():
        if fam == "gaussian":
            return gaussian_packet((0.3, -0.2, 0.4), 1.2, 4)
        return dirac_plane_wave(p, m)

    if eq is EquationId.DIRAC:
        return residual_dirac(four(), m, **kw)
    if eq is EquationId.TRAVELING_DIRAC:
        return residual_traveling_dirac(boost_field(four(), b), m, b, args.mode, **kw)
    if eq is EquationId.TWO_COMPONENT_TRAVELING:
        return residual_two_component_traveling(boost_field(four(), b), m, b, **kw)
    if eq is EquationId.MASSIVE_TWO_COMPONENT_TRAVELING:
        return residual_massive_two_component_traveling(boost_field(four(), b), m, b, **kw)
    if eq in _TWO:
        if fam == "gaussian":
            f = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
        else:
            if not np.linalg.norm(p) > 0:
                raise UsageError("massless plane waves need a nonzero --p")
            f = boost_field(massless_plane_wave(p, _chirality(eq)), b)
        fn = residual_weyl_traveling if eq.value.startswith("weyl") else residual_naive_galilean_weyl
        return fn(f, b, _chirality(eq), **kw)
    if eq in _NR:
        if fam == "gaussian":
            big = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
            if eq is EquationId.SMALL_COMPONENT:
                raise UsageError("small_component needs --family planewave or stripped-planewave")
        else:
            stripped = strip_rest_mass(boost_field(dirac_plane_wave(p, m), b), m)
            big = big_component(stripped)
        if eq is EquationId.NR_DIRAC:
            return residual_nr_dirac(big, m, b, **kw)
        if eq is EquationId.NR_SCHRODINGER_TRAVELING:
            return residual_nr_schrodinger_traveling(big, m, b, **kw)
        if eq is EquationId.NAIVE_GALILEAN_SCHRODINGER:
            return residual_naive_galilean_schrodinger(big, m, b, **kw)
        return small_component_deviation(big, small_component_exact(stripped), m, b, **kw)
    if eq in (EquationId.PAULI, EquationId.TRAVELING_PAULI):
        if fam == "gaussian":
            psi = gaussian_packet((0.3, -0.2, 0.4), 1.2, 2)
        else:
            kl = np.concatenate([[p @ p / (2 * m)], -p])
            psi = PlaneWave(np.array([1.0, 0.0], complex), kl, family=fam)
        A = potential_family("plane")
        params = PauliParams(m, args.q, b)
        fn = residual_pauli if eq is EquationId.PAULI else residual_traveling_pauli
        return fn(psi, A, params, **kw)
    raise UsageError(f"equation {eq.value!r} is not available in verify")


def cmd_verify(args) -> int:
    report = _verify_report(args)
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_sweep(args) -> int:
    try:
        res = order_sweep(args.equation, args.family, args.direction, args.eps_min,
                          args.eps_max, args.points)
    except SweepFloorError as exc:
        raise UsageError(str(exc)) from None
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    _emit(res.to_dict(), args.out)
    return 0 if res.passed else 1


def cmd_evolve(args) -> int:
    BoostSpec(args.beta)
    if args.steps < 0:
        raise UsageError("steps must be >= 0")
    schemes = [Scheme.parse(s) for s in args.schemes.split(",")]
    g0 = gaussian_state(args.dim, args.n, args.box, args.k0, args.width)
    series = compare_runs(g0, schemes, args.beta, args.m, args.dt, args.steps)
    write_csv(series, args.out)
    drift = max(float(np.abs(series.norms[s] - series.norms[s][0]).max()) for s in schemes)
    return 0 if drift <= 1e-12 else 1


def cmd_em_check(args) -> int:
    report = check_amu_identities(potential_family(args.potential), BoostSpec(args.beta),
                                  derivatives=args.derivatives)
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_bw_verify(args) -> int:
    b = BoostSpec(args.beta)
    if args.spin == "0.5":
        F = MultiSpinorField(dirac_plane_wave(args.p, args.m), 1)
    else:
        F = product_plane_wave(args.p, args.m)
    Ft = boost_multispinor(F, b)
    reports = [traveling_bw_residual(Ft, args.m, b, args.mode, k, tol=args.tol)
               for k in range(F.rank)]
    ok = all(r.passed for r in reports)
    _emit({"spin": float(args.spin), "pass": ok, "reports": [r.to_dict() for r in reports]},
          args.out)
    return 0 if ok else 1


def cmd_report(args) -> int:
    folder = Path(args.input)
    if not folder.is_dir():
        raise UsageError(f"input directory not found: {folder}")
    reports = load_reports(folder)
    rows = [{"equation": r.get("equation"), "family": r.get("family"),
             "value": r.get("relative", r.get("slope")), "pass": bool(r.get("pass"))}
            for r in reports]
    summary = {"pass": all(r["pass"] for r in rows), "count": len(rows), "rows": rows}
    _emit(summary, args.out)
    return 0 if summary["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twdirac", description=__doc__.splitlines()[0])
    parser.add_argument("--units", choices=["natural"], default="natural")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("algebra-selftest")
    p.add_argument("--tol", type=_pos, default=1e-12)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra_selftest)

    p = sub.add_parser("verify")
    p.add_argument("--equation", default="traveling_dirac")
    p.add_argument("--family", choices=["planewave", "gaussian", "stripped-planewave"],
                   default="planewave")
    p.add_argument("--beta", type=_vec, default=(0.0, 0.0, 0.1))
    p.add_argument("--p", type=_vec, default=(0.0, 0.0, 0.05))
    p.add_argument("--m", type=_pos, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    p.add_argument("--samples", type=int, default=125)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--tol", type=_pos)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep")
    p.add_argument("--equation", required=True)
    p.add_argument("--family")
    p.add_argument("--direction", type=_vec, default=(0.0, 0.0, 1.0))
    p.add_argument("--eps-min", type=_pos, default=1e-3)
    p.add_argument("--eps-max", type=_pos, default=1e-1)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("evolve")
    p.add_argument("--dim", type=int, choices=[1, 3], default=1)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--box", type=_pos, default=400.0)
    p.add_argument("--beta", type=_vec, default=(0.0, 0.0, 0.05))
    p.add_argument("--m", type=_pos, default=1.0)
    p.add_argument("--k0", type=_vec, default=(0.0, 0.0, 0.5))
    p.add_argument("--width", type=_pos, default=10.0)
    p.add_argument("--dt", type=_pos, default=0.05)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--schemes", default="traveling,ordinary,naive_galilean")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("em-check")
    p.add_argument("--beta", type=_vec, default=(0.0, 0.0, 0.05))
    p.add_argument("--potential", choices=["constant", "plane", "linear"], default="plane")
    p.add_argument("--derivatives", choices=["old", "new"], default="old")
    p.add_argument("--out")
    p.set_defaults(func=cmd_em_check)

    p = sub.add_parser("bw-verify")
    p.add_argument("--spin", choices=["0.5", "1"], default="1")
    p.add_argument("--beta", type=_vec, default=(0.0, 0.0, 0.1))
    p.add_argument("--p", type=_vec, default=(0.0, 0.0, 0.05))
    p.add_argument("--m", type=_pos, default=1.0)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    p.add_argument("--tol", type=_pos, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bw_verify)

    p = sub.add_parser("report")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ValueError, KeyError, IndexError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
