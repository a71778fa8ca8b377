"""Command-line front end: ``centrefall <command> [flags]``.

Exit status is 0 on success, 1 for invalid input and 2 when the input is
valid but the requested quantity does not exist (imaginary falling time,
drive below the falling limit, unusable grid).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constants import (CODATA2018, NATURAL, builtin_particle, builtin_particles,
                        load_particles)
from .errors import CentreFallError, DomainError, ValidationError
from .experiment import (PRESETS, ScalingPlan, WireChamber, WireDrive,
                         chamber_falling_time, coupling_from_charge,
                         critical_charge, critical_voltage, proposal_report,
                         scaled_critical_voltage_factor)
from .moments import (Escapes, EvolutionCurve, FallsAt, MomentState,
                      classify_fate, curve_from_state, falling_time_symmetric,
                      normalized_curve)
from .tdse import GridSpec, default_grid, discretize, sweep
from .trial import (TrialState, critical_coupling, load_profile,
                    min_critical_coupling, quadrature_moments,
                    sample_trial_profile, trial_moments)

SCHEMA_VERSION = "1"
PRECISION_ENV = "CENTREFALL_PRECISION"
QUADRATURE_RTOL = 1e-12

# representative eps values for each sign of the energy
FIGURE1_EPS = (-2.0, -1.0, 0.0, 1.0)


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept "-1e-20" as a value, not an option
        self._negative_number_matcher = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _num(x: float) -> str:
    return f"{x:.9g}"


def _pretty(x: float) -> str:
    s = _num(x)
    return s if any(c in s for c in ".eEni") else s + ".0"


def _rtol(default: float) -> float:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{PRECISION_ENV}={raw!r} is not a number") from None
    if not 0 <= value < 1:
        raise ValidationError(f"{PRECISION_ENV} must lie in [0, 1)")
    return value


def _fate_dict(fate) -> dict:
    if isinstance(fate, FallsAt):
        return {"kind": "falls", "t_f": fate.t_f}
    if isinstance(fate, Escapes):
        return {"kind": "escapes", "t_f": None}
    return {"kind": "quasi-stationary", "t_f": None}


def _fate_line(fate) -> str:
    if isinstance(fate, FallsAt):
        return f"falls t_f={_pretty(fate.t_f)}"
    return "escapes" if isinstance(fate, Escapes) else "quasi-stationary"


def _emit_json(command: str, result: dict, out) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "result": result}
    out.write(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _emit_text(result: dict, out) -> None:
    for key in sorted(result):
        value = result[key]
        if isinstance(value, float):
            value = _num(value)
        out.write(f"{key}: {value}\n")


def _emit(args, command: str, result: dict, out) -> None:
    if args.format == "text":
        _emit_text(result, out)
    else:
        _emit_json(command, result, out)


def _header(out, args, **extra) -> None:
    if args.command == "figure1":
        units = "dimensionless"
    else:
        units = "natural (hbar = m = 1)" if getattr(args, "natural", False) else "SI"
    out.write(f"# centrefall {__version__} command={args.command} units={units}\n")
    for key, value in extra.items():
        out.write(f"# {key}={value}\n")


# -- shared flag groups ---------------------------------------------------------

def _add_units(p):
    p.add_argument("--natural", action="store_true",
                   help="use natural units hbar = m = 1 (mass must then be 1)")


def _add_state(p, energy_required=True):
    p.add_argument("--r2-0", type=float, required=True,
                   help="initial <r^2> [m^2, or natural length^2]")
    p.add_argument("--d0", type=float, default=0.0,
                   help="initial <rp+pr> [kg m^2/s, or hbar] (default 0)")
    p.add_argument("--energy", type=float, required=energy_required,
                   help="conserved <H> [J, or natural energy]")
    p.add_argument("--mass", type=float, default=None,
                   help="particle mass [kg]; defaults to 1 with --natural")
    _add_units(p)


def _add_chamber(p):
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named chamber geometry (dus: r1 = 0.7 um, r2 = 4.2 mm, "
                        "length = 0.1 m)")
    p.add_argument("--r1", type=float, help="wire radius [m]")
    p.add_argument("--r2", type=float, help="outer cylinder radius [m]")
    p.add_argument("--length", type=float, default=0.1,
                   help="chamber length [m] (default 0.1)")


def _add_atoms(p, multiple=False):
    if multiple:
        p.add_argument("--atoms", default="H1,He3",
                       help="comma-separated atom names (default H1,He3); "
                            "built-ins Li7, H1, He3")
    else:
        p.add_argument("--atom", default="Li7",
                       help="atom name (built-ins Li7, H1, He3; default Li7)")
    p.add_argument("--atoms-file", type=Path,
                   help="key=value file with extra atoms "
                        "(name, mass_u [u], alpha_A3 [A^3])")


def _add_trial(p):
    p.add_argument("--s", type=float, default=1.0,
                   help="trial exponent s [dimensionless] (default 1)")
    p.add_argument("--beta", type=float, default=1.0,
                   help="Gaussian width parameter beta [1/m^2, or natural] "
                        "(default 1)")
    p.add_argument("--lz", type=int, default=0,
                   help="angular momentum l_z [hbar] (default 0)")


def _mass(args) -> float:
    if args.natural:
        if args.mass not in (None, 1.0):
            raise ValidationError("--natural fixes mass = 1")
        return 1.0
    if args.mass is None:
        raise ValidationError("--mass [kg] is required without --natural")
    return args.mass


def _hbar(args) -> float:
    return NATURAL.hbar if args.natural else CODATA2018.hbar


def _chamber(args) -> WireChamber:
    if args.preset:
        if args.r1 is not None or args.r2 is not None:
            raise ValidationError("use either --preset or --r1/--r2")
        return PRESETS[args.preset]
    if args.r1 is None or args.r2 is None:
        raise ValidationError("give --preset or both --r1 and --r2 [m]")
    return WireChamber(args.r1, args.r2, args.length)


def _particle(name: str, extra_file):
    pool = builtin_particles()
    if extra_file is not None:
        pool.update({p.name: p for p in load_particles(extra_file)})
    try:
        return pool[name]
    except KeyError:
        raise ValidationError(f"unknown atom {name!r}; known: {', '.join(sorted(pool))}") from None


def _state(args) -> MomentState:
    return MomentState(args.r2_0, args.d0, args.energy, _mass(args))


# -- commands -----------------------------------------------------------------

def cmd_evolve(args, out):
    state = _state(args)
    if not args.t_max > 0 or args.samples < 2:
        raise ValidationError("--t-max must be > 0 and --samples >= 2")
    curve = curve_from_state(state)
    fate = classify_fate(curve, _rtol(0.0))
    t = np.linspace(0.0, args.t_max, args.samples)
    r2 = curve(t)
    t_end = fate.t_f if isinstance(fate, FallsAt) else math.inf
    if args.format == "json":
        _emit_json("evolve", {"a": curve.a, "b": curve.b, "c": curve.c,
                              "fate": _fate_dict(fate)}, out)
        return 0
    _header(out, args, curve=f"{_num(curve.a)} + {_num(curve.b)} t + {_num(curve.c)} t^2")
    out.write("t,r2,physical\n")
    for ti, yi in zip(t, r2):
        out.write(f"{_num(ti)},{_num(yi)},{int(ti <= t_end)}\n")
    out.write(f"# {_fate_line(fate)}\n")
    return 0


def cmd_fate(args, out):
    state = _state(args)
    fate = classify_fate(curve_from_state(state), _rtol(0.0))
    result = _fate_dict(fate)
    try:
        nc = normalized_curve(state)
        result.update(t0=nc.t0, eps=nc.eps, quad_sign=nc.quad_sign)
    except DomainError:
        result.update(t0=None, eps=None, quad_sign=0)
    if args.format == "csv":
        _header(out, args)
        out.write("kind,t_f\n")
        out.write(f"{result['kind']},{'' if result['t_f'] is None else _num(result['t_f'])}\n")
        return 0
    _emit(args, "fate", result, out)
    return 0


def cmd_fall_time(args, out):
    t_f = falling_time_symmetric(args.r2_0, args.energy, _mass(args))
    if args.format == "csv":
        _header(out, args)
        out.write(f"t_f\n{_num(t_f)}\n")
        return 0
    _emit(args, "fall-time", {"t_f": t_f}, out)
    return 0


def _moment_dict(ms) -> dict:
    return {"r2": ms.r2, "inv_r2": ms.inv_r2, "kinetic": ms.kinetic,
            "energy": ms.energy, "d": ms.d, "gamma": ms.gamma,
            "gamma_c": critical_coupling(ms), "warnings": list(ms.warnings)}


def cmd_trial(args, out):
    mass, hbar = _mass(args), _hbar(args)
    if args.profile is not None:
        ms = quadrature_moments(load_profile(args.profile, args.lz),
                                args.gamma, mass, hbar)
        source = "quadrature"
    else:
        ts = TrialState(args.s, args.beta, args.lz)
        if args.quadrature:
            ms = quadrature_moments(sample_trial_profile(ts), args.gamma, mass, hbar)
            source = "quadrature"
        else:
            ms = trial_moments(ts, args.gamma, mass, hbar)
            source = "closed-form"
    result = _moment_dict(ms)
    result["source"] = source
    state = MomentState(ms.r2, ms.d, ms.energy, mass)
    rtol = _rtol(QUADRATURE_RTOL if source == "quadrature" else 0.0)
    result["fate"] = _fate_dict(classify_fate(curve_from_state(state), rtol))
    if args.format == "csv":
        _header(out, args, source=source)
        keys = ["r2", "inv_r2", "kinetic", "energy", "d", "gamma_c"]
        out.write(",".join(keys) + "\n")
        out.write(",".join(_num(result[k]) for k in keys) + "\n")
        return 0
    _emit(args, "trial", result, out)
    return 0


def cmd_critical(args, out):
    if args.natural:
        mass, hbar = 1.0, 1.0
        result = {"Gamma_c": min_critical_coupling(mass, hbar)}
        ts = TrialState(args.s, args.beta, args.lz)
        ms = trial_moments(ts, 0.0, mass, hbar)
        result["gamma_c"] = critical_coupling(ms)
        result["ratio"] = result["gamma_c"] / result["Gamma_c"]
    else:
        particle = _particle(args.atom, args.atoms_file)
        result = {"atom": particle.name,
                  "Gamma_c": min_critical_coupling(particle.mass),
                  "q_c_pC_per_m": critical_charge(particle) * 1e12}
        if args.preset or args.r1 is not None:
            result["U_c_V"] = critical_voltage(particle, _chamber(args))
    if args.format == "csv":
        _header(out, args)
        keys = sorted(k for k in result if k != "atom")
        out.write(",".join(keys) + "\n")
        out.write(",".join(_num(result[k]) for k in keys) + "\n")
        return 0
    _emit(args, "critical", result, out)
    return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_propagate(args, out):
    mass, hbar = _mass(args), _hbar(args)
    ts = TrialState(args.s, args.beta, args.lz)
    gamma_c = critical_coupling(trial_moments(ts, 0.0, mass, hbar))
    if args.gamma_ratio is not None:
        gammas = [g * gamma_c for g in _float_list(args.gamma_ratio)]
    else:
        gammas = _float_list(args.gamma)
    if not gammas:
        raise ValidationError("no coupling given")
    base = default_grid(args.beta, mass, hbar)
    spec = GridSpec(args.n or base.n, args.r_max or base.r_max, args.dt or base.dt)
    t_max = args.t_max if args.t_max is not None else mass / (hbar * args.beta)
    states = [discretize(ts, spec, g, mass, hbar) for g in gammas]
    results = sweep(states, t_max, args.record_every, args.workers)
    summary = []
    for g, (traj, dev) in zip(gammas, results):
        traj.meta.update(s=_num(args.s), beta=_num(args.beta))
        summary.append({"gamma": g, "gamma_over_critical": g / gamma_c,
                        "t_valid": traj.t_valid, "max_rel_dev": dev,
                        "norm_drift": float(np.max(np.abs(traj.norm - traj.norm[0]))),
                        "energy": float(traj.energy[0])})
    if args.format == "json":
        _emit_json("propagate", {"grid": {"n": spec.n, "r_max": spec.r_max,
                                          "dt": spec.dt}, "t_max": t_max,
                                 "runs": summary}, out)
        return 0
    if args.format == "text":
        for row in summary:
            _emit_text(row, out)
            out.write("\n")
        return 0
    _header(out, args)
    for traj, _ in results:
        traj.to_csv(out)
    return 0


def _wire_drive(args) -> WireDrive:
    if (args.voltage is None) == (args.charge is None):
        raise ValidationError("give exactly one of --voltage [V] or --charge [pC/m]")
    if args.voltage is not None:
        return WireDrive(voltage=args.voltage)
    return WireDrive(line_charge=args.charge * 1e-12)


def cmd_wire(args, out):
    particle = _particle(args.atom, args.atoms_file)
    chamber = _chamber(args)
    drive = _wire_drive(args)
    est = chamber_falling_time(particle, chamber, drive, args.s)
    result = {"atom": particle.name, "gamma": est.gamma,
              "line_charge_pC_per_m": est.line_charge * 1e12,
              "voltage_V": est.voltage, "energy": est.energy,
              "r2_0": est.r2_0, "s": est.s, "t_f": est.t_f,
              "U_c_V": est.critical_voltage,
              "q_c_pC_per_m": critical_charge(particle) * 1e12}
    if args.format == "csv":
        _header(out, args)
        keys = sorted(k for k in result if k != "atom")
        out.write(",".join(keys) + "\n")
        out.write(",".join(_num(result[k]) for k in keys) + "\n")
        return 0
    _emit(args, "wire", result, out)
    return 0


def cmd_scale(args, out):
    chamber = _chamber(args)
    plan = ScalingPlan(args.lambda1, args.lambda2)
    factor = scaled_critical_voltage_factor(chamber, plan)
    particles = []
    if args.atoms:
        particles = [_particle(n.strip(), args.atoms_file)
                     for n in args.atoms.split(",") if n.strip()]
    report = proposal_report(particles, chamber, plan)
    if args.format == "text":
        out.write(report.to_text() + "\n")
        return 0
    if args.format == "csv":
        _header(out, args, factor=_num(factor))
        out.write("particle,q_c_pC_per_m,U_c_V,U_c_scaled_V,ratio_vs_Li\n")
        for r in report.rows:
            out.write(f"{r.particle},{_num(r.q_c_pC_per_m)},{_num(r.U_c_V)},"
                      f"{_num(r.U_c_scaled_V)},{_num(r.ratio_vs_Li)}\n")
        return 0
    _emit_json("scale", {"factor": factor, "lambda1": plan.lambda1,
                         "lambda2": plan.lambda2,
                         "baseline_U_c_V": report.baseline_U_c,
                         "rows": report.as_dicts()}, out)
    return 0


def _figure1_cases(args) -> list[tuple[str, int, float]]:
    """(label, sign of H, eps) for each requested curve."""
    if args.case:
        cases = []
        for item in args.case:
            try:
                kind, eps = item.split(":")
                sign = {"neg": -1, "pos": 1, "zero": 0}[kind]
                eps = float(eps)
            except (ValueError, KeyError):
                raise ValidationError(f"bad --case {item!r}; use neg:EPS, pos:EPS "
                                      "or zero:SIGN") from None
            if sign == 0:
                eps = math.copysign(1.0, eps) if eps != 0 else 0.0
            cases.append((item, sign, eps))
        return cases
    eps_list = _float_list(args.eps) if args.eps else list(FIGURE1_EPS)
    cases = [(f"neg:{_num(e)}", -1, e) for e in eps_list]
    cases += [(f"pos:{_num(e)}", 1, e) for e in eps_list]
    cases += [("zero:+1", 0, 1.0), ("zero:-1", 0, -1.0)]
    return cases


def cmd_figure1(args, out):
    if args.samples < 2 or not args.tau_max > 0:
        raise ValidationError("--samples must be >= 2 and --tau-max > 0")
    tau = np.linspace(0.0, args.tau_max, args.samples)
    columns, meta = [], []
    for label, sign, eps in _figure1_cases(args):
        # the H = d = 0 line has no time unit; it is drawn as y = 1
        fate = classify_fate(EvolutionCurve(1.0, eps, float(sign)))
        t_end = fate.t_f if isinstance(fate, FallsAt) else math.inf
        columns.append((label, 1.0 + eps * tau + sign * tau * tau, tau <= t_end))
        meta.append(f"{label}={_fate_line(fate).replace(' ', '@')}")
    _header(out, args, cases=" ".join(meta),
            note="eps values are a representative set")
    out.write("tau," + ",".join(f"y[{c[0]}],solid[{c[0]}]" for c in columns) + "\n")
    for i, ti in enumerate(tau):
        cells = [_num(ti)]
        for _, y, solid in columns:
            cells += [_num(y[i]), str(int(solid[i]))]
        out.write(",".join(cells) + "\n")
    return 0


def cmd_constants(args, out):
    result = {"hbar": CODATA2018.hbar, "eps0": CODATA2018.eps0,
              "amu": CODATA2018.amu,
              "particles": {n: {"mass": p.mass, "alpha_vol": p.alpha_vol}
                            for n, p in builtin_particles().items()}}
    if args.format == "csv":
        _header(out, args)
        out.write("name,mass_kg,alpha_vol_m3\n")
        for n, p in builtin_particles().items():
            out.write(f"{n},{_num(p.mass)},{_num(p.alpha_vol)}\n")
        return 0
    if args.format == "text":
        out.write(f"hbar: {_num(CODATA2018.hbar)} J s\neps0: {_num(CODATA2018.eps0)} F/m\n"
                  f"amu: {_num(CODATA2018.amu)} kg\n")
        for n, p in builtin_particles().items():
            out.write(f"{n}: mass {_num(p.mass)} kg, alpha {_num(p.alpha_vol)} m^3\n")
        return 0
    _emit_json("constants", result, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="centrefall",
                     description="Fall of a quantum particle into an attractive "
                                 "inverse-square potential.")
    parser.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "text"),
                        help="output format (default depends on the command)")
    common.add_argument("--config", type=Path,
                        help="key=value file supplying default flag values")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evolve", parents=[common],
                       help="tabulate <r^2>(t) and report the fate")
    _add_state(p)
    p.add_argument("--t-max", type=float, required=True, help="final time [s, or natural]")
    p.add_argument("--samples", type=int, default=101,
                   help="number of time samples [count]")
    p.set_defaults(func=cmd_evolve, default_format="csv")

    p = sub.add_parser("fate", parents=[common], help="classify falling/escape")
    _add_state(p)
    p.set_defaults(func=cmd_fate, default_format="json")

    p = sub.add_parser("fall-time", parents=[common],
                       help="falling time of a state with <rp+pr>_0 = 0")
    p.add_argument("--r2-0", type=float, required=True, help="initial <r^2> [m^2]")
    p.add_argument("--energy", type=float, required=True, help="<H> [J], must be < 0")
    p.add_argument("--mass", type=float, default=None, help="mass [kg]")
    _add_units(p)
    p.set_defaults(func=cmd_fall_time, default_format="json")

    p = sub.add_parser("trial", parents=[common], help="moments of a trial state")
    _add_trial(p)
    p.add_argument("--gamma", type=float, default=0.0, help="coupling [J m^2]")
    p.add_argument("--mass", type=float, default=None, help="mass [kg]")
    p.add_argument("--quadrature", action="store_true",
                   help="integrate a sampled profile instead of the closed form")
    p.add_argument("--profile", type=Path,
                   help="two-column file r [m], R(r) [1/m] with a header line")
    _add_units(p)
    p.set_defaults(func=cmd_trial, default_format="json")

    p = sub.add_parser("critical", parents=[common],
                       help="critical coupling, charge and voltage")
    _add_atoms(p)
    _add_chamber(p)
    _add_trial(p)
    _add_units(p)
    p.set_defaults(func=cmd_critical, default_format="json")

    p = sub.add_parser("propagate", parents=[common],
                       help="grid propagation checked against the exact law")
    _add_trial(p)
    p.add_argument("--gamma", default="0", help="comma-separated couplings [J m^2]")
    p.add_argument("--gamma-ratio",
                   help="comma-separated couplings in units of the state's "
                        "critical coupling [dimensionless]")
    p.add_argument("--mass", type=float, default=None, help="mass [kg]")
    p.add_argument("--n", type=int, help="grid cells [count] (default 4096)")
    p.add_argument("--r-max", type=float, help="grid radius [m] (default 12/sqrt(beta))")
    p.add_argument("--dt", type=float, help="time step [s] (default 1e-3 m/(hbar beta))")
    p.add_argument("--t-max", type=float, help="final time [s] (default m/(hbar beta))")
    p.add_argument("--record-every", type=int, default=10,
                   help="record observables every k steps [steps]")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel trajectories [count]")
    _add_units(p)
    p.set_defaults(func=cmd_propagate, default_format="csv")

    p = sub.add_parser("wire", parents=[common],
                       help="falling time of atoms around a charged wire")
    _add_atoms(p)
    _add_chamber(p)
    p.add_argument("--voltage", type=float, help="wire voltage [V]")
    p.add_argument("--charge", type=float, help="line charge [pC/m]")
    p.add_argument("--s", type=float, default=0.5,
                   help="trial exponent of the atom cloud [dimensionless] (default 0.5)")
    p.set_defaults(func=cmd_wire, default_format="json")

    p = sub.add_parser("scale", parents=[common],
                       help="critical voltage gain from rescaling the chamber")
    _add_chamber(p)
    p.add_argument("--lambda1", type=float, default=1.0,
                   help="wire radius scale factor [dimensionless]")
    p.add_argument("--lambda2", type=float, default=1.0,
                   help="chamber radius scale factor [dimensionless]")
    _add_atoms(p, multiple=True)
    p.set_defaults(func=cmd_scale, default_format="json")

    p = sub.add_parser("figure1", parents=[common],
                       help="dimensionless <r^2> curves y(tau)")
    p.add_argument("--eps", help="comma-separated eps values [dimensionless] "
                                 "(default -2,-1,0,1)")
    p.add_argument("--case", action="append",
                   help="explicit curve neg:EPS, pos:EPS or zero:SIGN "
                        "[dimensionless] (repeatable)")
    p.add_argument("--samples", type=int, default=201,
                   help="number of tau samples [count]")
    p.add_argument("--tau-max", type=float, default=3.0,
                   help="largest tau [units of t0] (default 3)")
    p.set_defaults(func=cmd_figure1, default_format="csv")

    p = sub.add_parser("constants", parents=[common],
                       help="physical constants and built-in atoms")
    p.set_defaults(func=cmd_constants, default_format="text")
    return parser


def _config_argv(argv: list[str]) -> list[str]:
    """Splice ``--config`` key=value pairs in front of the explicit flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValidationError("--config needs a file name")
    path = Path(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    extra = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            extra.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            extra += [flag, value]
    # the command name must stay first
    return rest[:1] + extra + rest[1:]


def run(argv=None, stdout=None, stderr=None) -> int:
    """Entry point returning the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(_config_argv(argv))
        if args.format is None:
            args.format = args.default_format
        return args.func(args, out)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (ValidationError, CentreFallError, KeyError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
