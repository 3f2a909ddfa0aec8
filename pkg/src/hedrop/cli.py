"""Command-line front end.

Exit codes: 0 success, 2 data error, 64 usage error, 65 validation error,
70 internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import evap, mechloss, modes, optics, rotation
from .config import ConfigError, load_config
from .constants import HBAR, TWO_PI
from .errors import (ConstraintViolation, IntegrationError, OutOfRangeError, SteadyStateError, TableParseError,
                     UnsupportedRegimeError)
from .heprops import Isotope, latent_heat, load_isotope, specific_heat, vapor_pressure, viscosity_he3

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 64, 65, 70
DEFAULT_T0 = {Isotope.HE4: 4.0, Isotope.HE3: 2.5}
FIG3_RADII = np.logspace(np.log10(0.05e-3), np.log10(5e-3), 41)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    """Full-precision number formatting (round-trips exactly)."""
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Isotope):
        return obj.value
    return obj


def dump_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def dump_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def _records(cfg, header, rows):
    if cfg.format == "json":
        return dump_json([dict(zip(header, r)) for r in rows])
    return dump_csv(header, rows)


def _drop(cfg, temperature=None):
    iso = load_isotope(cfg.isotope, cfg.data_dir)
    return modes.Drop(iso, cfg.radius, cfg.temperature if temperature is None else temperature)


# ---------------------------------------------------------------- subcommands

def cmd_props(cfg, args):
    drop = _drop(cfg)
    iso, T = drop.iso, drop.temperature
    rows = [
        ("density", iso.density, "kg/m^3"),
        ("surface_tension", iso.surface_tension, "N/m"),
        ("sound_speed", iso.sound_speed, "m/s"),
        ("dielectric", iso.dielectric, ""),
        ("atomic_mass", iso.atomic_mass, "kg"),
        ("binding_energy", iso.binding_energy, "J"),
        ("vapor_pressure", vapor_pressure(iso, T), "Pa"),
        ("latent_heat", latent_heat(iso, T), "J/atom"),
        ("specific_heat_per_atom", specific_heat(iso, 1.0, T), "J/(K atom)"),
        ("atom_count", drop.atom_count, "atoms"),
        ("heat_capacity", specific_heat(iso, drop.atom_count, T), "J/K"),
    ]
    if iso.isotope is Isotope.HE3:
        try:
            rows.append(("viscosity", viscosity_he3(T), "Pa s"))
        except UnsupportedRegimeError:
            pass
    if cfg.format == "json":
        return dump_json({"isotope": iso.isotope, "temperature_K": T,
                          "properties": {k: {"value": v, "units": u} for k, v, u in rows}})
    return dump_csv(("quantity", "value", "units"), rows)


def cmd_spectrum(cfg, args):
    drop = _drop(cfg)
    rows = [(b, n, l, w, w / TWO_PI) for b, n, l, w in modes.spectrum(drop, args.l_max, args.n_max)]
    return _records(cfg, ("branch", "n", "l", "omega_rad_s", "f_Hz"), rows)


def cmd_couplings(cfg, args):
    drop = _drop(cfg)
    wgm = optics.WgmMode.equatorial(drop, cfg.wavelength)
    x_zpf, dr_zpf = modes.zpf_amplitude(drop)
    g0 = optics.coupling_g0(drop, wgm)
    split = optics.wgm_splitting(drop, wgm.l, args.distortion * drop.radius, cfg.wavelength)
    omega_vib = modes.surface_mode_frequency(drop, 2)
    report = {
        "l_tilde": wgm.l, "x_zpf_m": x_zpf, "delta_r_zpf_m": dr_zpf,
        "g0_rad_s": g0, "g0_Hz": g0 / TWO_PI, "omega_vib_rad_s": omega_vib, "omega_vib_Hz": omega_vib / TWO_PI,
        "g0_exceeds_omega_vib": bool(g0 > omega_vib),
        "splitting": {"distortion": args.distortion, "bandwidth_rad_s": split.bandwidth,
                      "bandwidth_Hz": split.bandwidth_hz, "fsr_rad_s": split.fsr, "fsr_Hz": split.fsr_hz,
                      "bandwidth_over_fsr": split.bandwidth / split.fsr},
    }
    if args.m_tilde is not None:
        l = args.l_tilde if args.l_tilde is not None else wgm.l
        mode = optics.WgmMode(l=l, m=args.m_tilde, n=1, wavelength=cfg.wavelength)
        g = optics.coupling_general(drop, mode)
        report["general"] = {"l_tilde": l, "m_tilde": args.m_tilde, "g_rad_s": g, "g_Hz": g / TWO_PI}
    if cfg.format == "json":
        return dump_json(report)
    flat = [(k, v) for k, v in report.items() if not isinstance(v, dict)]
    flat += [(f"splitting.{k}", v) for k, v in report["splitting"].items()]
    flat += [(f"general.{k}", v) for k, v in report.get("general", {}).items()]
    return dump_csv(("quantity", "value"), flat)


def _qfactor_report(drop, wavelength):
    budget = optics.q_total(drop, wavelength)
    mech = mechloss.classify_regime(drop)
    return {
        "q_surface": budget.q_surface,
        "q_surface_quadrature": optics.q_surface_scattering(drop, wavelength, "quadrature"),
        "q_radiative": budget.q_radiative,
        "q_bulk_floor": budget.q_bulk_floor,
        "q_total": budget.q_total,
        "dominant_optical_channel": budget.dominant,
        "mech_regime": mech.regime.value,
        "q_mech": mech.q_mech,
        "q_mech_is_bound": mech.is_bound,
        "mech_dominant_channel": mech.dominant_channel,
        "phonon_mean_free_path_m": mech.mean_free_path,
    }


def cmd_qfactors(cfg, args):
    report = _qfactor_report(_drop(cfg), cfg.wavelength)
    if cfg.format == "json":
        return dump_json(report)
    return dump_csv(("quantity", "value"), list(report.items()))


def cmd_cool(cfg, args):
    iso = load_isotope(cfg.isotope, cfg.data_dir)
    T0 = args.T0 if args.T0 is not None else DEFAULT_T0[iso.isotope]
    state = evap.CoolingState.from_radius(iso, cfg.radius, T0)
    traj = evap.integrate_cooling(state, iso, cfg.heat_load, args.t_end, args.tol, wavelength=cfg.wavelength)
    if cfg.format == "json":
        return dump_json({"isotope": iso.isotope, "heat_load_W": cfg.heat_load,
                          "steps": {"accepted": traj.stats.accepted, "rejected": traj.stats.rejected},
                          "samples": [dict(zip(evap.TRAJECTORY_HEADER, s.as_row())) for s in traj.samples]})
    return evap.write_trajectory_csv(traj)


def cmd_qnd(cfg, args):
    if (args.omega_z is None) == (args.L_z is None):
        raise UsageError("give exactly one of --omega-z and --L-z")
    if cfg.input_power <= 0:
        raise UsageError("input power must be positive for a readout")
    drop = _drop(cfg)
    wgm = optics.WgmMode.equatorial(drop, cfg.wavelength, q_opt=args.q_opt)
    omega_z = args.omega_z if args.omega_z is not None else args.L_z * HBAR / drop.moment_of_inertia
    if omega_z <= 0:
        raise UsageError("rotation must be positive")
    budget = rotation.qnd_budget(rotation.RotationInput(drop, omega_z, wgm), cfg.input_power,
                                 args.scatter_fraction, args.t_meas)
    target = np.sqrt(budget.L_z_hbar)
    noise = budget.noise_terms
    t_meas = args.t_meas if args.t_meas is not None else budget.heisenberg_time
    report = {
        "isotope": drop.iso.isotope, "omega_z_rad_s": omega_z, "L_z_hbar": budget.L_z_hbar,
        "g_L_rad_s": budget.g_L, "g_L_over_omega_opt": budget.g_L / wgm.frequency,
        "detuning_per_hbar_rad_s": budget.detuning_per_hbar, "detuning_per_hbar_Hz": budget.detuning_per_hbar / TWO_PI,
        "sqrt_S_L_hbar_per_rtHz": budget.sqrt_S_L, "heisenberg_resolution_time_s": budget.heisenberg_time,
        "t_meas_s": t_meas, "heisenberg_target_hbar": target,
        "noise": {
            "evap_number_shift_Hz": noise.evap_number_shift,
            "evap_L_kick_hbar": noise.evap_L_kick,
            "photon_L_kick_hbar": noise.photon_L_kick,
            "single_atom_kick_hbar": noise.single_atom_kick,
            "single_photon_kick_hbar": noise.single_photon_kick,
            "atom_number_fluctuation": noise.atom_number_fluctuation,
        },
        "noise_below_imprecision": {
            "evap_L_kick": bool(noise.evap_L_kick < target),
            "photon_L_kick": bool(noise.photon_L_kick < target),
        },
    }
    return dump_json(report)


def _load_rovib_state(path):
    from .rovib import RotorVibState

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        X = [complex(re, im) for re, im in data["X"]]
        Xd = [complex(re, im) for re, im in data.get("X_rates", [[0, 0]] * 5)]
        return RotorVibState.from_arrays(data["euler"], data.get("euler_rates", [0, 0, 0]), X, Xd)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed rovib state file: {exc}") from exc


def cmd_rovib(cfg, args):
    from .rovib import RovibParams, integrate, linearized_spectrum, spin_equilibrium_state, write_trajectory_csv

    params = RovibParams()
    summary = {"units": "R = rho = sigma = 1; omega_vib = sqrt(8)"}
    if args.linearize:
        lin = linearized_spectrum(args.omega * params.omega_vib, params)
        summary["bryan"] = {"omega_z": lin.omega_z, "frequencies": lin.frequencies,
                            "slopes": lin.slopes, "multiplicity": lin.multiplicity}
    text = ""
    if args.initial or args.spin_equilibrium:
        if args.initial:
            state = _load_rovib_state(args.initial)
            q, qd = state.coordinates()
        else:
            q, qd = spin_equilibrium_state(args.omega * params.omega_vib, params)
        traj = integrate((q, qd), params, args.t_end, args.tol, n_samples=args.samples)
        text = write_trajectory_csv(traj)
        summary.update({"max_energy_drift": traj.max_energy_drift(),
                        "max_angular_momentum_drift": traj.max_angular_momentum_drift(),
                        "chart_switches": traj.chart_switches, "samples": len(traj.t)})
    if text and args.summary:
        _emit(dump_json(summary), args.summary)
        return text
    if text and cfg.output is not None:
        _emit(dump_json(summary), Path(str(cfg.output) + ".summary.json"))
        return text
    if text:
        sys.stderr.write(dump_json(summary))  # keep stdout a clean CSV
        return text
    return dump_json(summary)


def build_figures(cfg):
    """Datasets behind the parameter table and the radius, spectrum and cooling figures."""
    drop = _drop(cfg)
    lam = cfg.wavelength
    wgm = optics.WgmMode.equatorial(drop, lam)
    omega_vib = modes.surface_mode_frequency(drop, 2)
    g0 = optics.coupling_g0(drop, wgm)
    budget = optics.q_total(drop, lam)
    mech = mechloss.classify_regime(drop)
    table1 = {
        "isotope": drop.iso.isotope, "radius_m": drop.radius, "temperature_K": drop.temperature,
        "wavelength_m": lam,
        "omega_vib_rad_s": omega_vib, "omega_vib_Hz": omega_vib / TWO_PI,
        "g0_rad_s": g0, "g0_Hz": g0 / TWO_PI,
        "q_opt": budget.q_surface, "q_opt_total": budget.q_total,
        "q_mech_bound": mech.q_mech, "mech_regime": mech.regime.value,
        "x_zpf_m": modes.zpf_amplitude(drop)[0],
        "g0_exceeds_omega_vib": bool(g0 > omega_vib),
    }
    fig2 = dump_csv(("branch", "n", "l", "omega_rad_s", "f_Hz"),
                    [(b, n, l, w, w / TWO_PI) for b, n, l, w in modes.spectrum(drop, 10, 3)])
    rows3 = []
    for R in FIG3_RADII:
        d = drop.replace(radius=float(R))
        w = optics.WgmMode.equatorial(d, lam)
        b = optics.q_total(d, lam)
        wv = modes.surface_mode_frequency(d, 2)
        g = optics.coupling_g0(d, w)
        kappa_s = w.frequency / b.q_surface
        kappa = w.frequency / b.q_total
        rows3.append((float(R), wv, wv / TWO_PI, kappa, kappa / TWO_PI, kappa_s, kappa_s / TWO_PI, g, g / TWO_PI,
                      b.q_surface, b.q_radiative, b.q_bulk_floor, b.q_total))
    fig3 = dump_csv(("R_m", "omega_vib_rad_s", "omega_vib_Hz", "kappa_rad_s", "kappa_Hz", "kappa_surface_rad_s",
                     "kappa_surface_Hz", "g0_rad_s", "g0_Hz", "Q_surface", "Q_radiative", "Q_bulk", "Q_total"), rows3)
    rows4 = []
    times = np.union1d(np.logspace(-3, 3, 61), [1.0, 60.0])
    times = np.concatenate([[0.0], times])
    for iso_name in (Isotope.HE4, Isotope.HE3):
        iso = load_isotope(iso_name, cfg.data_dir)
        state = evap.CoolingState.from_radius(iso, cfg.radius, DEFAULT_T0[iso_name])
        traj = evap.integrate_cooling(state, iso, 0.0, 1000.0, 1e-8, times=times, wavelength=lam)
        rows4 += [(iso_name.value, *s.as_row()) for s in traj.samples]
    fig4 = dump_csv(("isotope",) + evap.TRAJECTORY_HEADER, rows4)
    return {"table1.json": dump_json(table1), "fig2.csv": fig2, "fig3.csv": fig3, "fig4.csv": fig4}


def cmd_figures(cfg, args):
    out = Path(cfg.output) if cfg.output is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    files = build_figures(cfg)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    return dump_json({"written": sorted(str(out / n) for n in files)})


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat key = value configuration file")
    common.add_argument("--data-dir", type=Path, help="property table directory (default: $HEDROP_DATA_DIR, then bundled)")
    common.add_argument("--out", type=Path, help="output file (directory for 'figures'); stdout when absent")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--isotope", help="He3 or He4")
    common.add_argument("--radius", type=float, help="drop radius in m")
    common.add_argument("--temperature", type=float, help="drop temperature in K")
    common.add_argument("--wavelength", type=float, help="optical wavelength in m")
    common.add_argument("--input-power", type=float, help="optical input power in W")
    common.add_argument("--heat-load", type=float, help="constant heat load in W")

    parser = _Parser(prog="hedrop", description="Levitated helium drop models")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("props", parents=[common], help="material and thermodynamic properties")
    p = sub.add_parser("spectrum", parents=[common], help="surface and sound mode spectrum")
    p.add_argument("--l-max", type=int, default=10)
    p.add_argument("--n-max", type=int, default=3)
    p = sub.add_parser("couplings", parents=[common], help="optomechanical couplings and WGM splitting")
    p.add_argument("--distortion", type=float, default=0.01, help="static delta R / R for the splitting")
    p.add_argument("--l-tilde", type=int)
    p.add_argument("--m-tilde", type=int)
    sub.add_parser("qfactors", parents=[common], help="optical and mechanical quality factors")
    p = sub.add_parser("cool", parents=[common], help="evaporative cooling trajectory")
    p.add_argument("--t-end", type=float, default=1000.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--T0", type=float, help="initial temperature (default 4.0 K for He4, 2.5 K for He3)")
    p = sub.add_parser("qnd", parents=[common], help="angular momentum readout budget")
    p.add_argument("--omega-z", type=float, help="spin rate in rad/s")
    p.add_argument("--L-z", type=float, help="angular momentum in units of hbar")
    p.add_argument("--q-opt", type=float, default=1e10)
    p.add_argument("--t-meas", type=float, help="measurement time (default: Heisenberg resolution time)")
    p.add_argument("--scatter-fraction", type=float, default=rotation.DEFAULT_SCATTER_FRACTION)
    p = sub.add_parser("rovib", parents=[common], help="rotor-vibration dynamics (R = rho = sigma = 1 units)")
    p.add_argument("--initial", type=Path, help="JSON initial state")
    p.add_argument("--spin-equilibrium", action="store_true", help="start from steady spin with the equilibrium bulge")
    p.add_argument("--linearize", action="store_true", help="report Bryan-effect frequencies and slopes")
    p.add_argument("--omega", type=float, default=1e-3, help="spin rate in units of omega_vib")
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--summary", type=Path, help="write the JSON summary here")
    sub.add_parser("figures", parents=[common], help="table and figure datasets")
    return parser


COMMANDS = {
    "props": cmd_props, "spectrum": cmd_spectrum, "couplings": cmd_couplings, "qfactors": cmd_qfactors,
    "cool": cmd_cool, "qnd": cmd_qnd, "rovib": cmd_rovib, "figures": cmd_figures,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, isotope=args.isotope, radius=args.radius, temperature=args.temperature,
                          wavelength=args.wavelength, input_power=args.input_power, heat_load=args.heat_load,
                          data_dir=args.data_dir, output=args.out, format=args.format)
        text = COMMANDS[args.command](cfg, args)
        if args.command != "figures":
            _emit(text, cfg.output)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except UsageError as exc:
        print(f"hedrop: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, TableParseError) as exc:
        print(f"hedrop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConstraintViolation as exc:
        print(f"hedrop: validation error (index {exc.index}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, OutOfRangeError, UnsupportedRegimeError, SteadyStateError, ValueError) as exc:
        print(f"hedrop: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except IntegrationError as exc:
        print(f"hedrop: integration failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"hedrop: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
