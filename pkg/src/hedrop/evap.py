"""Evaporative self-cooling of a drop in vacuum and the resulting optical drift."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .constants import C_LIGHT, K_B
from .errors import IntegrationError, OutOfRangeError, SteadyStateError
from .heprops import latent_heat, specific_heat, vapor_pressure
from .modes import Drop
from .rk import StepStats, solve

TRAJECTORY_HEADER = ("t_s", "T_K", "N", "R_m", "Gamma_per_s", "Pcool_W", "drift_Hz_per_s")
DEFAULT_WAVELENGTH = 1e-6


@dataclass(frozen=True)
class CoolingState:
    t: float
    T: float
    N: float

    def __post_init__(self):
        if not (self.T > 0 and self.N > 0):
            raise ValueError(f"need T > 0 and N > 0, got T={self.T!r}, N={self.N!r}")

    def radius(self, iso):
        return radius_from_atoms(iso, self.N)

    @classmethod
    def from_radius(cls, iso, radius, T, t=0.0):
        return cls(t=t, T=T, N=Drop(iso, radius, T).atom_count)


@dataclass(frozen=True)
class CoolingSample:
    t: float
    T: float
    N: float
    R: float
    gamma: float
    p_cool: float
    drift: float

    def as_row(self):
        return (self.t, self.T, self.N, self.R, self.gamma, self.p_cool, self.drift)


@dataclass
class CoolingTrajectory:
    samples: list
    isotope: str = ""
    heat_load: float = 0.0
    stats: StepStats = field(default_factory=StepStats)

    def __len__(self):
        return len(self.samples)

    def column(self, name):
        i = TRAJECTORY_HEADER.index(name)
        return np.array([s.as_row()[i] for s in self.samples])

    @property
    def t(self):
        return self.column("t_s")

    @property
    def T(self):
        return self.column("T_K")

    def at(self, t):
        """Sample at time ``t`` (must be one of the sampled times)."""
        for s in self.samples:
            if s.t == t or np.isclose(s.t, t, rtol=1e-12, atol=0):
                return s
        raise KeyError(f"t={t!r} is not a sample time")


def radius_from_atoms(iso, N):
    return float((3.0 * N * iso.atomic_mass / (4.0 * np.pi * iso.density)) ** (1.0 / 3.0))


def _effusion_rate(iso, radius, T):
    return 4.0 * np.pi * radius**2 * vapor_pressure(iso, T) / np.sqrt(2.0 * np.pi * iso.atomic_mass * K_B * T)


def evaporation_rate(drop):
    """Atoms leaving per second, assuming unit accommodation coefficient."""
    if drop.temperature <= 0:
        raise ValueError("temperature must be positive")
    return float(_effusion_rate(drop.iso, drop.radius, drop.temperature))


def cooling_power(drop):
    """Evaporative cooling power Delta E * Gamma in W."""
    return latent_heat(drop.iso, drop.temperature) * evaporation_rate(drop)


def radius_rate(drop, gamma=None):
    """dR/dt in m/s for an evaporation rate ``gamma`` (defaults to the effusion rate)."""
    if gamma is None:
        gamma = evaporation_rate(drop)
    iso = drop.iso
    return -gamma * iso.atomic_mass / (4.0 * np.pi * drop.radius**2 * iso.density)


def optical_drift(drop, wavelength=DEFAULT_WAVELENGTH, gamma=None):
    """|d omega_opt/dt| / 2 pi in Hz/s from the shrinking radius."""
    f_opt = C_LIGHT / wavelength
    return float(f_opt * abs(radius_rate(drop, gamma)) / drop.radius)


def _rhs(iso, heat_load):
    def rhs(t, y):
        T, N = y
        if T <= 0 or N <= 0:
            raise ValueError("non-physical stage")
        R = radius_from_atoms(iso, N)
        gamma = _effusion_rate(iso, R, T)
        dT = (heat_load - gamma * latent_heat(iso, T)) / specific_heat(iso, N, T)
        return np.array([dT, -gamma])

    return rhs


def sample_times(t_end, points_per_decade=10, t_first=1e-3, extra=()):
    """t = 0, log-spaced times from ``t_first`` to ``t_end``, and any ``extra`` times."""
    if t_end <= t_first:
        grid = np.array([t_end])
    else:
        n = max(2, int(round(np.log10(t_end / t_first) * points_per_decade)) + 1)
        grid = np.logspace(np.log10(t_first), np.log10(t_end), n)
        grid[-1] = t_end
    extra = [float(x) for x in extra if 0 < x <= t_end]
    return np.unique(np.concatenate([[0.0], grid, extra]))


def integrate_cooling(initial, iso, heat_load=0.0, t_end=1000.0, tol=1e-8,
                      times: Optional[Sequence[float]] = None, wavelength=DEFAULT_WAVELENGTH):
    """Integrate dT/dt = (heat_load - Gamma dE)/C(N, T), dN/dt = -Gamma.

    Sampling defaults to :func:`sample_times` with 1 s and 60 s included.
    Raises :class:`IntegrationError` (with a partial trajectory) if the
    adaptive step underflows.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not 1e-12 < tol < 1e-2:
        raise ValueError(f"tol must lie in (1e-12, 1e-2), got {tol!r}")
    if heat_load < 0:
        raise ValueError("heat load must be non-negative")
    t0 = float(initial.t)
    if times is None:
        times = t0 + sample_times(t_end, extra=(1.0, 60.0))
    times = np.asarray(times, dtype=float)
    y0 = np.array([initial.T, initial.N])
    atol = np.array([tol * 1e-3 * initial.T, tol * 1e-3 * initial.N])
    try:
        sol = solve(_rhs(iso, heat_load), (t0, t0 + t_end), y0, times, rtol=tol, atol=atol,
                    valid=lambda y: y[0] > 0 and y[1] > 0)
    except IntegrationError as exc:
        partial = exc.partial
        exc.partial = _trajectory(iso, heat_load, partial.t, partial.y, partial.stats, wavelength)
        raise
    return _trajectory(iso, heat_load, sol.t, sol.y, sol.stats, wavelength)


def _trajectory(iso, heat_load, ts, ys, stats, wavelength):
    samples = []
    for t, (T, N) in zip(ts, ys):
        drop = Drop(iso, radius_from_atoms(iso, N), T)
        gamma = evaporation_rate(drop)
        samples.append(CoolingSample(float(t), float(T), float(N), drop.radius, gamma,
                                     gamma * latent_heat(iso, T), optical_drift(drop, wavelength, gamma)))
    return CoolingTrajectory(samples, iso.isotope.value, heat_load, stats)


def steady_state_temperature(drop, heat_load):
    """Temperature at which evaporative cooling balances ``heat_load``."""
    if heat_load <= 0:
        raise SteadyStateError("steady state needs a positive heat load")
    iso = drop.iso

    def balance(T):
        return cooling_power(drop.replace(temperature=T)) - heat_load

    vp = iso.vapor_pressure_table
    lo = max(iso.latent_heat_table.valid_range[0], 1e-2 if vp.below is not None else vp.valid_range[0])
    hi = min(vp.valid_range[1], iso.latent_heat_table.valid_range[1])
    try:
        f_lo, f_hi = balance(lo), balance(hi)
    except OutOfRangeError as exc:
        raise SteadyStateError(str(exc)) from exc
    if f_lo > 0 or f_hi < 0:
        raise SteadyStateError(f"heat load {heat_load!r} W is not balanced for T in [{lo}, {hi}] K")
    # cooling power spans many decades, so bracket in log space
    def log_balance(log_t):
        T = min(max(np.exp(log_t), lo), hi)
        return np.log(cooling_power(drop.replace(temperature=T))) - np.log(heat_load)

    return float(min(max(np.exp(brentq(log_balance, np.log(lo), np.log(hi), xtol=1e-14, rtol=1e-13)), lo), hi))


def wgm_drift_rate(drop, heat_load, wavelength=DEFAULT_WAVELENGTH):
    """Optical drift in Hz/s when ``heat_load`` is carried away by steady evaporation."""
    T_ss = steady_state_temperature(drop, heat_load)
    gamma = heat_load / latent_heat(drop.iso, T_ss)
    return optical_drift(drop.replace(temperature=T_ss), wavelength, gamma)


def write_trajectory_csv(trajectory, stream=None):
    """Write the trajectory as CSV; returns the text when ``stream`` is None."""
    own = stream is None
    buf = io.StringIO() if own else stream
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for s in trajectory.samples:
        writer.writerow([repr(float(v)) for v in s.as_row()])
    return buf.getvalue() if own else None


def read_trajectory_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != TRAJECTORY_HEADER:
        raise ValueError("unexpected trajectory header")
    return np.array([[float(x) for x in r] for r in rows[1:]])


def drift_per_watt(drop, wavelength=DEFAULT_WAVELENGTH, heat_load=1e-9):
    """Drift rate per watt of dissipated power, in Hz/s/W.

    The drift is linear in the load as long as the steady-state temperature
    stays low enough that Delta E is close to its T -> 0 value, which holds
    for loads well below a microwatt on a mm-scale drop.
    """
    return wgm_drift_rate(drop, heat_load, wavelength) / heat_load
