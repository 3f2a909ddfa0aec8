"""Quantum non-demolition readout of drop angular momentum through the rotational bulge."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import C_LIGHT, HBAR, K_B, TWO_PI
from .errors import UnsupportedRegimeError
from .evap import evaporation_rate
from .modes import Drop
from .optics import WgmMode

BULGE_GUARD = 0.1  # delta R / R above which the small-deformation model is abandoned
DEFAULT_SCATTER_FRACTION = 0.1
FIZEAU_G = TWO_PI * 1e-20  # rad/s, R = 1 mm; stored estimate, no closed form


@dataclass(frozen=True)
class RotationInput:
    drop: Drop
    omega_z: float  # rad/s
    wgm: WgmMode

    @property
    def L_z(self):
        return self.drop.moment_of_inertia * self.omega_z

    @property
    def L_z_hbar(self):
        return self.L_z / HBAR


@dataclass(frozen=True)
class NoiseTerms:
    evap_number_shift: float  # Hz
    evap_L_kick: float  # hbar
    photon_L_kick: float  # hbar
    atom_number_fluctuation: float = float("nan")
    single_atom_kick: float = float("nan")  # hbar
    single_photon_kick: float = float("nan")  # hbar


@dataclass(frozen=True)
class QndBudget:
    g_L: float  # rad/s
    detuning_per_hbar: float  # rad/s, 2 g_L L_z / hbar
    sqrt_S_L: float  # hbar / sqrt(Hz)
    L_z_hbar: float
    noise_terms: Optional[NoiseTerms] = field(default=None)

    def t_meas_for(self, delta_L_hbar):
        """Integration time (s) for the imprecision to fall to ``delta_L_hbar`` (in hbar)."""
        if delta_L_hbar <= 0:
            raise ValueError("target resolution must be positive")
        return self.sqrt_S_L**2 / delta_L_hbar**2

    @property
    def heisenberg_time(self):
        return self.t_meas_for(np.sqrt(self.L_z_hbar))


def rotational_bulge(drop, omega_z):
    """Equatorial radius increase of a spinning drop, rho R^4 Omega^2 / (24 sigma)."""
    iso = drop.iso
    dr = iso.density * drop.radius**4 * omega_z**2 / (24.0 * iso.surface_tension)
    if dr / drop.radius >= BULGE_GUARD:
        raise UnsupportedRegimeError(
            f"delta R / R = {dr / drop.radius:.3g} >= {BULGE_GUARD}: rotation too fast for the small-bulge model")
    return float(dr)


def g_L(drop, wgm):
    """Quadratic opto-rotational coupling: detuning = g_L (L_z / hbar)^2."""
    iso = drop.iso
    return float(wgm.frequency * HBAR**2 / (iso.density * iso.surface_tension * drop.radius**7)
                 / 24.0 * (15.0 / (8.0 * np.pi)) ** 2)


def detuning_per_quantum(drop, wgm, L_z):
    """Change of the optical detuning per quantum of angular momentum, 2 g_L L_z / hbar."""
    if L_z < 0:
        raise ValueError("L_z must be non-negative")
    return 2.0 * g_L(drop, wgm) * L_z / HBAR


def photon_flux(power, wavelength):
    return power / (HBAR * TWO_PI * C_LIGHT / wavelength)


def imprecision_sqrt_S_L(drop, wgm, photon_rate, L_z):
    """Shot-noise-limited angular momentum imprecision, returned in units of hbar / sqrt(Hz)."""
    if photon_rate <= 0:
        raise ValueError("photon flux must be positive")
    if L_z <= 0:
        raise UnsupportedRegimeError("L_z = 0: the quadratic coupling gives no linear signal")
    if not np.isfinite(wgm.q_opt):
        raise ValueError("the optical mode needs a finite Q_opt")
    return float((wgm.frequency / (2.0 * g_L(drop, wgm))) * (HBAR / L_z)
                 / (2.0 * wgm.q_opt * np.sqrt(photon_rate)))


def heisenberg_resolution_time(drop, wgm, photon_rate, L):
    """Time for the imprecision to reach sqrt(hbar L), S_L / (hbar L)."""
    if L <= 0:
        raise ValueError("L must be positive")
    s = imprecision_sqrt_S_L(drop, wgm, photon_rate, L)
    return float(s**2 * HBAR / L)


def single_atom_kick(drop):
    """Angular momentum (in hbar) carried by one atom leaving tangentially at the most probable speed."""
    m = drop.iso.atomic_mass
    v = np.sqrt(2.0 * K_B * drop.temperature / m)
    return float(m * v * drop.radius / HBAR)


def noise_budget(drop, wgm, input_power, scatter_fraction=DEFAULT_SCATTER_FRACTION, t_meas=1e-7):
    """Evaporation shot noise, evaporative and photon-recoil angular momentum random walks."""
    if t_meas <= 0:
        raise ValueError("t_meas must be positive")
    if not 0 <= scatter_fraction <= 1:
        raise ValueError("scatter_fraction must lie in [0, 1]")
    iso = drop.iso
    R = drop.radius
    dN = np.sqrt(evaporation_rate(drop) * t_meas)
    dR = dN * (iso.atomic_mass / iso.density) / (4.0 * np.pi * R**2)
    shift_hz = wgm.frequency * dR / R / TWO_PI
    kick = single_atom_kick(drop)
    n_scattered = scatter_fraction * photon_flux(input_power, wgm.wavelength) * t_meas
    photon_kick = R * wgm.k0  # R hbar k0 in units of hbar
    return NoiseTerms(
        evap_number_shift=float(shift_hz),
        evap_L_kick=float(dN * kick),
        photon_L_kick=float(np.sqrt(n_scattered) * photon_kick),
        atom_number_fluctuation=float(dN),
        single_atom_kick=kick,
        single_photon_kick=float(photon_kick),
    )


def qnd_budget(rot, input_power=None, scatter_fraction=DEFAULT_SCATTER_FRACTION, t_meas=None):
    """Collect coupling, sensitivity and (optionally) noise for a spinning drop."""
    drop, wgm = rot.drop, rot.wgm
    gl = g_L(drop, wgm)
    sqrt_s = float("nan")
    if input_power is not None:
        sqrt_s = imprecision_sqrt_S_L(drop, wgm, photon_flux(input_power, wgm.wavelength), rot.L_z)
    budget = QndBudget(gl, detuning_per_quantum(drop, wgm, rot.L_z), sqrt_s, rot.L_z_hbar)
    if input_power is not None:
        if t_meas is None:
            t_meas = budget.heisenberg_time
        noise = noise_budget(drop, wgm, input_power, scatter_fraction, t_meas)
        budget = QndBudget(gl, budget.detuning_per_hbar, sqrt_s, rot.L_z_hbar, noise)
    return budget


def measured_operator_value(L_x, L_y, L_z):
    """L_z^2 - (L_x^2 + L_y^2)/3, the combination the optical shift tracks."""
    return L_z**2 - (L_x**2 + L_y**2) / 3.0


def reference_constants(drop=None):
    """Labelled reference values: Fizeau coupling and the single-vortex angular momentum."""
    rows = [("fizeau_g_F", FIZEAU_G, "rad/s", "stored estimate for R = 1 mm; independent of L_z")]
    if drop is not None:
        rows.append(("vortex_L", drop.atom_count, "hbar", "one quantum per atom, N hbar"))
    return rows
