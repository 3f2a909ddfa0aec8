"""Mechanical damping of surface modes and the temperature-regime classifier."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import HBAR, K_B
from .errors import UnsupportedRegimeError
from .heprops import Isotope, viscosity_he3
from .modes import SurfaceMode, surface_mode_frequency

# phonon mean free path equals R_REF at T_REF
MFP_REF_LENGTH = 1e-3
MFP_REF_TEMPERATURE = 0.4
# 4He hydrodynamic window: measured peak Q and its temperature
HE4_HYDRO_T_MAX = 1.2
HE4_HYDRO_Q_BOUNDS = (1e2, 1.2e3)
HE3_VISCOUS_T_MAX = 1.5


class Regime(str, enum.Enum):
    VAPOR_DOMINATED = "vapor_dominated"
    VISCOUS_HYDRODYNAMIC = "viscous_hydrodynamic"
    BALLISTIC_RIPPLON_PHONON = "ballistic_ripplon_phonon"


@dataclass(frozen=True)
class MechLossReport:
    regime: Regime
    q_mech: float
    dominant_channel: str
    q_interval: Optional[tuple] = None  # set when only bounds are known
    mean_free_path: float = float("nan")

    @property
    def is_bound(self):
        return self.q_interval is not None


def ripplon_wavenumber(radius, l):
    """Planar ripplon wavenumber whose deep-water dispersion sigma k^3 / rho
    reproduces the Rayleigh frequency of the spherical l mode."""
    return (l * (l - 1) * (l + 2)) ** (1.0 / 3.0) / radius


def q_ripplon_phonon(drop, mode):
    """Q from ripplon-phonon-phonon scattering in the ballistic phonon regime.

    1/Q = (pi^2/90) (hbar k / rho omega) (k_B T / hbar v_s)^4
    """
    if isinstance(mode, SurfaceMode):
        l, omega = mode.l, mode.frequency
    else:
        l = int(mode)
        omega = surface_mode_frequency(drop, l)
    if l < 2:
        raise ValueError("surface modes start at l = 2")
    if drop.temperature <= 0:
        raise ValueError("temperature must be positive")
    iso = drop.iso
    k = ripplon_wavenumber(drop.radius, l)
    inv_q = (np.pi**2 / 90.0) * (HBAR * k / (iso.density * omega)) \
        * (K_B * drop.temperature / (HBAR * iso.sound_speed)) ** 4
    return float(1.0 / inv_q)


def q_viscous(drop, l=2):
    """Chandrasekhar viscous damping of a normal-fluid 3He drop,
    1/Q = mu (l-1)(2l+1) / (omega R^2 rho)."""
    iso = drop.iso
    if iso.isotope is not Isotope.HE3:
        raise UnsupportedRegimeError("viscous damping model applies to normal-fluid 3He only")
    if l < 2:
        raise ValueError("surface modes start at l = 2")
    mu = viscosity_he3(drop.temperature)
    omega = surface_mode_frequency(drop, l)
    inv_q = mu * (l - 1) * (2 * l + 1) / (omega * drop.radius**2 * iso.density)
    return float(1.0 / inv_q)


def mean_free_path(T):
    """Thermal phonon mean free path, scaling as T^-4."""
    if T <= 0:
        return float("inf")
    return MFP_REF_LENGTH * (MFP_REF_TEMPERATURE / T) ** 4


def classify_regime(drop, l=2):
    T = drop.temperature
    mfp = mean_free_path(T)
    if mfp > drop.radius:
        return MechLossReport(Regime.BALLISTIC_RIPPLON_PHONON, q_ripplon_phonon(drop, l),
                              "ripplon-phonon scattering", mean_free_path=mfp)
    if drop.iso.isotope is Isotope.HE4:
        if T <= HE4_HYDRO_T_MAX:
            lo, hi = HE4_HYDRO_Q_BOUNDS
            return MechLossReport(Regime.VISCOUS_HYDRODYNAMIC, hi, "hydrodynamic (three-fluid)",
                                  q_interval=(lo, hi), mean_free_path=mfp)
        # above the peak Q falls with T; only the peak value is an upper bound
        return MechLossReport(Regime.VAPOR_DOMINATED, HE4_HYDRO_Q_BOUNDS[1], "vapor damping",
                              q_interval=(0.0, HE4_HYDRO_Q_BOUNDS[1]), mean_free_path=mfp)
    if T <= HE3_VISCOUS_T_MAX:
        return MechLossReport(Regime.VISCOUS_HYDRODYNAMIC, q_viscous(drop, l), "viscous (Chandrasekhar)",
                              mean_free_path=mfp)
    q_edge = q_viscous(drop.replace(temperature=HE3_VISCOUS_T_MAX), l)
    return MechLossReport(Regime.VAPOR_DOMINATED, q_edge, "vapor damping",
                          q_interval=(0.0, q_edge), mean_free_path=mfp)
