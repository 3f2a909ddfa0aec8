"""Whispering-gallery modes: optomechanical couplings, distortion splitting, optical loss."""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np
from scipy.integrate import quad

from .constants import C_LIGHT, K_B, TWO_PI
from .errors import UnsupportedRegimeError
from .modes import zpf_amplitude

Q_BULK_FLOOR = 1e13  # Brillouin scattering from thermal density fluctuations


@dataclass(frozen=True)
class WgmMode:
    """Optical whispering-gallery mode (l~, m~, n~) at vacuum wavelength ``wavelength``."""

    l: int
    m: int
    n: int
    wavelength: float
    q_opt: float = float("inf")

    def __post_init__(self):
        if abs(self.m) > self.l:
            raise ValueError(f"|m~| must not exceed l~ ({self.m=}, {self.l=})")
        if self.n < 1:
            raise ValueError("radial index n~ must be >= 1")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")

    @classmethod
    def equatorial(cls, drop, wavelength, q_opt=float("inf"), n=1):
        """Equatorial mode (m~ = l~) with l~ estimated from the optical path length."""
        l = angular_index_estimate(drop, wavelength)
        return cls(l=l, m=l, n=n, wavelength=wavelength, q_opt=q_opt)

    @property
    def frequency(self):
        return TWO_PI * C_LIGHT / self.wavelength

    @property
    def k0(self):
        return TWO_PI / self.wavelength

    @property
    def linewidth(self):
        return self.frequency / self.q_opt

    def with_q(self, q_opt):
        return replace(self, q_opt=q_opt)


@dataclass(frozen=True)
class WgmSplitting:
    shifts: list  # (|m~|, shift in rad/s) for |m~| = 0..l~
    bandwidth: float  # rad/s
    fsr: float  # rad/s

    @property
    def bandwidth_hz(self):
        return self.bandwidth / TWO_PI

    @property
    def fsr_hz(self):
        return self.fsr / TWO_PI


@dataclass(frozen=True)
class LossBudget:
    q_surface: float
    q_radiative: float
    q_bulk_floor: float
    q_total: float

    @property
    def dominant(self):
        channels = {"surface": self.q_surface, "radiative": self.q_radiative, "bulk": self.q_bulk_floor}
        return min(channels, key=channels.get)


def angular_index_estimate(drop, wavelength):
    return max(1, int(round(TWO_PI * drop.radius * drop.iso.refractive_index / wavelength)))


def free_spectral_range(drop):
    """FSR in rad/s for one round trip of the equator."""
    return C_LIGHT / (drop.radius * drop.iso.refractive_index)


def angular_factor(l, m):
    """(1/2)[3 m^2 / (l(l+1)) - 1]; the projection of an l=2, m=0 distortion on mode (l, m)."""
    return 0.5 * (3.0 * m * m / (l * (l + 1.0)) - 1.0)


def coupling_g0(drop, wgm):
    """Single-quantum coupling of an equatorial WGM to the l=2, m=0 surface mode."""
    if wgm.m != wgm.l:
        raise ValueError("coupling_g0 is defined for equatorial modes (m~ = l~)")
    _, dr_zpf = zpf_amplitude(drop)
    return wgm.frequency * dr_zpf / drop.radius


def coupling_general(drop, wgm, delta_r=None):
    """Linear coupling of mode (l~, m~) to an equatorial radius change ``delta_r``.

    ``delta_r`` defaults to the zero-point value, giving the single-quantum rate.
    """
    if delta_r is None:
        delta_r = zpf_amplitude(drop)[1]
    return wgm.frequency * (delta_r / drop.radius) * angular_factor(wgm.l, wgm.m)


def wgm_splitting(drop, l, delta_r, wavelength):
    """Frequency shifts of the l~+1 distinct |m~| members under a static distortion."""
    omega = TWO_PI * C_LIGHT / wavelength
    pref = omega * delta_r / drop.radius
    shifts = [(m, pref * angular_factor(l, m)) for m in range(l + 1)]
    values = [s for _, s in shifts]
    return WgmSplitting(shifts=shifts, bandwidth=max(values) - min(values), fsr=free_spectral_range(drop))


def surface_scattering_q(radius, temperature, wavelength, dielectric, surface_tension, method="closed_form"):
    """Quality factor limited by out-scattering from frozen thermal ripplons.

    ``closed_form`` is the analytic lower bound 2R/(pi k0 sqrt(eps-1)) * sigma/(k_B T).
    ``quadrature`` integrates the planar-waveguide expression over the
    scattering angle with the in-medium propagation constant sqrt(eps) k0 and a
    long-wavelength cutoff 2 pi / R on the ripplon wavenumber.
    """
    if temperature <= 0:
        return float("inf")
    k0 = TWO_PI / wavelength
    eps = dielectric
    if method == "closed_form":
        return float(2.0 * radius / (np.pi * k0 * np.sqrt(eps - 1.0)) * surface_tension / (K_B * temperature))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    phi0_sq = 2.0 * eps / (radius * (eps - 1.0))
    beta = np.sqrt(eps) * k0
    k_min = TWO_PI / radius

    def correlation(theta):
        q = max(abs(beta - k0 * np.cos(theta)), k_min)
        return TWO_PI * K_B * temperature / (surface_tension * q)

    integral, _ = quad(correlation, 0.0, np.pi, epsabs=0.0, epsrel=1e-10, limit=200)
    inv_q = phi0_sq * (eps - 1.0) ** 2 * k0**2 / (8.0 * np.pi) * integral
    return float(1.0 / inv_q)


def q_surface_scattering(drop, wavelength, method="closed_form"):
    iso = drop.iso
    return surface_scattering_q(drop.radius, drop.temperature, wavelength, iso.dielectric,
                                iso.surface_tension, method)


def wkb_barrier(size_parameter, index):
    """Tunnelling exponent through the centrifugal barrier of a dielectric sphere.

    For a mode with nu = l~ + 1/2 ~ n x (x = k0 R) the barrier runs from R to
    the outer turning point nu/k0, giving nu [arccosh(nu/x) - sqrt(1 - (x/nu)^2)].
    """
    x = size_parameter
    nu = index * x
    ratio = nu / x
    return nu * (np.arccosh(ratio) - np.sqrt(1.0 - 1.0 / ratio**2))


def radiative_q(radius, wavelength, index):
    if radius / wavelength <= 1.0:
        raise UnsupportedRegimeError(f"R/lambda = {radius / wavelength:.3g} <= 1: no whispering-gallery confinement")
    x = TWO_PI * radius / wavelength
    omega = TWO_PI * C_LIGHT / wavelength
    attempt_rate = C_LIGHT / (TWO_PI * radius * index)  # round trips per second
    prefactor = omega / (2.0 * attempt_rate)
    return float(prefactor * np.exp(2.0 * wkb_barrier(x, index)))


def q_radiative(drop, wavelength):
    """Order-of-magnitude radiative Q (WKB tunnelling estimate)."""
    return radiative_q(drop.radius, wavelength, drop.iso.refractive_index)


def q_total(drop, wavelength):
    qs = q_surface_scattering(drop, wavelength)
    qr = q_radiative(drop, wavelength)
    total = 1.0 / (1.0 / qs + 1.0 / qr + 1.0 / Q_BULK_FLOOR)
    return LossBudget(q_surface=qs, q_radiative=qr, q_bulk_floor=Q_BULK_FLOOR, q_total=float(total))


def bryan_shift(m, omega_rot):
    """Rotating-frame frequency shift of the l=2, m surface mode on a spinning drop."""
    if abs(m) > 2:
        raise ValueError("Bryan shift is defined for the l=2 family (|m| <= 2)")
    return -omega_rot * m / 2.0


def load_h2_fixture(path=None):
    """Parameters of the bundled liquid-hydrogen comparison drop."""
    if path is None:
        text = (resources.files("hedrop") / "data" / "h2_fixture.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def q_surface_scattering_h2(fixture=None, method="closed_form"):
    fx = load_h2_fixture() if fixture is None else fixture
    return surface_scattering_q(fx["radius_m"], fx["temperature_K"], fx["wavelength_m"], fx["dielectric"],
                                fx["surface_tension_N_per_m"], method)
