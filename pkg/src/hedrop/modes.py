"""Vibrational spectrum of a liquid drop: capillary surface modes and bulk sound modes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import spherical_jn

from .constants import HBAR
from .heprops import IsotopeProperties


@dataclass(frozen=True)
class Drop:
    """A levitated drop. Atom number and moment of inertia are derived."""

    iso: IsotopeProperties
    radius: float
    temperature: float = 0.3

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature!r}")

    @property
    def atom_count(self):
        return 4.0 * np.pi / 3.0 * self.radius**3 * self.iso.density / self.iso.atomic_mass

    @property
    def moment_of_inertia(self):
        return 8.0 * np.pi / 15.0 * self.iso.density * self.radius**5

    @property
    def mass(self):
        return 4.0 * np.pi / 3.0 * self.radius**3 * self.iso.density

    def replace(self, **changes):
        fields = dict(iso=self.iso, radius=self.radius, temperature=self.temperature)
        fields.update(changes)
        return Drop(**fields)


@dataclass(frozen=True)
class SurfaceMode:
    l: int
    m: int
    frequency: float  # rad/s
    zpf: float = float("nan")  # X_ZPF in m, l = 2 only
    equator_zpf: float = float("nan")  # delta R_ZPF in m


@dataclass(frozen=True)
class SoundMode:
    n: int
    l: int
    frequency: float  # rad/s
    wavenumber: float  # 1/m


def surface_mode_frequency(drop, l):
    """Rayleigh capillary frequency omega_l = sqrt(l(l-1)(l+2) sigma / (rho R^3))."""
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")
    iso = drop.iso
    return float(np.sqrt(l * (l - 1) * (l + 2) * iso.surface_tension / (iso.density * drop.radius**3)))


def surface_mode(drop, l, m=0):
    if abs(m) > l:
        raise ValueError(f"|m| must not exceed l ({m=}, {l=})")
    omega = surface_mode_frequency(drop, l)
    if l == 2:
        x, dr = zpf_amplitude(drop)
        return SurfaceMode(l, m, omega, x, dr)
    return SurfaceMode(l, m, omega)


@lru_cache(maxsize=4096)
def spherical_bessel_zero(l, n):
    """n-th positive zero of the spherical Bessel function j_l.

    Zeros of j_l are separated by more than pi, so a scan with step pi/4
    starting below the first zero (which lies above l) brackets every one.
    """
    if n < 1 or l < 0:
        raise ValueError(f"need n >= 1 and l >= 0, got {n=}, {l=}")
    if l == 0:
        return n * np.pi

    def f(x):
        return spherical_jn(l, x)

    step = np.pi / 4
    x = max(float(l), 1.0)
    fx = f(x)
    found = 0
    for _ in range(100 * (n + l + 10)):
        x_next = x + step
        f_next = f(x_next)
        if fx == 0.0 or fx * f_next < 0:
            found += 1
            if found == n:
                return brentq(f, x, x_next, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
        x, fx = x_next, f_next
    raise RuntimeError(f"zero {n} of j_{l} not bracketed")


def sound_mode_frequency(drop, n, l):
    """Compressional mode with a pressure node at the free surface, j_l(kR) = 0."""
    k = spherical_bessel_zero(l, n) / drop.radius
    return SoundMode(n=n, l=l, frequency=drop.iso.sound_speed * k, wavenumber=k)


def zpf_amplitude(drop):
    """Zero-point amplitude X_ZPF of the l=2, m=0 mode and the equatorial radius change."""
    omega = surface_mode_frequency(drop, 2)
    x_zpf = np.sqrt(HBAR * omega / (8.0 * drop.iso.surface_tension))
    return float(x_zpf), float(np.sqrt(5.0 / (16.0 * np.pi)) * x_zpf)


def spectrum(drop, l_max, n_max):
    """Surface branch (n=0, l=2..l_max) and sound branches (n=1..n_max, l=0..l_max).

    Returns a list of ``(branch, n, l, omega)`` tuples sorted by (n, l).
    """
    if l_max < 0 or n_max < 0:
        raise ValueError("l_max and n_max must be non-negative")
    rows = [("surface", 0, l, surface_mode_frequency(drop, l)) for l in range(2, l_max + 1)]
    for n in range(1, n_max + 1):
        rows += [("sound", n, l, sound_mode_frequency(drop, n, l).frequency) for l in range(l_max + 1)]
    return rows
