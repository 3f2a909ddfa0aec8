"""State types and the rotor-vibration Lagrangian (numpy reference implementation).

Lengths are in units of the drop radius. :class:`RovibParams` carries the
density, surface tension and moment of inertia in those units; the default
(rho = sigma = 1, I = 8 pi / 15) fixes the time unit to sqrt(rho R^3 / sigma).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConstraintViolation, UnsupportedRegimeError
from .algebra import (M_VALUES, N0, basis_phi_all, check_reality, complex_amplitudes, euler_rate_matrix,
                      euler_to_matrix, generator_set, omega_dot_K, real_coordinates, rotation_matrix_W, wrap_angle)

AMPLITUDE_GUARD = 0.1


@dataclass(frozen=True)
class RovibParams:
    density: float = 1.0
    surface_tension: float = 1.0
    inertia: float = 8.0 * np.pi / 15.0

    @property
    def omega_vib(self):
        """Rayleigh l = 2 frequency, sqrt(8 sigma / rho)."""
        return float(np.sqrt(8.0 * self.surface_tension / self.density))

    @classmethod
    def dimensionless(cls):
        return cls()


@dataclass(frozen=True)
class PhysicalScale:
    """Conversion between SI and the internal R = rho = sigma = 1 units."""

    radius: float
    density: float
    surface_tension: float

    @classmethod
    def from_drop(cls, drop):
        return cls(drop.radius, drop.iso.density, drop.iso.surface_tension)

    @property
    def time(self):
        return float(np.sqrt(self.density * self.radius**3 / self.surface_tension))

    def omega_to_internal(self, omega):
        return omega * self.time

    def omega_to_si(self, omega):
        return omega / self.time

    def length_to_si(self, x):
        return x * self.radius


@dataclass(frozen=True)
class EulerAngles:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= np.pi:
            raise ValueError(f"beta must lie in [0, pi], got {self.beta!r}")
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))
        object.__setattr__(self, "gamma", wrap_angle(self.gamma))

    def as_array(self):
        return np.array([self.alpha, self.beta, self.gamma])

    def matrix(self):
        return euler_to_matrix(self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class DeformationAmplitudes:
    """Five complex amplitudes, index order m = -2..2, obeying X_-m = conj(X_m)."""

    X: tuple

    def __post_init__(self):
        X = np.asarray(self.X, dtype=complex)
        if X.shape != (5,):
            raise ValueError("need five amplitudes (m = -2..2)")
        bad = check_reality(X)
        if bad is not None:
            raise ConstraintViolation(f"reality constraint X_-m = conj(X_m) violated at index {bad} "
                                      f"(m = {M_VALUES[bad]})", index=bad)
        object.__setattr__(self, "X", tuple(complex(v) for v in X))

    @classmethod
    def from_real(cls, x):
        return cls(tuple(complex_amplitudes(x)))

    @classmethod
    def zero(cls):
        return cls((0j,) * 5)

    def as_array(self):
        return np.array(self.X, dtype=complex)

    def real(self):
        return real_coordinates(self.as_array())

    def __getitem__(self, m):
        return self.X[m + 2]


@dataclass(frozen=True)
class RotorVibState:
    euler: EulerAngles
    euler_rates: tuple
    X_rot: DeformationAmplitudes
    X_rot_rates: DeformationAmplitudes

    @classmethod
    def from_arrays(cls, euler, euler_rates, X, X_rates):
        X = X if isinstance(X, DeformationAmplitudes) else DeformationAmplitudes(tuple(X))
        Xd = X_rates if isinstance(X_rates, DeformationAmplitudes) else DeformationAmplitudes(tuple(X_rates))
        return cls(EulerAngles(*euler), tuple(float(v) for v in euler_rates), X, Xd)

    @property
    def omega(self):
        """Lab-frame angular velocity."""
        e = self.euler
        return euler_rate_matrix(e.alpha, e.beta) @ np.asarray(self.euler_rates)

    def coordinates(self):
        """Generalized coordinates q (8) and velocities q' (8)."""
        q = np.concatenate([self.euler.as_array(), self.X_rot.real()])
        qd = np.concatenate([self.euler_rates, self.X_rot_rates.real()])
        return q, qd


def guard_amplitudes(X):
    if np.max(np.abs(np.asarray(X))) > AMPLITUDE_GUARD:
        raise UnsupportedRegimeError(f"|X|/R exceeds {AMPLITUDE_GUARD}: outside the linear deformation regime")


def lagrangian_lab(g, omega, X, Xd, params=RovibParams()):
    """L in lab variables: rotation g, lab angular velocity, body amplitudes X and rates."""
    rho, sigma, inertia = params.density, params.surface_tension, params.inertia
    W = rotation_matrix_W(g)
    X_lab, D_lab = W @ X, W @ Xd
    omega = np.asarray(omega, dtype=float)
    rigid = 0.5 * inertia * omega @ omega
    kinetic = 0.25 * rho * np.sum(np.abs(Xd) ** 2)
    bulge = -0.5 * inertia * np.sum(X_lab * basis_phi_all(omega)).real
    cross = 0.25 * rho * (D_lab @ omega_dot_K(omega) @ X_lab.conj()).real
    potential = -2.0 * sigma * np.sum(np.abs(X) ** 2)
    return float(rigid + kinetic + bulge + cross + potential)


def lagrangian_rotating(omega_body, X, Xd, params=RovibParams()):
    """Same Lagrangian written with the body-frame angular velocity g^T Omega."""
    rho, sigma, inertia = params.density, params.surface_tension, params.inertia
    w = np.asarray(omega_body, dtype=float)
    return float(0.5 * inertia * w @ w + 0.25 * rho * np.sum(np.abs(Xd) ** 2)
                 - 0.5 * inertia * np.sum(X * basis_phi_all(w)).real
                 + 0.25 * rho * (Xd @ omega_dot_K(w) @ np.conj(X)).real
                 - 2.0 * sigma * np.sum(np.abs(X) ** 2))


def lagrangian(state, params=RovibParams()):
    """Lagrangian of a :class:`RotorVibState`."""
    return lagrangian_lab(state.euler.matrix(), state.omega, state.X_rot.as_array(),
                          state.X_rot_rates.as_array(), params)


def lagrangian_q(q, qd, params=RovibParams()):
    """Lagrangian as a function of the generalized coordinates (Euler chart)."""
    q, qd = np.asarray(q, float), np.asarray(qd, float)
    g = euler_to_matrix(*q[:3])
    omega = euler_rate_matrix(q[0], q[1]) @ qd[:3]
    return lagrangian_lab(g, omega, complex_amplitudes(q[3:]), complex_amplitudes(qd[3:]), params)


def equilibrium_bulge(omega_z, params=RovibParams()):
    """Stationary amplitudes under steady spin about z: only X_0 = I N0 Omega^2 / (4 sigma)."""
    x0 = params.inertia * N0 * omega_z**2 / (4.0 * params.surface_tension)
    X = DeformationAmplitudes((0j, 0j, complex(x0), 0j, 0j))
    guard_amplitudes(X.as_array())
    return X


def equatorial_bulge(X):
    """Radius change at the equator, sum_m X_m phi_m(1, 0, 0)."""
    X = X.as_array() if isinstance(X, DeformationAmplitudes) else np.asarray(X)
    return float(np.sum(X * basis_phi_all([1.0, 0.0, 0.0])).real)


def equilibrium_bulge_si(drop, omega_z):
    """Equatorial radius increase (m) of a drop spinning at ``omega_z`` (rad/s)."""
    scale = PhysicalScale.from_drop(drop)
    X = equilibrium_bulge(scale.omega_to_internal(omega_z))
    return scale.length_to_si(equatorial_bulge(X))


def generators():
    return generator_set()
