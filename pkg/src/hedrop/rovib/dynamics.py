"""Equations of motion, integration and linearization of the rotor-vibration model.

The Euler-Lagrange equations are obtained by automatic differentiation of the
Lagrangian in the generalized coordinates
q = (alpha, beta, gamma, X0, Re X1, Im X1, Re X2, Im X2):

    M q'' = dL/dq - (d^2 L / dq' dq) q',   M = d^2 L / dq'^2.

Two Euler charts cover the rotation group: chart k describes g_lab = C_k g
with C_0 = identity and C_1 = Rx(pi/2). Because L is invariant under global
rotations it has the same form in every chart, so charts only differ in how
states are converted to lab quantities.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

import jax
import jax.numpy as jnp
import numpy as np
from scipy.integrate import solve_ivp

from ..errors import IntegrationError
from .algebra import (BASIS, CHART_SWITCH_SIN_BETA, M_VALUES, complex_amplitudes, euler_rate_matrix,
                      euler_to_matrix, generator_set, matrix_to_euler, rot_x, rotation_matrix_W)
from .lagrangian import RotorVibState, RovibParams

jax.config.update("jax_enable_x64", True)

CHARTS = (np.eye(3), rot_x(np.pi / 2))
TRAJECTORY_HEADER = ("t", "alpha", "beta", "gamma", "Omega_x", "Omega_y", "Omega_z",
                     "ReX0", "ReX1", "ImX1", "ReX2", "ImX2", "energy", "Lx", "Ly", "Lz")

_BASIS = jnp.asarray(BASIS)
_BASIS_RE = jnp.asarray(BASIS.real)
_BASIS_IM = jnp.asarray(BASIS.imag)
_BASIS_NORM2 = jnp.asarray(np.einsum("mij,mij->m", BASIS.conj(), BASIS).real)


def _real_basis_einsum(omega):
    return jnp.einsum("i,mij,j->m", omega, _BASIS_RE, omega) + 1j * jnp.einsum("i,mij,j->m", omega, _BASIS_IM, omega)


def _jrot(axis, a):
    c, s = jnp.cos(a), jnp.sin(a)
    one, zero = jnp.ones_like(a), jnp.zeros_like(a)
    if axis == "x":
        rows = [[one, zero, zero], [zero, c, -s], [zero, s, c]]
    elif axis == "y":
        rows = [[c, zero, s], [zero, one, zero], [-s, zero, c]]
    else:
        rows = [[c, -s, zero], [s, c, zero], [zero, zero, one]]
    return jnp.array(rows)


def _jW(g):
    # real and imaginary parts kept separate so gradients with respect to g stay real
    re = jnp.einsum("ij,mjk,lk->mil", g, _BASIS_RE, g)
    im = jnp.einsum("ij,mjk,lk->mil", g, _BASIS_IM, g)
    w_re = jnp.einsum("pij,mij->pm", _BASIS_RE, re) + jnp.einsum("pij,mij->pm", _BASIS_IM, im)
    w_im = jnp.einsum("pij,mij->pm", _BASIS_RE, im) - jnp.einsum("pij,mij->pm", _BASIS_IM, re)
    return (w_re + 1j * w_im) / _BASIS_NORM2[:, None]


def _jcomplex(x):
    X1 = jax.lax.complex(x[1], x[2])
    X2 = jax.lax.complex(x[3], x[4])
    return jnp.stack([jnp.conj(X2), jnp.conj(X1), jax.lax.complex(x[0], jnp.zeros_like(x[0])), X1, X2])


def _abs2(z):
    return jnp.real(z) ** 2 + jnp.imag(z) ** 2


def _lagrangian_from(g, omega, x, xd, params, K):
    rho, sigma, inertia = params
    X, Xd = _jcomplex(x), _jcomplex(xd)
    W = _jW(g)
    X_lab, D_lab = W @ X, W @ Xd
    phi = _real_basis_einsum(omega)
    KO = jnp.einsum("s,smn->mn", omega, K.real) + 1j * jnp.einsum("s,smn->mn", omega, K.imag)
    return (0.5 * inertia * omega @ omega
            + 0.25 * rho * jnp.sum(_abs2(Xd))
            - 0.5 * inertia * jnp.real(jnp.sum(X_lab * phi))
            + 0.25 * rho * jnp.real(D_lab @ KO @ jnp.conj(X_lab))
            - 2.0 * sigma * jnp.sum(_abs2(X)))


def _euler_omega(q, qd):
    a, b = q[0], q[1]
    E = jnp.array([[0.0, -jnp.sin(a), jnp.cos(a) * jnp.sin(b)],
                   [0.0, jnp.cos(a), jnp.sin(a) * jnp.sin(b)],
                   [1.0, 0.0, jnp.cos(b)]])
    return E @ qd[:3]


def _chart_lagrangian(q, qd, params, K):
    g = _jrot("z", q[0]) @ _jrot("y", q[1]) @ _jrot("z", q[2])
    return _lagrangian_from(g, _euler_omega(q, qd), q[3:], qd[3:], params, K)


@lru_cache(maxsize=None)
def _compiled(params):
    p = (params.density, params.surface_tension, params.inertia)
    K = jnp.asarray(generator_set())

    def L(q, qd):
        return _chart_lagrangian(q, qd, p, K)

    dL_dq = jax.grad(L, argnums=0)
    dL_dqd = jax.grad(L, argnums=1)
    eye = jnp.eye(8)

    def accel(q, qd):
        # L is a quadratic form in q', so the momentum is linear in q' and the
        # mass matrix is the momentum evaluated on unit velocities
        mass = jax.vmap(lambda e: dL_dqd(q, e))(eye)
        _, mixed_qd = jax.jvp(lambda qq: dL_dqd(qq, qd), (q,), (qd,))
        return jnp.linalg.solve(mass, dL_dq(q, qd) - mixed_qd)

    def rhs(y):
        q, qd = y[:8], y[8:]
        return jnp.concatenate([qd, accel(q, qd)])

    def energy(y):
        q, qd = y[:8], y[8:]
        return qd @ dL_dqd(q, qd) - L(q, qd)

    def momenta(y):
        return dL_dqd(y[:8], y[8:])

    return dict(L=jax.jit(L), rhs=jax.jit(rhs), energy=jax.jit(energy), momenta=jax.jit(momenta),
                accel=jax.jit(accel))


def equations_of_motion(q, qd, params=RovibParams()):
    """Generalized accelerations q'' for the Euler chart coordinates."""
    return np.asarray(_compiled(params)["accel"](jnp.asarray(q, float), jnp.asarray(qd, float)))


def state_derivatives(state, params=RovibParams()):
    """Time derivatives of every field of a :class:`RotorVibState`.

    Returns (euler_rates, euler_accelerations, X_rates, X_accelerations) with
    the amplitude parts as five complex numbers (m = -2..2).
    """
    q, qd = state.coordinates()
    qdd = equations_of_motion(q, qd, params)
    return (qd[:3], qdd[:3], complex_amplitudes(qd[3:]), complex_amplitudes(qdd[3:]))


def energy(q, qd, params=RovibParams()):
    return float(_compiled(params)["energy"](jnp.concatenate([jnp.asarray(q, float), jnp.asarray(qd, float)])))


def lab_angular_momentum(q, qd, params=RovibParams(), chart=0):
    """Noether charge of global rotations, J = C_k E^-T p_euler."""
    y = jnp.concatenate([jnp.asarray(q, float), jnp.asarray(qd, float)])
    p = np.asarray(_compiled(params)["momenta"](y))[:3]
    E = euler_rate_matrix(q[0], q[1])
    return CHARTS[chart] @ np.linalg.solve(E.T, p)


def lab_quantities(q, qd, chart=0):
    """Lab rotation matrix and angular velocity for chart coordinates."""
    C = CHARTS[chart]
    g = C @ euler_to_matrix(*q[:3])
    omega = C @ (euler_rate_matrix(q[0], q[1]) @ np.asarray(qd[:3]))
    return g, omega


def change_chart(q, qd, chart_from, chart_to):
    """Re-express chart coordinates (and rates) in another chart."""
    g, omega = lab_quantities(q, qd, chart_from)
    C = CHARTS[chart_to]
    angles = np.array(matrix_to_euler(C.T @ g))
    E = euler_rate_matrix(angles[0], angles[1])
    rates = np.linalg.solve(E, C.T @ omega)
    # keep the chart's angles continuous with the source where possible
    q_new = np.concatenate([angles, q[3:]])
    qd_new = np.concatenate([rates, qd[3:]])
    return q_new, qd_new


def pick_chart(q, chart=0):
    if abs(np.sin(q[1])) >= CHART_SWITCH_SIN_BETA:
        return chart
    return 1 - chart


@dataclass
class RovibTrajectory:
    t: np.ndarray
    q: np.ndarray  # chart coordinates, rows per sample
    qd: np.ndarray
    charts: np.ndarray
    params: RovibParams
    energy: np.ndarray = field(default=None)
    L_lab: np.ndarray = field(default=None)
    omega_lab: np.ndarray = field(default=None)
    euler_lab: np.ndarray = field(default=None)
    chart_switches: int = 0
    nfev: int = 0

    def __post_init__(self):
        n = len(self.t)
        self.energy = np.array([energy(self.q[i], self.qd[i], self.params) for i in range(n)])
        self.L_lab = np.array([lab_angular_momentum(self.q[i], self.qd[i], self.params, int(self.charts[i]))
                               for i in range(n)]).reshape(n, 3)
        lab = [lab_quantities(self.q[i], self.qd[i], int(self.charts[i])) for i in range(n)]
        self.omega_lab = np.array([o for _, o in lab]).reshape(n, 3)
        self.euler_lab = np.array([matrix_to_euler(g) for g, _ in lab]).reshape(n, 3)

    def rotation(self, i):
        return lab_quantities(self.q[i], self.qd[i], int(self.charts[i]))[0]

    @property
    def X(self):
        """Body-frame complex amplitudes, shape (n, 5)."""
        return np.array([complex_amplitudes(x) for x in self.q[:, 3:]])

    def max_energy_drift(self):
        e0 = self.energy[0]
        scale = abs(e0) if e0 != 0 else 1.0
        return float(np.max(np.abs(self.energy - e0)) / scale)

    def max_angular_momentum_drift(self):
        L0 = self.L_lab[0]
        scale = np.linalg.norm(L0) or 1.0
        return float(np.max(np.linalg.norm(self.L_lab - L0, axis=1)) / scale)

    def rows(self):
        for i, t in enumerate(self.t):
            yield (t, *self.euler_lab[i], *self.omega_lab[i], *self.q[i, 3:], self.energy[i], *self.L_lab[i])


def integrate(state0, params=RovibParams(), t_end=10.0, tol=1e-10, n_samples=201, max_switches=10_000,
              atol_ratio=1e-3):
    """Integrate the coupled rotor-vibration dynamics with DOP853.

    Samples are uniform in t. The Euler chart is switched whenever
    |sin beta| drops below 0.05 in the active chart.
    """
    if not 1e-12 < tol < 1e-3:
        raise ValueError(f"tol must lie in (1e-12, 1e-3), got {tol!r}")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    q, qd = state0.coordinates() if isinstance(state0, RotorVibState) else map(np.asarray, state0)
    q, qd = np.asarray(q, float), np.asarray(qd, float)
    chart = pick_chart(q, 0)
    if chart != 0:
        q, qd = change_chart(q, qd, 0, chart)
    fns = _compiled(params)
    rhs_jit = fns["rhs"]

    def rhs(t, y):
        return np.asarray(rhs_jit(y))

    def gimbal(t, y):
        return abs(np.sin(y[1])) - CHART_SWITCH_SIN_BETA

    gimbal.terminal = True
    gimbal.direction = -1

    t_samples = np.linspace(0.0, t_end, n_samples)
    out_t, out_y, out_chart = [], [], []
    t, y = 0.0, np.concatenate([q, qd])
    switches, nfev = 0, 0
    scale = max(1.0, float(np.max(np.abs(y))))
    while True:
        sol = solve_ivp(rhs, (t, t_end), y, method="DOP853", rtol=tol, atol=tol * atol_ratio * scale,
                        events=gimbal, dense_output=True)
        nfev += sol.nfev
        if sol.status < 0:
            raise IntegrationError(f"integration failed at t={sol.t[-1]!r}: {sol.message}",
                                   _partial(out_t, out_y, out_chart, params))
        t_stop = sol.t[-1]
        take = t_samples[(t_samples >= t) & (t_samples <= t_stop)]
        if out_t:
            take = take[take > out_t[-1]]
        for ts in take:
            out_t.append(ts)
            out_y.append(sol.sol(ts))
            out_chart.append(chart)
        if sol.status == 0:
            break
        switches += 1
        if switches > max_switches:
            raise IntegrationError("too many chart switches", _partial(out_t, out_y, out_chart, params))
        y_end = sol.y[:, -1]
        new_chart = 1 - chart
        q_new, qd_new = change_chart(y_end[:8], y_end[8:], chart, new_chart)
        if abs(np.sin(q_new[1])) < CHART_SWITCH_SIN_BETA:
            raise IntegrationError("chart switch failed to leave the gimbal region",
                                   _partial(out_t, out_y, out_chart, params))
        t, y, chart = t_stop, np.concatenate([q_new, qd_new]), new_chart
    Y = np.array(out_y)
    return RovibTrajectory(np.array(out_t), Y[:, :8], Y[:, 8:], np.array(out_chart), params,
                           chart_switches=switches, nfev=nfev)


def _partial(out_t, out_y, out_chart, params):
    if not out_t:
        return None
    Y = np.array(out_y)
    return RovibTrajectory(np.array(out_t), Y[:, :8], Y[:, 8:], np.array(out_chart), params)


def spin_equilibrium_state(omega, params=RovibParams()):
    """Steady spin about the body z axis, which is placed along lab x to avoid the gimbal."""
    from .lagrangian import equilibrium_bulge
    X = equilibrium_bulge(omega, params)
    q = np.concatenate([[0.0, np.pi / 2, 0.0], X.real()])
    qd = np.concatenate([[0.0, 0.0, omega], np.zeros(5)])
    return q, qd


def write_trajectory_csv(traj, stream=None):
    own = stream is None
    buf = io.StringIO() if own else stream
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for row in traj.rows():
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue() if own else None


# ---------------------------------------------------------------- linearization

@dataclass(frozen=True)
class BryanSpectrum:
    omega_z: float
    omega_vib: float
    frequencies: dict  # m -> rotating-frame frequency
    multiplicity: dict  # m -> number of eigenvalues assigned to that m

    @property
    def slopes(self):
        """(omega_m - omega_vib) / Omega_z for m = -2..2."""
        return {m: (w - self.omega_vib) / self.omega_z for m, w in self.frequencies.items()}


@lru_cache(maxsize=None)
def _rotating_lagrangian(params):
    p = (params.density, params.surface_tension, params.inertia)
    K = jnp.asarray(generator_set())

    def h_of(theta):
        return _jrot("z", theta[2]) @ _jrot("y", theta[1]) @ _jrot("x", theta[0])

    def L(q, qd, omega_z):
        # g_lab = Rz(Omega t) h(theta); after undoing the reference rotation the
        # Lagrangian depends on time only through h, so it is autonomous.
        theta, thetad = q[:3], qd[:3]
        h, hdot = jax.jvp(h_of, (theta,), (thetad,))
        S = hdot @ h.T
        omega = jnp.array([S[2, 1], S[0, 2], S[1, 0]]) + jnp.array([0.0, 0.0, 1.0]) * omega_z
        return _lagrangian_from(h, omega, q[3:], qd[3:], p, K)

    def matrices(q0, qd0, w):
        Mm = jax.hessian(L, argnums=1)(q0, qd0, w)
        cross = jax.jacfwd(jax.grad(L, argnums=1), argnums=0)(q0, qd0, w)  # d^2 L / dq' dq
        Kq = -jax.hessian(L, argnums=0)(q0, qd0, w)
        return Mm, cross - cross.T, Kq

    return jax.jit(matrices)


def linearized_matrices(omega_z, params=RovibParams()):
    """Mass, gyroscopic and stiffness matrices about steady spin with the equilibrium bulge."""
    from .lagrangian import equilibrium_bulge
    X = equilibrium_bulge(omega_z, params)
    q0 = jnp.concatenate([jnp.zeros(3), jnp.asarray(X.real())])
    Mm, G, Kq = _rotating_lagrangian(params)(q0, jnp.zeros(8), jnp.asarray(omega_z, dtype=float))
    return np.asarray(Mm), np.asarray(G), np.asarray(Kq)


def linearized_spectrum(omega_z, params=RovibParams(), window=0.5):
    """Rotating-frame frequencies of the five l = 2 modes about steady spin.

    Modes are read from the quadratic eigenproblem M q'' + G q' + K q = 0
    with q ~ exp(-i nu t), nu > 0, and labelled by the m whose amplitude
    dominates the eigenvector. ``window`` (relative to omega_vib) selects
    the vibrational modes from the rigid-body ones.
    """
    Mm, G, Kq = linearized_matrices(omega_z, params)
    n = Mm.shape[0]
    A = np.block([[np.zeros((n, n)), np.eye(n)], [-np.linalg.solve(Mm, Kq), -np.linalg.solve(Mm, G)]])
    lam, vec = np.linalg.eig(A)
    w_vib = params.omega_vib
    freqs, counts = {}, {}
    for k in range(lam.size):
        nu = -lam[k].imag  # lambda = -i nu
        if nu <= 0 or abs(nu - w_vib) > window * w_vib:
            continue
        v = vec[:n, k]
        x = v[3:]
        amp = {0: abs(x[0])}
        for m, (re_i, im_i) in ((1, (1, 2)), (2, (3, 4))):
            amp[m] = abs(x[re_i] + 1j * x[im_i])
            amp[-m] = abs(x[re_i] - 1j * x[im_i])
        m = max(amp, key=amp.get)
        counts[m] = counts.get(m, 0) + 1
        freqs.setdefault(m, nu)
    missing = [m for m in M_VALUES if m not in freqs]
    if omega_z == 0:
        freqs = {m: float(np.mean([-l.imag for l in lam if abs(-l.imag - w_vib) < window * w_vib]))
                 for m in M_VALUES}
        counts = {m: 1 for m in M_VALUES}
    elif missing:
        raise IntegrationError(f"could not resolve modes m = {missing}; multiplicities {counts}")
    return BryanSpectrum(float(omega_z), w_vib, {m: float(freqs[m]) for m in M_VALUES}, counts)


def transport_residual(q, qd, chart=0, dt=1e-3):
    """|| dW/dt + sum_s Omega_s K(s)^T W || with dW/dt from a five-point difference along q + q' t."""
    q, qd = np.asarray(q, float), np.asarray(qd, float)
    C = CHARTS[chart]

    def W_at(h):
        return rotation_matrix_W(C @ euler_to_matrix(*(q[:3] + h * qd[:3])))

    dW = (-W_at(2 * dt) + 8 * W_at(dt) - 8 * W_at(-dt) + W_at(-2 * dt)) / (12 * dt)
    g, omega = lab_quantities(q, qd, chart)
    K = generator_set()
    return float(np.linalg.norm(dW + np.einsum("s,snm->mn", omega, K) @ rotation_matrix_W(g)))
