"""l = 2 deformation basis, its rotation representation W and the generators K(s).

The basis functions are extended off the unit sphere as homogeneous
quadratics, phi_m(r) = r^T S_m r with S_m symmetric and traceless. That makes
the action of a rotation exact linear algebra on 3x3 matrices.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

M_VALUES = (-2, -1, 0, 1, 2)
N2 = (32.0 * np.pi / 15.0) ** -0.5
N1 = (8.0 * np.pi / 15.0) ** -0.5
N0 = (16.0 * np.pi / 5.0) ** -0.5

CHART_SWITCH_SIN_BETA = 0.05


def _basis_matrices():
    ez = np.array([0.0, 0.0, 1.0])
    S = {}
    for sign in (1, -1):
        u = np.array([1.0, sign * 1j, 0.0])
        S[2 * sign] = N2 * np.outer(u, u)
        S[sign] = N1 * 0.5 * (np.outer(u, ez) + np.outer(ez, u))
    S[0] = N0 * np.diag([1.0, 1.0, -2.0]).astype(complex)
    return np.array([S[m] for m in M_VALUES])


BASIS = _basis_matrices()  # shape (5, 3, 3), index order m = -2..2
BASIS.setflags(write=False)
_BASIS_NORM2 = np.einsum("mij,mij->m", BASIS.conj(), BASIS).real


def m_index(m):
    if m not in M_VALUES:
        raise ValueError(f"m must be one of {M_VALUES}, got {m!r}")
    return m + 2


def basis_phi(m, r):
    """phi_m(r) for any 3-vector r (homogeneous of degree 2)."""
    r = np.asarray(r, dtype=float)
    return complex(r @ BASIS[m_index(m)] @ r)


def basis_phi_all(r):
    r = np.asarray(r, dtype=float)
    return np.einsum("i,mij,j->m", r, BASIS, r)


def rot_x(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_to_matrix(alpha, beta, gamma):
    """z-y-z convention, g = Rz(alpha) Ry(beta) Rz(gamma)."""
    return rot_z(alpha) @ rot_y(beta) @ rot_z(gamma)


def matrix_to_euler(g):
    """Inverse of :func:`euler_to_matrix` with beta in [0, pi] and alpha, gamma in [0, 2 pi)."""
    g = np.asarray(g, dtype=float)
    beta = float(np.arccos(np.clip(g[2, 2], -1.0, 1.0)))
    if np.hypot(g[0, 2], g[1, 2]) > 1e-12:
        alpha = np.arctan2(g[1, 2], g[0, 2])
        gamma = np.arctan2(g[2, 1], -g[2, 0])
    else:
        # gimbal lock: only alpha +/- gamma is defined, put it all in alpha
        gamma = 0.0
        alpha = np.arctan2(g[1, 0], g[0, 0]) if g[2, 2] > 0 else np.arctan2(-g[1, 0], -g[0, 0])
    return wrap_angle(alpha), beta, wrap_angle(gamma)


def wrap_angle(x):
    """Map to [0, 2 pi); tiny negative angles go to 0 rather than rounding up to 2 pi."""
    w = float(np.mod(x, 2 * np.pi))
    return 0.0 if 2 * np.pi - w < 1e-12 else w


def euler_rate_matrix(alpha, beta):
    """E such that the lab angular velocity is E @ (alpha', beta', gamma')."""
    sa, ca, sb, cb = np.sin(alpha), np.cos(alpha), np.sin(beta), np.cos(beta)
    return np.array([[0.0, -sa, ca * sb], [0.0, ca, sa * sb], [1.0, 0.0, cb]])


def angular_velocity(euler, euler_rates):
    return euler_rate_matrix(euler[0], euler[1]) @ np.asarray(euler_rates, dtype=float)


def hat(v):
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rotation_matrix_W(rotation):
    """l = 2 representation of a rotation in the phi_m basis.

    ``rotation`` is a 3x3 rotation matrix g or Euler angles (alpha, beta,
    gamma). Columns transform body amplitudes into lab amplitudes,
    X_lab = W X_rot, i.e. sum_m X_lab_m phi_m(r) = sum_m X_rot_m phi_m(g^T r).
    """
    g = np.asarray(rotation, dtype=float)
    if g.shape == (3,):
        g = euler_to_matrix(*g)
    rotated = np.einsum("ij,mjk,lk->mil", g, BASIS, g)  # g S_m g^T
    return np.einsum("pij,mij->pm", BASIS.conj(), rotated) / _BASIS_NORM2[:, None]


@lru_cache(maxsize=None)
def _generators(step):
    axes = (rot_x, rot_y, rot_z)
    K = []
    for s in range(3):
        if s == 2:
            K.append(np.diag(1j * np.array(M_VALUES, dtype=float)))
            continue
        rot = axes[s]
        # five-point stencil; W is a trigonometric polynomial so this is accurate to ~1e-12
        dW = (-rotation_matrix_W(rot(2 * step)) + 8 * rotation_matrix_W(rot(step))
              - 8 * rotation_matrix_W(rot(-step)) + rotation_matrix_W(rot(-2 * step))) / (12 * step)
        K.append(-dW.T)
    out = np.array(K)
    out.setflags(write=False)
    return out


def generator_set(step=1e-3):
    """K(1), K(2), K(3) with dW/dt = -sum_s Omega_s K(s)^T W for lab angular velocity Omega.

    K(3) is exact (i m on the diagonal); K(1) and K(2) are differentiated
    numerically from W at the identity.
    """
    return _generators(float(step))


def omega_dot_K(omega, K=None):
    K = generator_set() if K is None else K
    return np.einsum("s,smn->mn", np.asarray(omega, dtype=float), K)


def check_reality(X, atol=1e-12, what="X"):
    """Index (0..4, m = index - 2) of the first violation of X_-m = conj(X_m), or None."""
    X = np.asarray(X, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(X))))
    for i, m in enumerate(M_VALUES):
        if abs(X[i] - np.conj(X[m_index(-m)])) > atol * scale:
            return i
    return None


def real_coordinates(X):
    """(X0, Re X1, Im X1, Re X2, Im X2) from five complex amplitudes."""
    X = np.asarray(X, dtype=complex)
    return np.array([X[2].real, X[3].real, X[3].imag, X[4].real, X[4].imag])


def complex_amplitudes(x):
    """Inverse of :func:`real_coordinates`; the result obeys the reality constraint."""
    x0, a1, b1, a2, b2 = x
    X1, X2 = complex(a1, b1), complex(a2, b2)
    return np.array([X2.conjugate(), X1.conjugate(), complex(x0), X1, X2])
