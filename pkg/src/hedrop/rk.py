"""Dormand-Prince 5(4) integrator with dense output and step statistics.

Small and explicit so that failures can be reported with the partial
trajectory, and so that a right-hand side that raises (e.g. a trial stage
stepping outside a property table) is treated as a rejected step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IntegrationError

_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# dense-output polynomial coefficients (Shampine), columns are powers of theta
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    rhs_failures: int = 0
    evaluations: int = 0

    @property
    def acceptance_ratio(self):
        total = self.accepted + self.rejected
        return self.accepted / total if total else 1.0


@dataclass
class Solution:
    t: np.ndarray
    y: np.ndarray  # shape (len(t), n)
    stats: StepStats = field(default_factory=StepStats)


def _error_norm(err, y0, y1, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def solve(fun, t_span, y0, t_eval, rtol=1e-8, atol=None, h0=None, max_steps=1_000_000,
          min_step_ratio=1e-14, valid=None):
    """Integrate ``y' = fun(t, y)`` and return the solution at ``t_eval``.

    ``valid(y)`` may flag physically invalid stage results; such steps are
    rejected like a failed error test. Raises :class:`IntegrationError` with
    the samples produced so far if the step size underflows.
    """
    t0, t1 = map(float, t_span)
    y = np.array(y0, dtype=float)
    atol = rtol * 1e-3 * np.abs(y) if atol is None else np.broadcast_to(np.asarray(atol, float), y.shape)
    atol = np.where(atol > 0, atol, 1e-300)
    t_eval = np.asarray(t_eval, dtype=float)
    if np.any(np.diff(t_eval) <= 0) or t_eval[0] < t0 or t_eval[-1] > t1:
        raise ValueError("t_eval must be strictly increasing inside t_span")
    stats = StepStats()
    out_t, out_y = [], []
    idx = 0
    while idx < len(t_eval) and t_eval[idx] == t0:
        out_t.append(t0)
        out_y.append(y.copy())
        idx += 1

    def call(t, yy):
        stats.evaluations += 1
        f = np.asarray(fun(t, yy), dtype=float)
        if not np.all(np.isfinite(f)):
            raise FloatingPointError("non-finite derivative")
        return f

    t = t0
    f = call(t, y)
    h = h0 if h0 is not None else _initial_step(f, y, rtol, atol, t1 - t0)
    h_min = min_step_ratio * max(abs(t1), 1.0)
    K = np.empty((7, y.size))
    steps = 0
    just_rejected = False
    while t < t1 and idx < len(t_eval):
        steps += 1
        if steps > max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps at t={t!r}", _partial(out_t, out_y, stats))
        h = min(h, t1 - t)
        if h < h_min:
            raise IntegrationError(f"step size underflow at t={t!r} (h={h!r})", _partial(out_t, out_y, stats))
        try:
            y_new, K = _step(call, t, y, f, h, K)
            if valid is not None and not valid(y_new):
                raise FloatingPointError("invalid state")
            err = _error_norm(h * (K.T @ _E), y, y_new, rtol, atol)
        except (ArithmeticError, ValueError):
            stats.rhs_failures += 1
            stats.rejected += 1
            just_rejected = True
            h *= 0.25
            continue
        if err <= 1.0:
            t_new = t + h
            while idx < len(t_eval) and t_eval[idx] <= t_new:
                theta = (t_eval[idx] - t) / h
                out_t.append(t_eval[idx])
                out_y.append(_dense(y, h, K, theta))
                idx += 1
            t, y, f = t_new, y_new, K[6].copy()
            stats.accepted += 1
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            if just_rejected:
                factor = min(factor, 1.0)  # no growth straight after a rejection
            just_rejected = False
        else:
            stats.rejected += 1
            just_rejected = True
            factor = max(0.2, 0.9 * err ** -0.2)
        h *= factor
    return Solution(np.array(out_t), np.array(out_y), stats)


def _step(call, t, y, f, h, K):
    K = K.copy()
    K[0] = f
    for s in range(1, 7):
        dy = h * np.dot(_A[s], K[:s])
        K[s] = call(t + _C[s] * h, y + dy)
    y_new = y + h * (K[:6].T @ _B[:6])
    return y_new, K


def _dense(y, h, K, theta):
    powers = np.array([theta, theta**2, theta**3, theta**4])
    return y + h * (K.T @ (_P @ powers))


def _initial_step(f, y, rtol, atol, span):
    scale = atol + rtol * np.abs(y)
    d0 = np.sqrt(np.mean((y / scale) ** 2))
    d1 = np.sqrt(np.mean((f / scale) ** 2))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(h, abs(span))


def _partial(out_t, out_y, stats):
    return Solution(np.array(out_t), np.array(out_y), stats)
