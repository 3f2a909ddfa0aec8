import numpy as np
import pytest

from hedrop.errors import IntegrationError
from hedrop.rk import solve


def test_exponential_decay():
    t = np.linspace(0, 5, 11)
    sol = solve(lambda t, y: -y, (0, 5), [1.0], t, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(sol.y[:, 0], np.exp(-t), rtol=1e-8)
    assert sol.stats.accepted > 0


def test_oscillator_dense_output():
    t = np.linspace(0, 20, 401)
    sol = solve(lambda t, y: np.array([y[1], -y[0]]), (0, 20), [1.0, 0.0], t, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(sol.y[:, 0], np.cos(t), atol=1e-7)


def test_order_of_convergence():
    errs = []
    for rtol in (1e-6, 1e-9):
        sol = solve(lambda t, y: -2 * t * y, (0, 2), [1.0], [2.0], rtol=rtol, atol=rtol * 1e-3)
        errs.append(abs(sol.y[-1, 0] - np.exp(-4)))
    assert errs[1] < errs[0] * 1e-2


def test_failing_stage_is_rejected():
    calls = {"n": 0}

    def f(t, y):
        calls["n"] += 1
        if y[0] < 0:
            raise ValueError("negative")
        return -np.sqrt(max(y[0], 0.0)) * 10

    sol = solve(lambda t, y: np.atleast_1d(f(t, y)), (0, 0.1), [1.0], [0.1], rtol=1e-8,
                valid=lambda y: y[0] >= 0)
    assert sol.y[-1, 0] >= 0


def test_underflow_reports_partial():
    # finite-time blow-up at t = 1
    with pytest.raises(IntegrationError) as err:
        solve(lambda t, y: y**2, (0, 2), [1.0], [0.5, 1.5], rtol=1e-8, atol=1e-12)
    partial = err.value.partial
    assert partial.t.tolist() == [0.5]
    assert partial.y[0, 0] == pytest.approx(2.0, rel=1e-6)


def test_bad_t_eval():
    with pytest.raises(ValueError):
        solve(lambda t, y: -y, (0, 1), [1.0], [0.5, 0.2])
