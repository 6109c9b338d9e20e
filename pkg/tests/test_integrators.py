import numpy as np
import pytest

from phononbus.integrators import StepSizeUnderflow, dp45, rk4


def test_dp45_exponential_decay():
    y = dp45(lambda t, v: -v, 0.0, 1.0, np.array([1.0 + 0j]), rtol=1e-10, atol=1e-12)
    assert abs(y[0] - np.exp(-1.0)) < 1e-10


def test_dp45_oscillation_norm_and_phase():
    omega = 7.3
    y = dp45(lambda t, v: 1j * omega * v, 0.0, 2.0, np.array([1.0 + 0j]),
             rtol=1e-10, atol=1e-12)
    assert abs(abs(y[0]) - 1.0) < 1e-9
    assert abs(y[0] - np.exp(1j * omega * 2.0)) < 1e-8


def test_dp45_tolerance_controls_error():
    exact = np.exp(-2.0)
    errs = []
    for rtol in (1e-4, 1e-8):
        y = dp45(lambda t, v: -v, 0.0, 2.0, np.array([1.0 + 0j]), rtol=rtol, atol=1e-14)
        errs.append(abs(y[0] - exact))
    assert errs[1] < errs[0]


def test_dp45_on_step_times_monotone():
    ts = []
    dp45(lambda t, v: -v, 0.0, 1.0, np.array([1.0 + 0j]),
         on_step=lambda t, v: ts.append(t))
    assert ts[-1] == 1.0
    assert np.all(np.diff(ts) > 0)


def test_dp45_step_underflow_raises():
    # derivative grows without bound faster than any step can resolve
    def blowup(t, v):
        return v / (1.0 - t) ** 4

    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(StepSizeUnderflow, match="t="):
            dp45(blowup, 0.0, 1.0, np.array([1.0 + 0j]), rtol=1e-10, atol=1e-12)


def test_dp45_rejects_empty_span():
    with pytest.raises(ValueError):
        dp45(lambda t, v: -v, 1.0, 1.0, np.array([1.0 + 0j]))


def test_rk4_fourth_order_convergence():
    # halving dt should shrink the error by about 2^4
    exact = np.exp(-1.0)
    e1 = abs(rk4(lambda t, v: -v, 0.0, 1.0, np.array([1.0 + 0j]), dt=0.1)[0] - exact)
    e2 = abs(rk4(lambda t, v: -v, 0.0, 1.0, np.array([1.0 + 0j]), dt=0.05)[0] - exact)
    ratio = e1 / e2
    assert 12 < ratio < 20


def test_rk4_lands_exactly_on_endpoint():
    ts = []
    rk4(lambda t, v: 0 * v, 0.0, 1.0, np.array([1.0 + 0j]), dt=0.3,
        on_step=lambda t, v: ts.append(t))
    assert ts[-1] == 1.0
