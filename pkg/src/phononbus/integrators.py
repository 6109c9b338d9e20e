"""Explicit Runge-Kutta integrators on complex state vectors.

Two schemes cover every solver need in this package:

* ``dp45``: adaptive Dormand-Prince 5(4) embedded pair (FSAL), the default.
* ``rk4``: classic fixed-step 4th order, kept for convergence studies.

Both operate on flat complex vectors; density matrices are vectorized by
the caller.  The integrators are deterministic: identical inputs produce
bit-identical outputs.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

# Dormand-Prince butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
# 5th-order weights equal the last A row (FSAL); 4th-order weights below
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B5 - _B4  # error estimate weights

MIN_STEP_FRACTION = 1e-14


class StepSizeUnderflow(RuntimeError):
    pass


def _error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray,
                rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.sqrt(np.mean((np.abs(err) / scale) ** 2)))


def dp45(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: np.ndarray,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    max_step: Optional[float] = None,
    on_step: Optional[Callable[[float, np.ndarray], None]] = None,
) -> np.ndarray:
    """Integrate y' = rhs(t, y) from t0 to t1 adaptively; returns y(t1).

    ``on_step(t, y)`` is invoked after every accepted step (not at t0).
    """
    if t1 <= t0:
        raise ValueError(f"need t1 > t0, got {t0} .. {t1}")
    y = np.array(y0, dtype=complex)
    t = t0
    span = t1 - t0
    if max_step is None:
        max_step = span

    f0 = rhs(t, y)
    # initial step from the scale of the first derivative
    scale = atol + rtol * np.max(np.abs(y)) if y.size else atol
    d0 = np.max(np.abs(f0)) if f0.size else 0.0
    h = min(max_step, span / 10, 0.01 * scale / d0 if d0 > 0 else span / 10)
    h = max(h, span * MIN_STEP_FRACTION * 10)

    k = [f0] + [None] * 6
    min_h = span * MIN_STEP_FRACTION
    safety, min_fac, max_fac = 0.9, 0.2, 5.0

    while t < t1:
        if t1 - t <= min_h:
            break  # endpoint reached within roundoff
        if h < min_h:
            raise StepSizeUnderflow(f"step size underflow at t={t!r}")
        last = h >= t1 - t
        if last:
            h = t1 - t
        h = min(h, max_step)

        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]) if a != 0.0)
            k[i] = rhs(t + _C[i] * h, yi)

        y_new = y + h * (
            _B5[0] * k[0] + _B5[2] * k[2] + _B5[3] * k[3] + _B5[4] * k[4] + _B5[5] * k[5]
        )
        err = h * (
            _E[0] * k[0] + _E[2] * k[2] + _E[3] * k[3]
            + _E[4] * k[4] + _E[5] * k[5] + _E[6] * k[6]
        )
        norm = _error_norm(err, y, y_new, rtol, atol)

        if norm <= 1.0:
            t = t1 if last else t + h
            y = y_new
            k[0] = k[6]  # FSAL
            if on_step is not None:
                on_step(t, y)
            fac = max_fac if norm == 0.0 else min(max_fac, safety * norm ** -0.2)
            h *= max(min_fac, fac)
        else:
            h *= max(min_fac, safety * norm ** -0.2)

    return y


def rk4(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: np.ndarray,
    dt: float,
    on_step: Optional[Callable[[float, np.ndarray], None]] = None,
) -> np.ndarray:
    """Classic fixed-step RK4; the final step is shortened to land on t1."""
    if t1 <= t0:
        raise ValueError(f"need t1 > t0, got {t0} .. {t1}")
    if dt <= 0:
        raise ValueError("dt must be positive")
    y = np.array(y0, dtype=complex)
    t = t0
    while t < t1 - 1e-15 * (t1 - t0):
        h = min(dt, t1 - t)
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        if on_step is not None:
            on_step(t, y)
    return y
