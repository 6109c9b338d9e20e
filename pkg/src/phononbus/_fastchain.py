"""Compiled inner loop for the qubit-phonon-spin chain protocol.

The chain Hamiltonian conserves excitation number and the decay channels
feed only the global ground state, so for initial states with at most one
excitation the full master equation closes exactly on the four states
{vacuum, source-qubit excited, one phonon, spin excited}.  Delay scans
integrate this 4-dimensional reduction with a numba-compiled
Dormand-Prince loop (same tableau and error control as
``integrators.dp45``); the public transfer API runs the full-space engine
and the test suite checks the two paths against each other.

Falls back to a pure-python implementation of the identical algorithm
when numba is unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _sech(x):
    # overflow-safe sech
    ax = abs(x)
    e = np.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


@njit(cache=True)
def _rhs(L0, K1, K2, g1, tau1, g2, tau2, t, v, out):
    e1 = g1 * _sech(2.0 * g1 * (t - tau1))
    e2 = g2 * _sech(2.0 * g2 * (t - tau2))
    n = v.shape[0]
    for i in range(n):
        acc = 0.0 + 0.0j
        for j in range(n):
            acc += (L0[i, j] + e1 * K1[i, j] + e2 * K2[i, j]) * v[j]
        out[i] = acc


@njit(cache=True)
def _integrate(L0, K1, K2, g1, tau1, g2, tau2, v0, t0, t1, rtol, atol):
    # Dormand-Prince 5(4), identical coefficients to integrators.dp45
    c2, c3, c4, c5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
    a21 = 1.0 / 5.0
    a31, a32 = 3.0 / 40.0, 9.0 / 40.0
    a41, a42, a43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
    a51, a52, a53, a54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
    a61, a62, a63, a64, a65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                               49.0 / 176.0, -5103.0 / 18656.0)
    b1, b3, b4, b5, b6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
    e1c = 35.0 / 384.0 - 5179.0 / 57600.0
    e3c = 500.0 / 1113.0 - 7571.0 / 16695.0
    e4c = 125.0 / 192.0 - 393.0 / 640.0
    e5c = -2187.0 / 6784.0 + 92097.0 / 339200.0
    e6c = 11.0 / 84.0 - 187.0 / 2100.0
    e7c = -1.0 / 40.0

    n = v0.shape[0]
    y = v0.copy()
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    k5 = np.empty(n, dtype=np.complex128)
    k6 = np.empty(n, dtype=np.complex128)
    k7 = np.empty(n, dtype=np.complex128)
    yi = np.empty(n, dtype=np.complex128)

    t = t0
    span = t1 - t0
    _rhs(L0, K1, K2, g1, tau1, g2, tau2, t, y, k1)
    # initial step heuristic, same shape as the python path
    ymax = 0.0
    d0 = 0.0
    for i in range(n):
        if abs(y[i]) > ymax:
            ymax = abs(y[i])
        if abs(k1[i]) > d0:
            d0 = abs(k1[i])
    scale0 = atol + rtol * ymax
    h = span / 10.0
    if d0 > 0.0 and 0.01 * scale0 / d0 < h:
        h = 0.01 * scale0 / d0
    if h < span * 1e-13:
        h = span * 1e-13
    min_h = span * 1e-14

    while t < t1:
        if t1 - t <= min_h:
            break  # endpoint reached within roundoff
        if h < min_h:
            return y, -1.0  # step underflow flag
        last = h >= t1 - t
        if last:
            h = t1 - t

        for i in range(n):
            yi[i] = y[i] + h * a21 * k1[i]
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + c2 * h, yi, k2)
        for i in range(n):
            yi[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i])
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + c3 * h, yi, k3)
        for i in range(n):
            yi[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i])
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + c4 * h, yi, k4)
        for i in range(n):
            yi[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i])
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + c5 * h, yi, k5)
        for i in range(n):
            yi[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i]
                                + a64 * k4[i] + a65 * k5[i])
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + h, yi, k6)
        for i in range(n):
            yi[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i]
                                + b5 * k5[i] + b6 * k6[i])
        _rhs(L0, K1, K2, g1, tau1, g2, tau2, t + h, yi, k7)

        errsum = 0.0
        for i in range(n):
            err = h * (e1c * k1[i] + e3c * k3[i] + e4c * k4[i]
                       + e5c * k5[i] + e6c * k6[i] + e7c * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yi[i]))
            q = abs(err) / sc
            errsum += q * q
        norm = np.sqrt(errsum / n)

        if norm <= 1.0:
            t = t1 if last else t + h
            for i in range(n):
                y[i] = yi[i]
                k1[i] = k7[i]
            if norm == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * norm ** -0.2
                if fac > 5.0:
                    fac = 5.0
            if fac < 0.2:
                fac = 0.2
            h = h * fac
        else:
            fac = 0.9 * norm ** -0.2
            if fac < 0.2:
                fac = 0.2
            h = h * fac

    return y, 1.0


def integrate_chain(L0, K1, K2, g1, tau1, g2, tau2, v0, t0, t1,
                    rtol=1e-8, atol=1e-10):
    """Integrate the reduced chain master equation; returns final vec(rho)."""
    y, flag = _integrate(
        np.ascontiguousarray(L0), np.ascontiguousarray(K1),
        np.ascontiguousarray(K2), float(g1), float(tau1), float(g2),
        float(tau2), np.ascontiguousarray(v0, dtype=np.complex128),
        float(t0), float(t1), float(rtol), float(atol),
    )
    if flag < 0:
        raise RuntimeError("step size underflow in chain integration")
    return y
