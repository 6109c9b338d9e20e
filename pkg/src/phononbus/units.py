"""Unit conventions and conversions.

Everything inside the dynamics code runs in angular frequency units of
rad/us with times in us.  Configuration objects and files keep ordinary
(cycle) frequencies with explicit unit suffixes; conversion happens once,
at the boundary where operators are built.

Ordinary-frequency bookkeeping: 1 MHz == 1 cycle/us, so a value f in MHz
converts to 2*pi*f rad/us.
"""

from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi

# ordinary-frequency unit -> cycles per microsecond
_FREQ_TO_PER_US = {
    "GHz": 1.0e3,
    "MHz": 1.0,
    "kHz": 1.0e-3,
    "Hz": 1.0e-6,
}

# time unit -> microseconds
_TIME_TO_US = {
    "s": 1.0e6,
    "ms": 1.0e3,
    "us": 1.0,
    "ns": 1.0e-3,
}


def angular(f_per_us: float) -> float:
    """Ordinary frequency in cycles/us -> angular rad/us."""
    return TWO_PI * f_per_us


def ordinary(omega: float) -> float:
    """Angular rad/us -> ordinary cycles/us (i.e. MHz)."""
    return omega / TWO_PI


def ghz_to_rad_per_us(f_ghz: float) -> float:
    return TWO_PI * f_ghz * 1.0e3


def mhz_to_rad_per_us(f_mhz: float) -> float:
    return TWO_PI * f_mhz


def khz_to_rad_per_us(f_khz: float) -> float:
    return TWO_PI * f_khz * 1.0e-3


def freq_to_mhz(value: float, unit: str) -> float:
    """Convert a frequency given in `unit` to MHz (cycles/us)."""
    try:
        return value * _FREQ_TO_PER_US[unit]
    except KeyError:
        raise ValueError(f"unknown frequency unit {unit!r}") from None


def time_to_us(value: float, unit: str) -> float:
    try:
        return value * _TIME_TO_US[unit]
    except KeyError:
        raise ValueError(f"unknown time unit {unit!r}") from None


FREQ_UNITS = tuple(_FREQ_TO_PER_US)
TIME_UNITS = tuple(_TIME_TO_US)
