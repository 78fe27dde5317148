"""Fixed sinusoidal position encodings and their complex-exponential counterpart.

Dimension pair k of the classic encoding is (sin, cos) of pos * 10000^(-2k/d_model);
the same pair is exactly the (imaginary, real) split of a unit-modulus complex
exponential with that frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .report import VerificationReport


def pe_frequency(k: int, d_model: int) -> float:
    """Angular frequency of dimension pair k: 10000^(-2k/d_model)."""
    if d_model % 2 != 0 or d_model < 2:
        raise ConfigError(f"d_model = {d_model} must be even and >= 2")
    if not 0 <= 2 * k < d_model:
        raise IndexError(f"dimension pair k = {k} out of range for d_model = {d_model}")
    return 10000.0 ** (-2.0 * k / d_model)


def pe_period(k: int, d_model: int) -> float:
    """Positions per full revolution of dimension pair k: 2*pi*10000^(2k/d_model)."""
    return 2.0 * math.pi / pe_frequency(k, d_model)


def sinusoidal_pe(pos: int, d_model: int) -> np.ndarray:
    """The fixed position encoding: even dims sin, odd dims cos of pos*freq_k."""
    if d_model % 2 != 0 or d_model < 2:
        raise ConfigError(f"d_model = {d_model} must be even and >= 2")
    k = np.arange(d_model // 2)
    args = pos * 10000.0 ** (-2.0 * k / d_model)
    out = np.empty(d_model)
    out[0::2] = np.sin(args)
    out[1::2] = np.cos(args)
    return out


def complex_pe(pos: int, k: int, d_model: int) -> complex:
    """Unit-modulus counterpart e^{i*pos*freq_k} of dimension pair k."""
    a = pos * pe_frequency(k, d_model)
    return complex(math.cos(a), math.sin(a))


@dataclass(frozen=True)
class SinusoidalPE:
    """A precomputed encoding table; values[pos][dim], every entry in [-1, 1]."""

    d_model: int
    values: np.ndarray

    @classmethod
    def build(cls, max_pos: int, d_model: int) -> "SinusoidalPE":
        values = np.stack([sinusoidal_pe(p, d_model) for p in range(max_pos)])
        return cls(d_model, values)


def bijection_check(max_pos: int, d_model: int) -> VerificationReport:
    """Verify PE_{2k} = Im(complex_pe) and PE_{2k+1} = Re(complex_pe) on a grid.

    Also checks the reconstruction PE_{2k+1} + i*PE_{2k} = complex_pe.
    """
    worst = 0.0
    for pos in range(max_pos):
        pe = sinusoidal_pe(pos, d_model)
        for k in range(d_model // 2):
            z = complex_pe(pos, k, d_model)
            worst = max(worst,
                        abs(pe[2 * k] - z.imag),
                        abs(pe[2 * k + 1] - z.real),
                        abs(complex(pe[2 * k + 1], pe[2 * k]) - z))
    grid = {"max_pos": max_pos, "d_model": d_model, "tol": 1e-12}
    return VerificationReport("sinusoidal-bijection", grid, worst, worst <= 1e-12)
