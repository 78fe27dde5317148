"""Pure-numpy kernel implementations. Reference semantics for the native module."""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def wave_planes(amp, freq, phase, pos):
    """Real and imaginary planes of amp * exp(i*(freq*pos + phase)).

    amp, freq, phase: (N, D) float64 rows already gathered per token.
    pos: (N,) float64 positions. Returns (re, im), each (N, D).
    """
    angle = freq * pos[:, None] + phase
    return amp * np.cos(angle), amp * np.sin(angle)


def wave_planes_grad(amp, freq, phase, pos, g_re, g_im):
    """Backward of wave_planes.

    Returns (g_amp, g_angle); the caller splits g_angle into frequency
    (scale by pos) and phase contributions.
    """
    angle = freq * pos[:, None] + phase
    c = np.cos(angle)
    s = np.sin(angle)
    g_amp = g_re * c + g_im * s
    g_angle = amp * (g_im * c - g_re * s)
    return g_amp, g_angle


def modulus(re, im):
    """Elementwise sqrt(re^2 + im^2)."""
    return np.sqrt(re * re + im * im)


def modulus_grad(re, im, mod, g_mod):
    """Backward of modulus; subgradient 0 where the modulus is 0."""
    safe = np.where(mod == 0.0, 1.0, mod)
    scale = np.where(mod == 0.0, 0.0, g_mod / safe)
    return scale * re, scale * im
