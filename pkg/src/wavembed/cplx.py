"""Split-plane complex containers and the complex dense primitive."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError, ShapeError


def identity(x):
    return x


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def tanh(x):
    return np.tanh(x)


def relu(x):
    return np.maximum(x, 0.0)


ACTIVATIONS = {"identity": identity, "sigmoid": sigmoid, "tanh": tanh, "relu": relu}


def resolve_activation(act):
    """Map an activation name (or callable) to a callable."""
    if callable(act):
        return act
    try:
        return ACTIVATIONS[act]
    except KeyError:
        raise ConfigError(
            f"unknown activation {act!r}; expected one of {sorted(ACTIVATIONS)}") from None


@dataclass(frozen=True)
class ComplexArray:
    """A complex vector or matrix stored as separate real and imaginary planes."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "re", np.asarray(self.re, dtype=np.float64))
        object.__setattr__(self, "im", np.asarray(self.im, dtype=np.float64))
        if self.re.shape != self.im.shape:
            raise ShapeError(f"re shape {self.re.shape} != im shape {self.im.shape}")
        if self.re.ndim > 3:
            raise ShapeError(f"rank {self.re.ndim} > 3 unsupported")

    @property
    def shape(self) -> tuple:
        return self.re.shape

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    @classmethod
    def from_complex(cls, z) -> "ComplexArray":
        z = np.asarray(z, dtype=np.complex128)
        return cls(z.real.copy(), z.imag.copy())

    @classmethod
    def zeros(cls, shape) -> "ComplexArray":
        return cls(np.zeros(shape), np.zeros(shape))


def complex_multiply(a: complex, b: complex) -> complex:
    """Product of two scalars via the explicit real/imaginary expansion."""
    a, b = complex(a), complex(b)
    return complex(a.real * b.real - a.imag * b.imag,
                   a.real * b.imag + a.imag * b.real)


def complex_dense(x: ComplexArray, w: ComplexArray, b: ComplexArray,
                  act="identity") -> ComplexArray:
    """Dense layer on split planes: (A+iB)(x_re+i x_im) + (c+id), then split activation.

    w holds A (real plane) and B (imaginary plane), each (out, in); b holds
    c and d, each (out,). x may be a vector (in,) or a batch (rows, in).
    """
    if w.re.ndim != 2:
        raise ShapeError(f"weight must be a matrix, got shape {w.shape}")
    if x.re.shape[-1] != w.re.shape[1]:
        raise ShapeError(f"input dim {x.re.shape[-1]} != weight columns {w.re.shape[1]}")
    if b.re.shape != (w.re.shape[0],):
        raise ShapeError(f"bias shape {b.shape} != (weight rows,) = ({w.re.shape[0]},)")
    f = resolve_activation(act)
    a_t, b_t = w.re.T, w.im.T
    re = x.re @ a_t - x.im @ b_t + b.re
    im = x.re @ b_t + x.im @ a_t + b.im
    return ComplexArray(f(re), f(im))


def split_activation(z: ComplexArray, act) -> ComplexArray:
    """Apply a real activation independently to the real and imaginary planes."""
    f = resolve_activation(act)
    return ComplexArray(f(z.re), f(z.im))


def modulus_vec(z: ComplexArray) -> np.ndarray:
    """Element-wise modulus sqrt(re^2 + im^2)."""
    return np.sqrt(z.re * z.re + z.im * z.im)


def complex_cosine(u: ComplexArray, v: ComplexArray) -> float:
    """Re(sum u_k * conj(v_k)) / (|u| |v|) for vectors of equal length."""
    if u.re.ndim != 1 or v.re.ndim != 1:
        raise ShapeError("complex_cosine expects vectors")
    if u.shape != v.shape:
        raise ShapeError(f"length mismatch {u.shape} vs {v.shape}")
    nu = float(np.sqrt(np.sum(u.re * u.re + u.im * u.im)))
    nv = float(np.sqrt(np.sum(v.re * v.re + v.im * v.im)))
    if nu == 0.0 or nv == 0.0:
        raise DegenerateInputError("complex_cosine of a zero vector")
    num = float(np.sum(u.re * v.re + u.im * v.im))
    return num / (nu * nv)
