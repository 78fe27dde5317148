"""Complex-valued layer family: pooling, convolution, recurrence, attention, readout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cplx import ComplexArray, complex_dense, modulus_vec, resolve_activation
from .errors import DegenerateInputError, PreconditionError, ShapeError


def fasttext_pool(rows: ComplexArray, mean: bool = False) -> ComplexArray:
    """Column-wise sum (or mean) over a sequence of embedded rows."""
    if rows.re.ndim != 2:
        raise ShapeError(f"expected a (len, dim) matrix, got {rows.shape}")
    n = rows.re.shape[0]
    if n == 0:
        raise DegenerateInputError("pool of an empty sequence")
    re, im = rows.re.sum(axis=0), rows.im.sum(axis=0)
    if mean:
        re, im = re / n, im / n
    return ComplexArray(re, im)


def complex_conv1d(seq: ComplexArray, weights: ComplexArray, width: int,
                   bias: ComplexArray) -> ComplexArray:
    """Narrow 1-D convolution: the dense rule applied to each flattened window.

    seq is (len, dim); weights is (filters, width*dim) holding the real and
    imaginary kernel planes; output is (len - width + 1, filters), no activation.
    """
    length, dim = seq.re.shape
    if width < 1:
        raise PreconditionError(f"width = {width} must be >= 1")
    if width > length:
        raise ShapeError(f"window width {width} exceeds sequence length {length}")
    if weights.re.shape[1] != width * dim:
        raise ShapeError(
            f"kernel columns {weights.re.shape[1]} != width*dim = {width * dim}")
    steps = length - width + 1
    idx = np.arange(steps)[:, None] + np.arange(width)[None, :]
    windows = ComplexArray(seq.re[idx].reshape(steps, width * dim),
                           seq.im[idx].reshape(steps, width * dim))
    return complex_dense(windows, weights, bias, "identity")


def max_pool_modulus(seq: ComplexArray) -> ComplexArray:
    """Per-channel complex value whose modulus is maximal over the sequence."""
    if seq.re.ndim != 2 or seq.re.shape[0] == 0:
        raise DegenerateInputError("max pool of an empty sequence")
    idx = np.argmax(modulus_vec(seq), axis=0)
    cols = np.arange(seq.re.shape[1])
    return ComplexArray(seq.re[idx, cols], seq.im[idx, cols])


@dataclass(frozen=True)
class RnnCell:
    """Recurrent transition h' = f(Wh*h + Wz*z + b) on split planes."""

    wh: ComplexArray
    wz: ComplexArray
    b: ComplexArray

    def __post_init__(self):
        h = self.wh.re.shape[0]
        if self.wh.re.shape != (h, h):
            raise ShapeError(f"Wh must be square, got {self.wh.shape}")
        if self.wz.re.shape[0] != h:
            raise ShapeError(f"Wz rows {self.wz.re.shape[0]} != hidden size {h}")
        if self.b.re.shape != (h,):
            raise ShapeError(f"bias shape {self.b.shape} != ({h},)")


def rnn_step(cell: RnnCell, h_prev: ComplexArray, z_t: ComplexArray,
             act="tanh") -> ComplexArray:
    """One recurrent update; the activation is applied per plane."""
    if h_prev.re.shape[-1] != cell.wh.re.shape[1]:
        raise ShapeError(f"state dim {h_prev.re.shape[-1]} != Wh columns {cell.wh.re.shape[1]}")
    if z_t.re.shape[-1] != cell.wz.re.shape[1]:
        raise ShapeError(f"input dim {z_t.re.shape[-1]} != Wz columns {cell.wz.re.shape[1]}")
    f = resolve_activation(act)
    ah, bh = cell.wh.re.T, cell.wh.im.T
    az, bz = cell.wz.re.T, cell.wz.im.T
    re = h_prev.re @ ah - h_prev.im @ bh + z_t.re @ az - z_t.im @ bz + cell.b.re
    im = h_prev.re @ bh + h_prev.im @ ah + z_t.re @ bz + z_t.im @ az + cell.b.im
    return ComplexArray(f(re), f(im))


@dataclass(frozen=True)
class AttentionWeights:
    """Single-head projections; share_real_imag aliases each imaginary plane
    to its real plane (one backing array, half the parameters)."""

    wq: ComplexArray
    wk: ComplexArray
    wv: ComplexArray
    share_real_imag: bool = False

    def __post_init__(self):
        for name, w in (("wq", self.wq), ("wk", self.wk), ("wv", self.wv)):
            if w.re.ndim != 2 or w.re.shape[0] != w.re.shape[1]:
                raise ShapeError(f"{name} must be square, got {w.shape}")
            if self.share_real_imag and w.im is not w.re:
                raise ShapeError(f"share_real_imag requires {name}.im to alias {name}.re")


def init_attention(dim: int, rng: np.random.Generator,
                   share_real_imag: bool = False) -> AttentionWeights:
    """Random head with plane entries uniform in [-1,1]/sqrt(dim)."""
    def plane():
        return rng.uniform(-1.0, 1.0, (dim, dim)) / np.sqrt(dim)

    def proj():
        if share_real_imag:
            a = plane()
            return ComplexArray(a, a)
        return ComplexArray(plane(), plane())

    return AttentionWeights(proj(), proj(), proj(), share_real_imag)


def attention_parameter_count(weights: AttentionWeights) -> int:
    """Distinct trainable scalars across the three projections (aliases counted once)."""
    seen, total = set(), 0
    for w in (weights.wq, weights.wk, weights.wv):
        for plane in (w.re, w.im):
            if id(plane) not in seen:
                seen.add(id(plane))
                total += plane.size
    return total


def _project(x: ComplexArray, w: ComplexArray) -> ComplexArray:
    re = x.re @ w.re - x.im @ w.im
    im = x.re @ w.im + x.im @ w.re
    return ComplexArray(re, im)


def attention_energy(wi: ComplexArray, wj: ComplexArray,
                     weights: AttentionWeights, n: int) -> float:
    """Hermitian score: z = (wi WQ) . conj(wj WK), e = sqrt((Re(z)^2 + Im(z)^2)/n)."""
    if n < 1:
        raise PreconditionError(f"sequence length n = {n} must be >= 1")
    if wi.shape != wj.shape or wi.re.ndim != 1:
        raise ShapeError(f"expected equal-length vectors, got {wi.shape} and {wj.shape}")
    if wi.re.shape[0] != weights.wq.re.shape[0]:
        raise ShapeError(f"vector dim {wi.re.shape[0]} != projection dim {weights.wq.re.shape[0]}")
    q = _project(wi, weights.wq)
    k = _project(wj, weights.wk)
    z_re = float(np.sum(q.re * k.re + q.im * k.im))
    z_im = float(np.sum(q.im * k.re - q.re * k.im))
    return float(np.sqrt((z_re * z_re + z_im * z_im) / n))


def attention_weights_row(e: np.ndarray, mode: str = "softmax") -> np.ndarray:
    """Normalize an energy row: exponential softmax, or plain e/sum(e) via mode."""
    e = np.asarray(e, dtype=np.float64)
    if not np.all(np.isfinite(e)):
        raise PreconditionError("attention energies must be finite")
    if mode == "softmax":
        shifted = np.exp(e - e.max())
        return shifted / shifted.sum()
    if mode == "linear":
        total = e.sum()
        if total == 0.0:
            raise DegenerateInputError("linear normalization of an all-zero energy row")
        return e / total
    raise PreconditionError(f"unknown normalization mode {mode!r}")


def attention_output(a: np.ndarray, seq: ComplexArray, wv: ComplexArray) -> ComplexArray:
    """Row-stochastic mix of value-projected rows: out_i = sum_j a[i][j] (seq_j WV)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != seq.re.shape[0]:
        raise ShapeError(f"mix shape {a.shape} incompatible with sequence {seq.shape}")
    if np.abs(a.sum(axis=1) - 1.0).max() > 1e-9:
        raise PreconditionError("attention rows must sum to 1")
    v = _project(seq, wv)
    return ComplexArray(a @ v.re, a @ v.im)


def modulus_readout(z: ComplexArray, w_out: np.ndarray) -> np.ndarray:
    """Real logits from complex features: w_out applied to the element-wise modulus."""
    w_out = np.asarray(w_out, dtype=np.float64)
    if w_out.ndim != 2 or z.re.shape[-1] != w_out.shape[1]:
        raise ShapeError(f"readout {w_out.shape} incompatible with features {z.shape}")
    mod = modulus_vec(z)
    if mod.ndim == 1:
        return w_out @ mod
    return mod @ w_out.T
