"""Minimal reverse-mode tape over float64 numpy arrays.

Complex quantities never appear here: every complex parameter is two real
arrays, and the fused wave/modulus ops move their planes through the kernel
backend as a stacked (2, ...) block.
"""

from __future__ import annotations

import numpy as np

from . import kernels


class Tensor:
    """A node in the tape: value, accumulated gradient, and a backward closure."""

    __slots__ = ("data", "grad", "parents", "vjp")

    def __init__(self, data, parents=(), vjp=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.parents = parents
        self.vjp = vjp

    @property
    def shape(self):
        return self.data.shape


def backward(root: Tensor) -> None:
    """Accumulate gradients of root w.r.t. every reachable tensor."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            stack.append((p, False))
    root.grad = np.ones_like(root.data)
    for node in reversed(order):
        if node.vjp is None or node.grad is None:
            continue
        for parent, g in zip(node.parents, node.vjp(node.grad)):
            if g is None:
                continue
            parent.grad = g if parent.grad is None else parent.grad + g


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    """Reduce a broadcast gradient back to the parent's shape."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def add(a: Tensor, b: Tensor) -> Tensor:
    def vjp(g):
        return _unbroadcast(g, a.data.shape), _unbroadcast(g, b.data.shape)
    return Tensor(a.data + b.data, (a, b), vjp)


def sub(a: Tensor, b: Tensor) -> Tensor:
    def vjp(g):
        return _unbroadcast(g, a.data.shape), _unbroadcast(-g, b.data.shape)
    return Tensor(a.data - b.data, (a, b), vjp)


def mul(a: Tensor, b: Tensor) -> Tensor:
    def vjp(g):
        return _unbroadcast(g * b.data, a.data.shape), _unbroadcast(g * a.data, b.data.shape)
    return Tensor(a.data * b.data, (a, b), vjp)


def neg(a: Tensor) -> Tensor:
    return Tensor(-a.data, (a,), lambda g: (-g,))


def scale(a: Tensor, s: float) -> Tensor:
    return Tensor(a.data * s, (a,), lambda g: (g * s,))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    def vjp(g):
        ga = g @ np.swapaxes(b.data, -1, -2)
        gb = np.swapaxes(a.data, -1, -2) @ g
        return _unbroadcast(ga, a.data.shape), _unbroadcast(gb, b.data.shape)
    return Tensor(a.data @ b.data, (a, b), vjp)


def tensor_sum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    def vjp(g):
        if axis is None:
            return (np.broadcast_to(g, a.data.shape).copy(),)
        if not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.data.shape).copy(),)
    return Tensor(a.data.sum(axis=axis, keepdims=keepdims), (a,), vjp)


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)
    return Tensor(out, (a,), lambda g: (g * (1.0 - out * out),))


def sigmoid(a: Tensor) -> Tensor:
    out = 1.0 / (1.0 + np.exp(-a.data))
    return Tensor(out, (a,), lambda g: (g * out * (1.0 - out),))


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0
    return Tensor(np.where(mask, a.data, 0.0), (a,), lambda g: (g * mask,))


def sqrt(a: Tensor) -> Tensor:
    out = np.sqrt(a.data)
    def vjp(g):
        # subgradient 0 where the output sits at the kink
        return (np.where(out == 0.0, 0.0, g / (2.0 * np.where(out == 0.0, 1.0, out))),)
    return Tensor(out, (a,), vjp)


ACTIVATION_OPS = {"identity": lambda a: a, "tanh": tanh, "sigmoid": sigmoid, "relu": relu}


def take_rows(a: Tensor, idx: np.ndarray) -> Tensor:
    """a[idx] for an integer index array; duplicates accumulate in the backward."""
    idx = np.asarray(idx, dtype=np.int64)
    def vjp(g):
        buf = np.zeros_like(a.data)
        np.add.at(buf, idx, g)
        return (buf,)
    return Tensor(a.data[idx], (a,), vjp)


def expand_rows(v: Tensor, n: int) -> Tensor:
    """(d,) -> (n, d) by row repetition."""
    def vjp(g):
        return (g.sum(axis=0),)
    return Tensor(np.broadcast_to(v.data, (n,) + v.data.shape).copy(), (v,), vjp)


def expand_cols(v: Tensor, d: int) -> Tensor:
    """(n,) -> (n, d) by column repetition."""
    def vjp(g):
        return (g.sum(axis=1),)
    return Tensor(np.broadcast_to(v.data[:, None], (v.data.shape[0], d)).copy(), (v,), vjp)


def stack2(a: Tensor, b: Tensor) -> Tensor:
    """Stack two equal-shape tensors into one (2, ...) block."""
    def vjp(g):
        return g[0], g[1]
    return Tensor(np.stack([a.data, b.data]), (a, b), vjp)


def plane(a: Tensor, i: int) -> Tensor:
    """Select plane i of a stacked (2, ...) block."""
    def vjp(g):
        buf = np.zeros_like(a.data)
        buf[i] = g
        return (buf,)
    return Tensor(a.data[i], (a,), vjp)


def reshape(a: Tensor, shape) -> Tensor:
    def vjp(g):
        return (g.reshape(a.data.shape),)
    return Tensor(a.data.reshape(shape), (a,), vjp)


def swap_last(a: Tensor) -> Tensor:
    def vjp(g):
        return (np.swapaxes(g, -1, -2),)
    return Tensor(np.swapaxes(a.data, -1, -2), (a,), vjp)


def select_axis1(a: Tensor, idx: np.ndarray) -> Tensor:
    """out[b, f] = a[b, idx[b, f], f] for a (B, S, F) block (pool selection)."""
    idx = np.asarray(idx, dtype=np.int64)
    def vjp(g):
        buf = np.zeros_like(a.data)
        np.put_along_axis(buf, idx[:, None, :], g[:, None, :], axis=1)
        return (buf,)
    return Tensor(np.take_along_axis(a.data, idx[:, None, :], axis=1)[:, 0, :], (a,), vjp)


def softmax_last(a: Tensor) -> Tensor:
    shifted = np.exp(a.data - a.data.max(axis=-1, keepdims=True))
    out = shifted / shifted.sum(axis=-1, keepdims=True)
    def vjp(g):
        inner = (g * out).sum(axis=-1, keepdims=True)
        return (out * (g - inner),)
    return Tensor(out, (a,), vjp)


def cross_entropy_mean(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Mean cross-entropy of integer labels against softmax(logits)."""
    labels = np.asarray(labels, dtype=np.int64)
    n = logits.data.shape[0]
    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_p = shifted - log_z
    loss = -log_p[np.arange(n), labels].mean()
    def vjp(g):
        grad = np.exp(log_p)
        grad[np.arange(n), labels] -= 1.0
        return (g * grad / n,)
    return Tensor(loss, (logits,), vjp)


def wave(amp: Tensor, freq: Tensor, phase: Tensor, pos: np.ndarray) -> Tensor:
    """Stacked (2, n, d) planes of amp * e^{i(freq*pos + phase)}; pos is constant."""
    pos = np.ascontiguousarray(pos, dtype=np.float64)
    a = np.ascontiguousarray(amp.data)
    f = np.ascontiguousarray(freq.data)
    p = np.ascontiguousarray(phase.data)
    re, im = kernels.wave_planes(a, f, p, pos)
    def vjp(g):
        g_re = np.ascontiguousarray(g[0])
        g_im = np.ascontiguousarray(g[1])
        g_amp, g_angle = kernels.wave_planes_grad(a, f, p, pos, g_re, g_im)
        return g_amp, g_angle * pos[:, None], g_angle
    return Tensor(np.stack([re, im]), (amp, freq, phase), vjp)


def modulus(planes: Tensor) -> Tensor:
    """Element-wise modulus of a stacked (2, ..., d) block."""
    re, im = planes.data[0], planes.data[1]
    d = re.shape[-1]
    re2 = np.ascontiguousarray(re.reshape(-1, d))
    im2 = np.ascontiguousarray(im.reshape(-1, d))
    out2 = kernels.modulus(re2, im2)
    def vjp(g):
        g2 = np.ascontiguousarray(g.reshape(-1, d))
        g_re, g_im = kernels.modulus_grad(re2, im2, out2, g2)
        return (np.stack([g_re.reshape(re.shape), g_im.reshape(im.shape)]),)
    return Tensor(out2.reshape(re.shape), (planes,), vjp)
