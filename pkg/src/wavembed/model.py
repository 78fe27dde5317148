"""Trainable classifier graphs: wave embedding -> complex encoder -> modulus readout."""

from __future__ import annotations

import json
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import autograd as ag
from .autograd import Tensor
from .embedding import ComplexEmbeddingTable, init_table
from .errors import ConfigError, ContractError, DivergenceError, PreconditionError

ENCODERS = ("fasttext", "cnn", "rnn", "attention")


@dataclass
class ModelGraph:
    """Embedding table plus encoder/readout arrays and the trainable registry.

    Registered arrays are shared by reference: optimizer updates mutate them
    in place and bump `version`, which invalidates outstanding forward caches.
    """

    table: ComplexEmbeddingTable
    encoder: str
    params: "OrderedDict[str, np.ndarray]"
    registry_names: list
    num_classes: int
    activation: str = "tanh"
    conv_width: int = 3
    attention_norm: str = "softmax"
    share_real_imag: bool = False
    train_frequencies: bool = True
    version: int = 0

    def registry(self) -> "OrderedDict[str, np.ndarray]":
        named = dict(self.params)
        named["embedding.amplitudes"] = self.table.amplitudes
        named["embedding.frequencies"] = self.table.frequencies
        if self.table.phase_mode == "full":
            named["embedding.phases"] = self.table.phases
        return OrderedDict((n, named[n]) for n in self.registry_names)

    def bump_version(self) -> None:
        self.version += 1


@dataclass
class ForwardCache:
    """Tape state from one forward_loss call, consumed by backward."""

    loss: Tensor
    tensors: dict
    version: int
    batch_size: int


def _uniform(rng, shape, fan_in):
    return rng.uniform(-1.0, 1.0, shape) / np.sqrt(fan_in)


def build_model(vocab_size: int, num_classes: int, rng: np.random.Generator,
                encoder: str = "fasttext", dim: int = 8, hidden: int = 16,
                scheme: str = "word_sharing", phase_mode: str = "constant",
                activation: str = "tanh", conv_width: int = 3,
                conv_filters: int = 8, attention_norm: str = "softmax",
                share_real_imag: bool = False,
                train_frequencies: bool = True) -> ModelGraph:
    """Assemble a classifier; frozen frequencies stay at zero and leave the registry."""
    if encoder not in ENCODERS:
        raise ConfigError(f"encoder {encoder!r} not in {ENCODERS}")
    if num_classes < 2:
        raise ConfigError(f"num_classes = {num_classes} must be >= 2")
    table = init_table(vocab_size, dim, scheme, phase_mode, rng)
    if not train_frequencies:
        table.frequencies[...] = 0.0

    params: "OrderedDict[str, np.ndarray]" = OrderedDict()
    if encoder == "fasttext":
        params["encoder.dense_a"] = _uniform(rng, (dim, hidden), dim)
        params["encoder.dense_b"] = _uniform(rng, (dim, hidden), dim)
        params["encoder.dense_c"] = np.zeros(hidden)
        params["encoder.dense_d"] = np.zeros(hidden)
        feature_dim = hidden
    elif encoder == "cnn":
        cols = conv_width * dim
        params["encoder.conv_a"] = _uniform(rng, (cols, conv_filters), cols)
        params["encoder.conv_b"] = _uniform(rng, (cols, conv_filters), cols)
        params["encoder.conv_c"] = np.zeros(conv_filters)
        params["encoder.conv_d"] = np.zeros(conv_filters)
        feature_dim = conv_filters
    elif encoder == "rnn":
        params["encoder.rnn_ha"] = _uniform(rng, (hidden, hidden), hidden)
        params["encoder.rnn_hb"] = _uniform(rng, (hidden, hidden), hidden)
        params["encoder.rnn_za"] = _uniform(rng, (dim, hidden), dim)
        params["encoder.rnn_zb"] = _uniform(rng, (dim, hidden), dim)
        params["encoder.rnn_c"] = np.zeros(hidden)
        params["encoder.rnn_d"] = np.zeros(hidden)
        feature_dim = hidden
    else:
        if share_real_imag:
            for name in ("wq", "wk", "wv"):
                params[f"encoder.{name}"] = _uniform(rng, (dim, dim), dim)
        else:
            for name in ("wq", "wk", "wv"):
                params[f"encoder.{name}_re"] = _uniform(rng, (dim, dim), dim)
                params[f"encoder.{name}_im"] = _uniform(rng, (dim, dim), dim)
        feature_dim = dim
    params["readout.w"] = _uniform(rng, (feature_dim, num_classes), feature_dim)

    registry_names = ["embedding.amplitudes"]
    if train_frequencies:
        registry_names.append("embedding.frequencies")
    if phase_mode == "full":
        registry_names.append("embedding.phases")
    registry_names.extend(params.keys())

    return ModelGraph(table, encoder, params, registry_names, num_classes,
                      activation, conv_width, attention_norm, share_real_imag,
                      train_frequencies)


def _embed_planes(model: ModelGraph, tokens: np.ndarray, tensors: dict) -> Tensor:
    """Wave planes (2, B*L, dim) for a (B, L) token batch at positions 1..L."""
    table = model.table
    b, length = tokens.shape
    flat = tokens.reshape(-1)
    if flat.min() < 0 or flat.max() >= table.vocab_size:
        raise PreconditionError("token index outside vocabulary")
    t_amp = Tensor(table.amplitudes)
    t_freq = Tensor(table.frequencies)
    tensors["embedding.amplitudes"] = t_amp
    tensors["embedding.frequencies"] = t_freq
    amp_rows = ag.take_rows(t_amp, flat)
    n = b * length
    if table.scheme == "full":
        freq_rows = ag.take_rows(t_freq, flat)
    elif table.scheme == "word_sharing":
        freq_rows = ag.expand_rows(t_freq, n)
    else:
        freq_rows = ag.expand_cols(ag.take_rows(t_freq, flat), table.dim)
    if table.phase_mode == "full":
        t_phase = Tensor(table.phases)
        tensors["embedding.phases"] = t_phase
        phase_rows = ag.take_rows(t_phase, flat)
    else:
        phase_rows = Tensor(np.full((n, table.dim), float(table.phases)))
    pos = np.tile(np.arange(1, length + 1, dtype=np.float64), b)
    return ag.wave(amp_rows, freq_rows, phase_rows, pos)


def _dense_planes(re, im, a, bm, c, d, act):
    pre_re = ag.add(ag.sub(ag.matmul(re, a), ag.matmul(im, bm)), c)
    pre_im = ag.add(ag.add(ag.matmul(re, bm), ag.matmul(im, a)), d)
    f = ag.ACTIVATION_OPS[act]
    return f(pre_re), f(pre_im)


def _encode_fasttext(model, planes, b, length, t):
    stacked = ag.reshape(planes, (2, b, length, model.table.dim))
    pooled = ag.tensor_sum(stacked, axis=2)
    re, im = ag.plane(pooled, 0), ag.plane(pooled, 1)
    h_re, h_im = _dense_planes(re, im, t["encoder.dense_a"], t["encoder.dense_b"],
                               t["encoder.dense_c"], t["encoder.dense_d"],
                               model.activation)
    return ag.stack2(h_re, h_im)


def _encode_cnn(model, planes, b, length, t):
    width = model.conv_width
    if width > length:
        raise PreconditionError(f"conv width {width} exceeds sequence length {length}")
    dim = model.table.dim
    steps = length - width + 1
    re_flat, im_flat = ag.plane(planes, 0), ag.plane(planes, 1)
    starts = (np.arange(b)[:, None] * length).repeat(steps, axis=1)
    idx = (starts + np.arange(steps)[None, :]).reshape(-1, 1) + np.arange(width)[None, :]
    win_re = ag.reshape(ag.take_rows(re_flat, idx), (b * steps, width * dim))
    win_im = ag.reshape(ag.take_rows(im_flat, idx), (b * steps, width * dim))
    h_re, h_im = _dense_planes(win_re, win_im, t["encoder.conv_a"], t["encoder.conv_b"],
                               t["encoder.conv_c"], t["encoder.conv_d"],
                               model.activation)
    filters = h_re.data.shape[1]
    r3 = ag.reshape(h_re, (b, steps, filters))
    i3 = ag.reshape(h_im, (b, steps, filters))
    # argmax over window positions by modulus; gradient flows to the winners
    mod = np.sqrt(r3.data ** 2 + i3.data ** 2)
    winners = np.argmax(mod, axis=1)
    return ag.stack2(ag.select_axis1(r3, winners), ag.select_axis1(i3, winners))


def _encode_rnn(model, planes, b, length, t):
    hidden = t["encoder.rnn_ha"].data.shape[0]
    re_flat, im_flat = ag.plane(planes, 0), ag.plane(planes, 1)
    h_re = Tensor(np.zeros((b, hidden)))
    h_im = Tensor(np.zeros((b, hidden)))
    ha, hb = t["encoder.rnn_ha"], t["encoder.rnn_hb"]
    za, zb = t["encoder.rnn_za"], t["encoder.rnn_zb"]
    c, d = t["encoder.rnn_c"], t["encoder.rnn_d"]
    f = ag.ACTIVATION_OPS[model.activation]
    for step in range(length):
        rows = np.arange(b) * length + step
        z_re = ag.take_rows(re_flat, rows)
        z_im = ag.take_rows(im_flat, rows)
        pre_re = ag.add(ag.add(ag.sub(ag.matmul(h_re, ha), ag.matmul(h_im, hb)),
                               ag.sub(ag.matmul(z_re, za), ag.matmul(z_im, zb))), c)
        pre_im = ag.add(ag.add(ag.add(ag.matmul(h_re, hb), ag.matmul(h_im, ha)),
                               ag.add(ag.matmul(z_re, zb), ag.matmul(z_im, za))), d)
        h_re, h_im = f(pre_re), f(pre_im)
    return ag.stack2(h_re, h_im)


def _encode_attention(model, planes, b, length, t):
    dim = model.table.dim
    re_flat, im_flat = ag.plane(planes, 0), ag.plane(planes, 1)
    if model.share_real_imag:
        qa = qb = t["encoder.wq"]
        ka = kb = t["encoder.wk"]
        va = vb = t["encoder.wv"]
    else:
        qa, qb = t["encoder.wq_re"], t["encoder.wq_im"]
        ka, kb = t["encoder.wk_re"], t["encoder.wk_im"]
        va, vb = t["encoder.wv_re"], t["encoder.wv_im"]

    def project(a_plane, b_plane):
        p_re = ag.sub(ag.matmul(re_flat, a_plane), ag.matmul(im_flat, b_plane))
        p_im = ag.add(ag.matmul(re_flat, b_plane), ag.matmul(im_flat, a_plane))
        return (ag.reshape(p_re, (b, length, dim)), ag.reshape(p_im, (b, length, dim)))

    q_re, q_im = project(qa, qb)
    k_re, k_im = project(ka, kb)
    v_re, v_im = project(va, vb)
    k_re_t, k_im_t = ag.swap_last(k_re), ag.swap_last(k_im)
    z_re = ag.add(ag.matmul(q_re, k_re_t), ag.matmul(q_im, k_im_t))
    z_im = ag.sub(ag.matmul(q_im, k_re_t), ag.matmul(q_re, k_im_t))
    energy = ag.sqrt(ag.scale(ag.add(ag.mul(z_re, z_re), ag.mul(z_im, z_im)),
                              1.0 / length))
    if model.attention_norm == "softmax":
        attn = ag.softmax_last(energy)
    else:
        total = ag.tensor_sum(energy, axis=-1, keepdims=True)
        attn = _renormalize(energy, total)
    out_re = ag.tensor_sum(ag.matmul(attn, v_re), axis=1)
    out_im = ag.tensor_sum(ag.matmul(attn, v_im), axis=1)
    return ag.stack2(out_re, out_im)


def _renormalize(energy: Tensor, total: Tensor) -> Tensor:
    """Plain e/sum(e) normalization with gradient through the denominator."""
    out = energy.data / total.data
    def vjp(g):
        g_energy = g / total.data
        g_total = -(g * out).sum(axis=-1, keepdims=True) / total.data
        return g_energy, g_total
    return Tensor(out, (energy, total), vjp)


_ENCODE = {"fasttext": _encode_fasttext, "cnn": _encode_cnn,
           "rnn": _encode_rnn, "attention": _encode_attention}


def forward_logits(model: ModelGraph, tokens: np.ndarray) -> tuple:
    """Logits tensor (B, C) plus the tensor map for gradient readout."""
    tokens = np.asarray(tokens, dtype=np.int64)
    if tokens.ndim != 2 or 0 in tokens.shape:
        raise PreconditionError(f"expected a non-empty (batch, len) array, got {tokens.shape}")
    tensors = {name: Tensor(arr) for name, arr in model.params.items()}
    planes = _embed_planes(model, tokens, tensors)
    b, length = tokens.shape
    features = _ENCODE[model.encoder](model, planes, b, length, tensors)
    mod = ag.modulus(features)
    logits = ag.matmul(mod, tensors["readout.w"])
    return logits, tensors


def forward_loss(model: ModelGraph, batch: tuple) -> tuple:
    """Mean cross-entropy over a (tokens, labels) batch; returns (loss, cache)."""
    tokens, labels = batch
    tokens = np.asarray(tokens, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise PreconditionError("empty batch")
    if labels.shape != (tokens.shape[0],):
        raise PreconditionError(f"labels shape {labels.shape} != batch rows {tokens.shape[0]}")
    if labels.min() < 0 or labels.max() >= model.num_classes:
        raise PreconditionError("label outside [0, num_classes)")
    logits, tensors = forward_logits(model, tokens)
    loss = ag.cross_entropy_mean(logits, labels)
    value = float(loss.data)
    if not np.isfinite(value):
        for name, arr in model.registry().items():
            if not np.all(np.isfinite(arr)):
                raise DivergenceError(f"non-finite values in parameter {name}")
        raise DivergenceError("non-finite loss with finite parameters")
    cache = ForwardCache(loss, tensors, model.version, len(labels))
    return value, cache


def backward(model: ModelGraph, cache: ForwardCache) -> "OrderedDict[str, np.ndarray]":
    """Gradients for every registered parameter, aligned with the registry order."""
    if cache.version != model.version:
        raise ContractError("stale forward cache: parameters changed since forward_loss")
    ag.backward(cache.loss)
    grads: "OrderedDict[str, np.ndarray]" = OrderedDict()
    for name, arr in model.registry().items():
        t = cache.tensors.get(name)
        grads[name] = np.zeros_like(arr) if t is None or t.grad is None else t.grad
    return grads


def predict(model: ModelGraph, tokens: np.ndarray) -> np.ndarray:
    """Class with the largest logit per sequence in an equal-length batch."""
    logits, _ = forward_logits(model, tokens)
    return np.argmax(logits.data, axis=1)


def evaluate(model: ModelGraph, samples: list) -> float:
    """Accuracy over (token-sequence, label) pairs, grouped by length."""
    if not samples:
        raise PreconditionError("cannot evaluate on an empty sample list")
    by_len: dict = {}
    for i, (seq, label) in enumerate(samples):
        by_len.setdefault(len(seq), []).append(i)
    correct = 0
    for length, indices in by_len.items():
        tokens = np.array([samples[i][0] for i in indices], dtype=np.int64)
        labels = np.array([samples[i][1] for i in indices], dtype=np.int64)
        correct += int((predict(model, tokens) == labels).sum())
    return correct / len(samples)


def count_parameters(model: ModelGraph) -> int:
    """Registry total; equals embedding parameter_count plus layer enumeration
    when everything is trainable."""
    return sum(arr.size for arr in model.registry().values())


def save_model(model: ModelGraph, path) -> None:
    """Write the model (header plus all arrays) to an .npz container."""
    header = json.dumps({
        "encoder": model.encoder, "num_classes": model.num_classes,
        "activation": model.activation, "conv_width": model.conv_width,
        "attention_norm": model.attention_norm,
        "share_real_imag": model.share_real_imag,
        "train_frequencies": model.train_frequencies,
        "scheme": model.table.scheme, "phase_mode": model.table.phase_mode,
        "registry_names": model.registry_names,
        "param_names": list(model.params.keys()),
    })
    arrays = {f"param.{k}": v for k, v in model.params.items()}
    np.savez(path, header=np.asarray(header), amplitudes=model.table.amplitudes,
             frequencies=model.table.frequencies, phases=model.table.phases,
             **arrays)


def load_model(path) -> ModelGraph:
    """Rebuild a model written by save_model."""
    with np.load(path) as data:
        header = json.loads(str(data["header"]))
        table = ComplexEmbeddingTable(
            data["amplitudes"], data["frequencies"], data["phases"],
            header["scheme"], header["phase_mode"])
        params = OrderedDict((k, data[f"param.{k}"]) for k in header["param_names"])
    return ModelGraph(table, header["encoder"], params, header["registry_names"],
                      header["num_classes"], header["activation"],
                      header["conv_width"], header["attention_norm"],
                      header["share_real_imag"], header["train_frequencies"])
