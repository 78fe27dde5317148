"""A plain real-valued FastText classifier, for degeneracy comparisons."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autograd as ag
from .autograd import Tensor
from .train import iter_batches


@dataclass
class RealFastText:
    """Real embedding -> sum pool -> dense -> activation -> linear logits."""

    emb: np.ndarray
    dense_w: np.ndarray
    dense_b: np.ndarray
    out_w: np.ndarray
    activation: str = "tanh"


def build_real_fasttext(vocab_size: int, num_classes: int, dim: int, hidden: int,
                        rng: np.random.Generator,
                        activation: str = "tanh") -> RealFastText:
    return RealFastText(
        emb=rng.uniform(-1.0, 1.0, (vocab_size, dim)) / np.sqrt(dim),
        dense_w=rng.uniform(-1.0, 1.0, (dim, hidden)) / np.sqrt(dim),
        dense_b=np.zeros(hidden),
        out_w=rng.uniform(-1.0, 1.0, (hidden, num_classes)) / np.sqrt(hidden),
        activation=activation)


def _forward(model: RealFastText, tokens: np.ndarray):
    b, length = tokens.shape
    t_emb = Tensor(model.emb)
    t_w = Tensor(model.dense_w)
    t_b = Tensor(model.dense_b)
    t_out = Tensor(model.out_w)
    rows = ag.take_rows(t_emb, tokens.reshape(-1))
    pooled = ag.tensor_sum(ag.reshape(rows, (b, length, model.emb.shape[1])), axis=1)
    hidden = ag.ACTIVATION_OPS[model.activation](
        ag.add(ag.matmul(pooled, t_w), t_b))
    logits = ag.matmul(hidden, t_out)
    return logits, (t_emb, t_w, t_b, t_out)


def predict_real(model: RealFastText, tokens: np.ndarray) -> np.ndarray:
    logits, _ = _forward(model, np.asarray(tokens, dtype=np.int64))
    return np.argmax(logits.data, axis=1)


def evaluate_real(model: RealFastText, samples: list) -> float:
    by_len: dict = {}
    for i, (seq, _) in enumerate(samples):
        by_len.setdefault(len(seq), []).append(i)
    correct = 0
    for length, indices in by_len.items():
        tokens = np.array([samples[i][0] for i in indices], dtype=np.int64)
        labels = np.array([samples[i][1] for i in indices], dtype=np.int64)
        correct += int((predict_real(model, tokens) == labels).sum())
    return correct / len(samples)


def train_real_fasttext(model: RealFastText, train_samples: list, *, epochs: int,
                        lr: float, batch_size: int = 32, seed: int = 0) -> list:
    """Plain SGD; returns the per-epoch mean losses."""
    params = (model.emb, model.dense_w, model.dense_b, model.out_w)
    losses = []
    for epoch in range(epochs):
        rng = np.random.default_rng((seed + 1) * 1_000_003 + epoch)
        total, count = 0.0, 0
        for tokens, labels in iter_batches(train_samples, batch_size, rng):
            logits, tensors = _forward(model, tokens)
            loss = ag.cross_entropy_mean(logits, labels)
            ag.backward(loss)
            for arr, t in zip(params, tensors):
                if t.grad is not None:
                    arr -= lr * t.grad
            total += float(loss.data) * len(labels)
            count += len(labels)
        losses.append(total / count)
    return losses
