"""SGD training loop, weight decay policy, and the finite-difference gradient check."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .embedding import wrap_phases
from .errors import DivergenceError, PreconditionError
from .model import ModelGraph, backward, evaluate, forward_loss
from .report import VerificationReport


@dataclass
class TrainMetrics:
    """Per-epoch mean losses and final accuracies for one training run."""

    epoch_losses: list
    train_accuracy: float
    test_accuracy: float | None
    wall_time: float


def decayable(name: str) -> bool:
    """Weight decay applies to amplitudes and layer weights, never to the
    angular parameters (frequencies, phases)."""
    return name not in ("embedding.frequencies", "embedding.phases")


class SgdOptimizer:
    """Plain SGD with optional momentum, decoupled L2 decay, and a reduced
    learning rate on frequencies (their gradient scale grows with position)."""

    def __init__(self, model: ModelGraph, lr: float, lr_freq_multiplier: float = 0.1,
                 momentum: float = 0.0, l2: float = 0.0):
        self.model = model
        self.lr = lr
        self.lr_freq_multiplier = lr_freq_multiplier
        self.momentum = momentum
        self.l2 = l2
        self.velocity = {name: np.zeros_like(arr)
                         for name, arr in model.registry().items()} if momentum else None

    def step(self, grads: dict) -> None:
        for name, arr in self.model.registry().items():
            g = grads[name]
            if self.l2 and decayable(name):
                g = g + self.l2 * arr
            lr = self.lr
            if name == "embedding.frequencies":
                lr *= self.lr_freq_multiplier
            if self.velocity is not None:
                v = self.velocity[name]
                v *= self.momentum
                v += g
                g = v
            arr -= lr * g
        self.model.bump_version()


def iter_batches(samples: list, batch_size: int, rng: np.random.Generator):
    """Yield (tokens, labels) arrays; sequences are grouped by equal length."""
    by_len: dict = {}
    for i, (seq, _) in enumerate(samples):
        by_len.setdefault(len(seq), []).append(i)
    batches = []
    for length in sorted(by_len):
        idx = np.array(by_len[length], dtype=np.int64)
        rng.shuffle(idx)
        for s in range(0, len(idx), batch_size):
            batches.append(idx[s:s + batch_size])
    for k in rng.permutation(len(batches)):
        chosen = batches[k]
        tokens = np.array([samples[i][0] for i in chosen], dtype=np.int64)
        labels = np.array([samples[i][1] for i in chosen], dtype=np.int64)
        yield tokens, labels


def train(model: ModelGraph, train_samples: list, *, epochs: int, lr: float,
          batch_size: int = 32, lr_freq_multiplier: float = 0.1,
          momentum: float = 0.0, l2: float = 0.0, seed: int = 0,
          test_samples: list | None = None, stop_accuracy: float | None = None,
          log=None) -> TrainMetrics:
    """Run SGD for up to `epochs` passes; deterministic for a fixed seed.

    With stop_accuracy set (requires test_samples), training ends at the first
    epoch whose test accuracy reaches it.
    """
    if epochs < 0 or batch_size < 1:
        raise PreconditionError("epochs must be >= 0 and batch_size >= 1")
    opt = SgdOptimizer(model, lr, lr_freq_multiplier, momentum, l2)
    losses = []
    start = time.perf_counter()
    for epoch in range(epochs):
        rng = np.random.default_rng((seed + 1) * 1_000_003 + epoch)
        total, count = 0.0, 0
        for tokens, labels in iter_batches(train_samples, batch_size, rng):
            try:
                loss, cache = forward_loss(model, (tokens, labels))
            except DivergenceError as exc:
                raise DivergenceError(f"{exc} (epoch {epoch})", epoch=epoch) from None
            grads = backward(model, cache)
            opt.step(grads)
            total += loss * len(labels)
            count += len(labels)
        if model.table.phase_mode == "full":
            wrap_phases(model.table)
        losses.append(total / count)
        entry = {"epoch": epoch, "loss": losses[-1]}
        if stop_accuracy is not None and test_samples:
            entry["test_accuracy"] = evaluate(model, test_samples)
        if log is not None:
            log(entry)
        if stop_accuracy is not None and entry.get("test_accuracy", 0.0) >= stop_accuracy:
            break
    train_acc = evaluate(model, train_samples)
    test_acc = evaluate(model, test_samples) if test_samples else None
    return TrainMetrics(losses, train_acc, test_acc, time.perf_counter() - start)


def grad_check(model: ModelGraph, batch: tuple, eps: float = 1e-4,
               tol: float = 1e-4) -> VerificationReport:
    """Central differences vs the tape, per registered parameter entry.

    The error measure is |analytic - numeric| / max(|analytic|, |numeric|, 1),
    so it is relative for large gradients and absolute near zero.
    """
    if not 1e-6 <= eps <= 1e-2:
        raise PreconditionError(f"eps = {eps} outside [1e-6, 1e-2]")
    _, cache = forward_loss(model, batch)
    analytic = backward(model, cache)
    details = []
    worst = 0.0
    for name, arr in model.registry().items():
        flat = arr.reshape(-1)
        ga = analytic[name].reshape(-1)
        max_err = 0.0
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            up, _ = forward_loss(model, batch)
            flat[i] = orig - eps
            down, _ = forward_loss(model, batch)
            flat[i] = orig
            numeric = (up - down) / (2.0 * eps)
            err = abs(ga[i] - numeric) / max(abs(ga[i]), abs(numeric), 1.0)
            max_err = max(max_err, err)
        details.append({"param": name, "size": int(flat.size),
                        "max_rel_error": float(max_err)})
        worst = max(worst, float(max_err))
    grid = {"eps": eps, "tol": tol, "encoder": model.encoder,
            "parameters": int(sum(a.size for a in model.registry().values()))}
    return VerificationReport("gradient-check", grid, worst, worst < tol, details)
