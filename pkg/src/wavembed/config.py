"""Validated run configuration for the CLI and training entry points."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .cplx import ACTIVATIONS
from .embedding import PHASE_MODES, SCHEMES
from .errors import ConfigError

ENCODERS = ("fasttext", "cnn", "rnn", "attention")
ATTENTION_NORMS = ("softmax", "linear")


@dataclass
class RunConfig:
    """Everything a train/eval run needs; unknown keys are rejected up front."""

    encoder: str = "fasttext"
    scheme: str = "word_sharing"
    phase_mode: str = "constant"
    dim: int = 8
    hidden: int = 16
    conv_width: int = 3
    conv_filters: int = 8
    activation: str = "tanh"
    attention_norm: str = "softmax"
    share_real_imag: bool = False
    train_frequencies: bool = True
    lr: float = 1e-3
    lr_freq_multiplier: float = 0.1
    momentum: float = 0.0
    batch: int = 32
    epochs: int = 10
    l2: float = 0.0
    seed: int = 0
    data: str | None = None
    test_data: str | None = None
    out: str | None = None

    def __post_init__(self):
        checks = [
            (self.encoder in ENCODERS, f"encoder {self.encoder!r} not in {ENCODERS}"),
            (self.scheme in SCHEMES, f"scheme {self.scheme!r} not in {SCHEMES}"),
            (self.phase_mode in PHASE_MODES,
             f"phase_mode {self.phase_mode!r} not in {PHASE_MODES}"),
            (self.activation in ACTIVATIONS,
             f"activation {self.activation!r} not in {sorted(ACTIVATIONS)}"),
            (self.attention_norm in ATTENTION_NORMS,
             f"attention_norm {self.attention_norm!r} not in {ATTENTION_NORMS}"),
            (self.dim >= 1, f"dim = {self.dim} must be >= 1"),
            (self.hidden >= 1, f"hidden = {self.hidden} must be >= 1"),
            (self.conv_width >= 1, f"conv_width = {self.conv_width} must be >= 1"),
            (self.conv_filters >= 1, f"conv_filters = {self.conv_filters} must be >= 1"),
            (self.lr >= 0, f"lr = {self.lr} must be >= 0"),
            (self.lr_freq_multiplier >= 0, "lr_freq_multiplier must be >= 0"),
            (0 <= self.momentum < 1, f"momentum = {self.momentum} must be in [0, 1)"),
            (self.batch >= 1, f"batch = {self.batch} must be >= 1"),
            (self.epochs >= 0, f"epochs = {self.epochs} must be >= 0"),
            (self.l2 >= 0, f"l2 = {self.l2} must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)


FIELD_NAMES = tuple(f.name for f in dataclasses.fields(RunConfig))


def config_from_dict(values: dict) -> RunConfig:
    """Build a RunConfig, rejecting keys that are not fields."""
    unknown = sorted(set(values) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    """Read a JSON object file into a RunConfig."""
    with open(path, encoding="utf-8") as fh:
        try:
            values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(values, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return config_from_dict(values)
