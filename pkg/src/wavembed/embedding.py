"""Trainable wave-embedding tables: amplitude, frequency, and phase per word.

A token j at position pos embeds as r[j] * e^{i*(w_eff(j)*pos + theta[j])}
per dimension. Frequencies may be shared across words (one per dimension) or
across dimensions (one per word) to cut parameter count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cplx import ComplexArray
from .errors import ConfigError, PreconditionError, ShapeError, VocabularyError

SCHEMES = ("full", "word_sharing", "dimension_sharing")
PHASE_MODES = ("constant", "full")

TWO_PI = 2.0 * np.pi


@dataclass
class ComplexEmbeddingTable:
    """Backing arrays for the three parameter families plus their sharing mode.

    amplitudes is always (vocab, dim). frequencies is (vocab, dim) under the
    full scheme, (dim,) under word_sharing, (vocab,) under dimension_sharing.
    phases is (vocab, dim) when phase_mode is "full", else a fixed scalar
    shared by every entry.
    """

    amplitudes: np.ndarray
    frequencies: np.ndarray
    phases: np.ndarray
    scheme: str = "full"
    phase_mode: str = "constant"

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.float64)
        self.frequencies = np.asarray(self.frequencies, dtype=np.float64)
        self.phases = np.asarray(self.phases, dtype=np.float64)
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme {self.scheme!r} not in {SCHEMES}")
        if self.phase_mode not in PHASE_MODES:
            raise ConfigError(f"phase_mode {self.phase_mode!r} not in {PHASE_MODES}")
        if self.amplitudes.ndim != 2:
            raise ShapeError(f"amplitudes must be (vocab, dim), got {self.amplitudes.shape}")
        w, d = self.amplitudes.shape
        expected = {"full": (w, d), "word_sharing": (d,), "dimension_sharing": (w,)}
        if self.frequencies.shape != expected[self.scheme]:
            raise ShapeError(
                f"frequencies shape {self.frequencies.shape} invalid for "
                f"{self.scheme}: expected {expected[self.scheme]}")
        if self.phase_mode == "full":
            if self.phases.shape != (w, d):
                raise ShapeError(f"phases shape {self.phases.shape} != {(w, d)}")
        elif self.phases.shape != ():
            raise ShapeError("constant phase_mode stores a single scalar")

    @property
    def vocab_size(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]

    def effective_frequencies(self) -> np.ndarray:
        """Frequencies resolved to a full (vocab, dim) view (read-only)."""
        w, d = self.amplitudes.shape
        if self.scheme == "full":
            return self.frequencies
        if self.scheme == "word_sharing":
            return np.broadcast_to(self.frequencies, (w, d))
        return np.broadcast_to(self.frequencies[:, None], (w, d))

    def effective_phases(self) -> np.ndarray:
        """Phases resolved to a full (vocab, dim) view (read-only)."""
        if self.phase_mode == "full":
            return self.phases
        return np.broadcast_to(self.phases, self.amplitudes.shape)

    def periods(self) -> np.ndarray:
        """Positions per revolution, 2*pi/w_eff; inf where the frequency is 0."""
        freq = self.effective_frequencies()
        with np.errstate(divide="ignore"):
            return np.where(freq == 0.0, np.inf, TWO_PI / freq)


def init_table(vocab_size: int, dim: int, scheme: str = "full",
               phase_mode: str = "constant",
               rng: np.random.Generator | None = None) -> ComplexEmbeddingTable:
    """Fresh table: amplitudes uniform in [-1,1]/sqrt(dim), frequencies in [-1/dim, 1/dim]."""
    if vocab_size < 1 or dim < 1:
        raise ConfigError(f"vocab_size = {vocab_size}, dim = {dim} must be >= 1")
    rng = np.random.default_rng() if rng is None else rng
    amplitudes = rng.uniform(-1.0, 1.0, (vocab_size, dim)) / np.sqrt(dim)
    shapes = {"full": (vocab_size, dim), "word_sharing": (dim,),
              "dimension_sharing": (vocab_size,)}
    if scheme not in shapes:
        raise ConfigError(f"scheme {scheme!r} not in {SCHEMES}")
    frequencies = rng.uniform(-1.0 / dim, 1.0 / dim, shapes[scheme])
    if phase_mode == "full":
        phases = np.zeros((vocab_size, dim))
    else:
        phases = np.array(0.0)
    return ComplexEmbeddingTable(amplitudes, frequencies, phases, scheme, phase_mode)


def _check_token(table: ComplexEmbeddingTable, j: int, where: str = "") -> int:
    j = int(j)
    if not 0 <= j < table.vocab_size:
        suffix = f" at {where}" if where else ""
        raise VocabularyError(
            f"token index {j}{suffix} outside vocabulary of size {table.vocab_size}")
    return j


def embed_token(table: ComplexEmbeddingTable, j: int, pos: int) -> ComplexArray:
    """Embedding of word j at position pos; modulus equals |amplitude| per dim."""
    j = _check_token(table, j)
    if pos < 0:
        raise PreconditionError(f"pos = {pos} must be >= 0")
    angle = table.effective_frequencies()[j] * pos + table.effective_phases()[j]
    r = table.amplitudes[j]
    return ComplexArray(r * np.cos(angle), r * np.sin(angle))


def positional_part(table: ComplexEmbeddingTable, j: int, pos: int) -> ComplexArray:
    """Unit-modulus factor e^{i*(w_eff*pos + theta)}; embed_token = amplitudes * this."""
    j = _check_token(table, j)
    if pos < 0:
        raise PreconditionError(f"pos = {pos} must be >= 0")
    angle = table.effective_frequencies()[j] * pos + table.effective_phases()[j]
    return ComplexArray(np.cos(angle), np.sin(angle))


def gather_rows(table: ComplexEmbeddingTable, tokens) -> tuple:
    """Contiguous (len, dim) amplitude/frequency/phase rows for a token sequence."""
    tokens = np.asarray(tokens, dtype=np.int64)
    amp = np.ascontiguousarray(table.amplitudes[tokens])
    freq = np.ascontiguousarray(table.effective_frequencies()[tokens])
    phase = np.ascontiguousarray(table.effective_phases()[tokens])
    return amp, freq, phase


def embed_sequence(table: ComplexEmbeddingTable, tokens) -> ComplexArray:
    """Embed a token sequence at positions 1..len (row t is token t at position t+1)."""
    tokens = list(tokens)
    for t, j in enumerate(tokens):
        _check_token(table, int(j), where=f"sequence position {t}")
    if not tokens:
        return ComplexArray.zeros((0, table.dim))
    amp, freq, phase = gather_rows(table, tokens)
    pos = np.arange(1, len(tokens) + 1, dtype=np.float64)
    re, im = kernels.wave_planes(amp, freq, phase, pos)
    return ComplexArray(re, im)


def parameter_count(table: ComplexEmbeddingTable) -> int:
    """Total trainable scalars, by enumerating the backing arrays."""
    n = table.amplitudes.size + table.frequencies.size
    if table.phase_mode == "full":
        n += table.phases.size
    return n


def scheme_parameter_count(vocab_size: int, dim: int, scheme: str,
                           phase_mode: str = "constant") -> int:
    """Closed-form parameter total for a scheme; must match parameter_count."""
    if scheme not in SCHEMES:
        raise ConfigError(f"scheme {scheme!r} not in {SCHEMES}")
    if phase_mode not in PHASE_MODES:
        raise ConfigError(f"phase_mode {phase_mode!r} not in {PHASE_MODES}")
    freq = {"full": vocab_size * dim, "word_sharing": dim,
            "dimension_sharing": vocab_size}[scheme]
    phase = vocab_size * dim if phase_mode == "full" else 0
    return vocab_size * dim + freq + phase


@dataclass(frozen=True)
class SensitivityProfile:
    """Mean absolute frequency per word and the induced descending ranking."""

    delta: np.ndarray
    ranking: np.ndarray


def frequency_sensitivity(table: ComplexEmbeddingTable) -> SensitivityProfile:
    """delta[j] = mean_d |w_eff[j][d]|; ranking descending, ties by index."""
    delta = np.abs(table.effective_frequencies()).mean(axis=1)
    ranking = np.argsort(-delta, kind="stable")
    return SensitivityProfile(delta, ranking)


def wrap_phases(table: ComplexEmbeddingTable) -> ComplexEmbeddingTable:
    """Reduce stored phases into [0, 2*pi) in place; embeddings are unchanged."""
    wrapped = np.mod(table.phases, TWO_PI)
    # mod of a tiny negative can round up to exactly 2*pi
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if table.phases.shape == ():
        table.phases = np.asarray(wrapped, dtype=np.float64)
    else:
        table.phases[...] = wrapped
    return table


def save_table(table: ComplexEmbeddingTable, path) -> None:
    """Write the table to an .npz container; float64 round-trips bit-exactly."""
    header = json.dumps({"vocab_size": table.vocab_size, "dim": table.dim,
                         "scheme": table.scheme, "phase_mode": table.phase_mode})
    np.savez(path, header=np.asarray(header), amplitudes=table.amplitudes,
             frequencies=table.frequencies, phases=table.phases)


def load_table(path) -> ComplexEmbeddingTable:
    """Read a table written by save_table."""
    with np.load(path) as data:
        header = json.loads(str(data["header"]))
        table = ComplexEmbeddingTable(
            data["amplitudes"], data["frequencies"], data["phases"],
            header["scheme"], header["phase_mode"])
    if (table.vocab_size, table.dim) != (header["vocab_size"], header["dim"]):
        raise ConfigError("table header disagrees with array shapes")
    return table
