"""Labeled token-sequence corpora: TSV ingestion and synthetic order-task generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError, ParseError

UNK = "<unk>"
MARKERS = ("ma", "mb")


@dataclass
class Dataset:
    """Index-encoded samples with the vocabulary that produced them."""

    samples: list
    vocab: dict
    num_classes: int

    def __post_init__(self):
        if self.vocab.get(UNK) != 0:
            raise ConfigError(f"vocabulary must reserve {UNK!r} at index 0")
        size = len(self.vocab)
        for seq, label in self.samples:
            if not 0 <= label < self.num_classes:
                raise ConfigError(f"label {label} outside [0, {self.num_classes})")
            if any(not 0 <= j < size for j in seq):
                raise ConfigError("token index outside vocabulary")


def tokenize(text: str) -> list:
    """Lowercased whitespace tokens."""
    return text.lower().split()


def build_vocab(token_lists) -> dict:
    """First-occurrence index assignment with the unknown token reserved at 0."""
    vocab = {UNK: 0}
    for tokens in token_lists:
        for tok in tokens:
            if tok not in vocab:
                vocab[tok] = len(vocab)
    return vocab


def _parse_lines(path) -> list:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            label_str, sep, text = line.partition("\t")
            if not sep:
                raise ParseError("expected label<TAB>text", line=lineno)
            try:
                label = int(label_str)
            except ValueError:
                raise ParseError(f"label {label_str!r} is not an integer",
                                 line=lineno) from None
            if label < 0:
                raise ParseError(f"label {label} is negative", line=lineno)
            tokens = tokenize(text)
            if not tokens:
                raise ParseError("no tokens after the label", line=lineno)
            rows.append((label, tokens))
    if not rows:
        raise DegenerateInputError(f"no samples in {path}")
    return rows


def load_tsv(path) -> Dataset:
    """Read label<TAB>text lines, building the vocabulary by first occurrence."""
    rows = _parse_lines(path)
    vocab = build_vocab(tokens for _, tokens in rows)
    samples = [([vocab[t] for t in tokens], label) for label, tokens in rows]
    num_classes = max(label for label, _ in rows) + 1
    return Dataset(samples, vocab, num_classes)


def encode_tsv(path, vocab: dict, num_classes: int) -> Dataset:
    """Read a split with an existing vocabulary; unseen tokens map to the unknown index."""
    rows = _parse_lines(path)
    samples = [([vocab.get(t, 0) for t in tokens], label) for label, tokens in rows]
    if any(label >= num_classes for label, _ in rows):
        raise ParseError(f"label outside the {num_classes} training classes")
    return Dataset(samples, vocab, num_classes)


def gen_order_task(seed: int, n_samples: int, sentence_len: int,
                   vocab_size: int) -> Dataset:
    """Balanced two-class task where only marker order separates the classes.

    Samples come in adjacent twin pairs: the same filler content with the two
    markers as "ma mb" (label 0) or "mb ma" (label 1) at the same slot, so the
    bag-of-words distributions of the classes are identical by construction.
    """
    if sentence_len < 4:
        raise ConfigError(f"sentence_len = {sentence_len} must be >= 4")
    if vocab_size < 10:
        raise ConfigError(f"vocab_size = {vocab_size} must be >= 10")
    if n_samples < 2 or n_samples % 2 != 0:
        raise ConfigError(f"n_samples = {n_samples} must be a positive even number")
    n_fillers = vocab_size - 1 - len(MARKERS)
    width = max(2, len(str(n_fillers - 1)))
    fillers = [f"f{i:0{width}d}" for i in range(n_fillers)]
    rng = np.random.default_rng(seed)
    sentences, labels = [], []
    for _ in range(n_samples // 2):
        content = [fillers[i] for i in rng.integers(0, n_fillers, sentence_len - 2)]
        slot = int(rng.integers(0, sentence_len - 1))
        for label, pair in enumerate((list(MARKERS), list(MARKERS)[::-1])):
            sentences.append(content[:slot] + pair + content[slot:])
            labels.append(label)
    vocab = build_vocab(sentences)
    samples = [([vocab[t] for t in sent], label)
               for sent, label in zip(sentences, labels)]
    return Dataset(samples, vocab, 2)


def gen_bow_task(seed: int, n_samples: int, sentence_len: int = 8,
                 vocab_size: int = 30) -> Dataset:
    """Balanced two-class toy separable by token counts alone.

    Each sentence carries two tokens drawn from its class-exclusive pool; the
    rest are shared fillers, so word order carries no information.
    """
    if sentence_len < 4:
        raise ConfigError(f"sentence_len = {sentence_len} must be >= 4")
    if vocab_size < 9:
        raise ConfigError(f"vocab_size = {vocab_size} must be >= 9")
    if n_samples < 2 or n_samples % 2 != 0:
        raise ConfigError(f"n_samples = {n_samples} must be a positive even number")
    pools = ([f"a{i}" for i in range(4)], [f"b{i}" for i in range(4)])
    n_fillers = vocab_size - 1 - 8
    width = max(2, len(str(n_fillers - 1)))
    fillers = [f"f{i:0{width}d}" for i in range(n_fillers)]
    rng = np.random.default_rng(seed)
    sentences, labels = [], []
    for i in range(n_samples):
        label = i % 2
        pool = pools[label]
        sent = [pool[j] for j in rng.integers(0, len(pool), 2)]
        sent += [fillers[j] for j in rng.integers(0, n_fillers, sentence_len - 2)]
        rng.shuffle(sent)
        sentences.append(sent)
        labels.append(label)
    vocab = build_vocab(sentences)
    samples = [([vocab[t] for t in sent], label)
               for sent, label in zip(sentences, labels)]
    return Dataset(samples, vocab, 2)


def split_pairs(dataset: Dataset, n_train: int) -> tuple:
    """Split at a twin-pair boundary so no pair straddles train and test."""
    if n_train % 2 != 0 or not 0 < n_train < len(dataset.samples):
        raise ConfigError(f"n_train = {n_train} must be even and inside the dataset")
    train = Dataset(dataset.samples[:n_train], dataset.vocab, dataset.num_classes)
    test = Dataset(dataset.samples[n_train:], dataset.vocab, dataset.num_classes)
    return train, test


def write_tsv(dataset: Dataset, path) -> None:
    """Write label<TAB>text lines; load_tsv on the result reproduces the dataset."""
    inverse = {i: tok for tok, i in dataset.vocab.items()}
    with open(path, "w", encoding="utf-8") as fh:
        for seq, label in dataset.samples:
            fh.write(f"{label}\t{' '.join(inverse[j] for j in seq)}\n")
