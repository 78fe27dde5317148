"""Sliding n-gram similarity between two sequences under a wave embedding."""

from __future__ import annotations

import numpy as np

from .cplx import ComplexArray, complex_cosine
from .embedding import ComplexEmbeddingTable, embed_sequence
from .errors import DegenerateInputError, PreconditionError
from .layers import fasttext_pool


def _pooled_windows(table: ComplexEmbeddingTable, tokens, n: int) -> list:
    rows = embed_sequence(table, tokens)
    pools = []
    for s in range(len(tokens) - n + 1):
        window = ComplexArray(rows.re[s:s + n], rows.im[s:s + n])
        pools.append(fasttext_pool(window))
    return pools


def ngram_similarity(table: ComplexEmbeddingTable, tokens_a, tokens_b,
                     n: int) -> np.ndarray:
    """Cosine similarity of every n-gram of a against every n-gram of b.

    Each n-gram is embedded at its true positions within its own sentence and
    sum-pooled; entry (s, t) compares a's s-th window with b's t-th.
    """
    if n < 1:
        raise PreconditionError(f"n = {n} must be >= 1")
    tokens_a, tokens_b = list(tokens_a), list(tokens_b)
    if len(tokens_a) < n or len(tokens_b) < n:
        raise DegenerateInputError(
            f"sentences of lengths {len(tokens_a)}, {len(tokens_b)} are shorter than n = {n}")
    pools_a = _pooled_windows(table, tokens_a, n)
    pools_b = _pooled_windows(table, tokens_b, n)
    out = np.empty((len(pools_a), len(pools_b)))
    for s, u in enumerate(pools_a):
        for t, v in enumerate(pools_b):
            out[s, t] = complex_cosine(u, v)
    return out
