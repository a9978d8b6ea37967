"""Pre-trained word vectors and sentence-embedding composition.

Vectors are consumed as a static table in the common text format: a header
line "<count> <dim>" followed by one "<term> <v1> ... <v_dim>" line per term.
There is no subword fallback; unknown terms simply have no vector.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import ParseError

Vector = np.ndarray


class EmbeddingTable:
    """Immutable term -> dense vector map with a fixed dimension."""

    def __init__(self, dim: int, vectors: dict[str, Vector]):
        self.dim = dim
        self._vectors = vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, term: str) -> bool:
        return term in self._vectors

    def __getitem__(self, term: str) -> Vector:
        return self._vectors[term]

    def get(self, term: str) -> Vector | None:
        return self._vectors.get(term)

    def terms(self) -> tuple[str, ...]:
        return tuple(self._vectors)


def load_embeddings(path, limit: int | None = None, restrict: set[str] | None = None) -> EmbeddingTable:
    """Load word vectors from text format, optionally capped or filtered.

    `limit` keeps the first `limit` stored entries in file order; `restrict`
    keeps only the given terms (useful to bound memory by the corpus
    vocabulary). Duplicate terms keep their first occurrence.
    """
    vectors: dict[str, Vector] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path}:1: missing '<count> <dim>' header")
        try:
            _, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ParseError(f"{path}:1: missing '<count> <dim>' header") from exc
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            term, values = parts[0], parts[1:]
            if len(values) != dim:
                raise ParseError(
                    f"{path}:{lineno}: expected {dim} values, got {len(values)}"
                )
            if restrict is not None and term not in restrict:
                continue
            if term in vectors:
                continue
            try:
                vectors[term] = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric value: {exc}") from exc
            if limit is not None and len(vectors) >= limit:
                break
    return EmbeddingTable(dim=dim, vectors=vectors)


def sentence_embedding(
    tokens: Iterable[str],
    table: EmbeddingTable,
    weights: Mapping[str, float] | None = None,
) -> tuple[Vector, bool]:
    """Compose a sentence vector from the vectors of its in-table tokens.

    Without weights this is the plain mean over token occurrences (repeats
    count repeatedly). With weights it is sum(w(t) * vec(t)) / sum(w(t)),
    again per occurrence; tokens without a weight contribute weight 0.

    Returns the vector and a flag that is False when nothing usable was
    found (no in-table token, or the weights summed to zero), in which case
    the vector is all zeros.
    """
    acc = np.zeros(table.dim, dtype=np.float64)
    total = 0.0
    for tok in tokens:
        vec = table.get(tok)
        if vec is None:
            continue
        w = 1.0 if weights is None else float(weights.get(tok, 0.0))
        if w == 0.0:
            continue
        acc += w * vec
        total += w
    if total == 0.0:
        return np.zeros(table.dim, dtype=np.float64), False
    return acc / total, True


def word_similarity(t1: str, t2: str, table: EmbeddingTable) -> float:
    """Cosine of the two term vectors; raises KeyError for unknown terms."""
    u, v = table[t1], table[t2]
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
