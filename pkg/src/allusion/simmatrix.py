"""Term-by-term similarity matrices backing the soft cosine models.

A matrix is symmetric with an implicit unit diagonal and off-diagonal
entries in [0, 1]. Entries are computed lazily per unordered index pair and
cached, so a 46k-term vocabulary never gets materialized as a dense square;
only pairs that actually co-occur in compared documents are touched. The
cache fill is idempotent, which keeps concurrent lookups consistent.

Three constructions are provided: embedding cosine (negative values clamped
to zero), shared-synonym reciprocal counts from a lexicon, and a seeded
random baseline. Raising a matrix to an elementwise power sharpens the gap
between strong and weak similarities.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .embeddings import EmbeddingTable
from .errors import ParseError, ValidationError
from .vectorize import Vocabulary


class SimilarityMatrix:
    """Lazy symmetric similarity lookup over a fixed vocabulary."""

    def __init__(self, vocab: Vocabulary, fill: Callable[[int, int], float], name: str):
        self.vocab = vocab
        self.name = name
        self._fill = fill
        self._cache: dict[tuple[int, int], float] = {}

    def lookup(self, i: int, j: int) -> float:
        """Similarity of terms i and j; 1 on the diagonal."""
        if i == j:
            if not 0 <= i < len(self.vocab):
                raise IndexError(f"term index {i} out of range")
            return 1.0
        if i > j:
            i, j = j, i
        if not (0 <= i and j < len(self.vocab)):
            raise IndexError(f"term index pair ({i}, {j}) out of range")
        key = (i, j)
        value = self._cache.get(key)
        if value is None:
            value = float(self._fill(i, j))
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValidationError(
                    f"similarity {self.name!r} produced {value} for pair {key}"
                )
            value = min(1.0, max(0.0, value))
            self._cache[key] = value
        return value

    def lookup_terms(self, t1: str, t2: str) -> float:
        return self.lookup(self.vocab.index(t1), self.vocab.index(t2))


def identity_matrix(vocab: Vocabulary) -> SimilarityMatrix:
    """Diagonal-only matrix; soft cosine over it reduces to plain cosine."""
    return SimilarityMatrix(vocab, lambda i, j: 0.0, name="identity")


def embedding_matrix(table: EmbeddingTable, vocab: Vocabulary) -> SimilarityMatrix:
    """Off-diagonal entries are max(0, cos) of the two term vectors.

    Pairs where either term has no vector get similarity 0.
    """
    units: dict[int, np.ndarray] = {}
    for i in range(len(vocab)):
        vec = table.get(vocab.term(i))
        if vec is not None:
            norm = float(np.linalg.norm(vec))
            if norm > 0.0:
                units[i] = vec / norm

    def fill(i: int, j: int) -> float:
        ui, uj = units.get(i), units.get(j)
        if ui is None or uj is None:
            return 0.0
        return max(0.0, float(np.dot(ui, uj)))

    return SimilarityMatrix(vocab, fill, name="embedding")


class SynonymLexicon:
    """Term -> synonym-set map, symmetrized so membership is mutual."""

    def __init__(self, synsets: dict[str, set[str]]):
        symmetric: dict[str, set[str]] = {t: set(s) for t, s in synsets.items()}
        for term, syns in synsets.items():
            for syn in syns:
                symmetric.setdefault(syn, set()).add(term)
        self._synsets = {t: frozenset(s) for t, s in symmetric.items()}

    def synonyms(self, term: str) -> frozenset[str]:
        return self._synsets.get(term, frozenset())

    def __len__(self) -> int:
        return len(self._synsets)


def load_lexicon(path, lowercase: bool = True) -> SynonymLexicon:
    """Read a synonym lexicon from lines of "lemma<TAB>syn1,syn2,...";"""
    synsets: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise ParseError(f"{path}:{lineno}: expected 'lemma<TAB>synonyms'")
            lemma, _, rest = line.partition("\t")
            if lowercase:
                lemma = lemma.lower()
                rest = rest.lower()
            syns = {s.strip() for s in rest.split(",") if s.strip()}
            synsets.setdefault(lemma.strip(), set()).update(syns)
    return SynonymLexicon(synsets)


def wordnet_matrix(
    lexicon: SynonymLexicon, vocab: Vocabulary, mode: str = "reciprocal"
) -> SimilarityMatrix:
    """Similarity from shared synonym sets, over a lemma vocabulary.

    The default "reciprocal" mode scores 1 / |T_i & T_j| and 0 for disjoint
    sets. The "jaccard" mode (|T_i & T_j| / |T_i | T_j|) is an alternative
    reading kept behind this flag; it is not the reference formulation.
    """
    if mode not in ("reciprocal", "jaccard"):
        raise ValidationError(f"unknown wordnet similarity mode {mode!r}")

    def fill(i: int, j: int) -> float:
        ti = lexicon.synonyms(vocab.term(i))
        tj = lexicon.synonyms(vocab.term(j))
        inter = len(ti & tj)
        if inter == 0:
            return 0.0
        if mode == "reciprocal":
            return 1.0 / inter
        return inter / len(ti | tj)

    return SimilarityMatrix(vocab, fill, name=f"wordnet-{mode}")


def random_matrix(
    vocab: Vocabulary, seed: int, mean: float = 0.5, sd: float = 0.05
) -> SimilarityMatrix:
    """Random baseline: each unordered pair draws once from N(mean, sd).

    Draws are keyed by (seed, i, j), so the matrix is reproducible from the
    seed regardless of lookup order; values are clamped into [0, 1].
    """

    def fill(i: int, j: int) -> float:
        rng = np.random.default_rng((seed, i, j))
        return min(1.0, max(0.0, float(rng.normal(mean, sd))))

    return SimilarityMatrix(vocab, fill, name="random")


def power_boost(matrix: SimilarityMatrix, n: int) -> SimilarityMatrix:
    """Raise every off-diagonal entry to the n-th power (elementwise).

    A monotone transform: it preserves the relative order of entries while
    widening the gap between strong and weak similarities.
    """
    if n < 1:
        raise ValidationError(f"power must be >= 1, got {n}")
    if n == 1:
        return matrix
    return SimilarityMatrix(
        matrix.vocab,
        lambda i, j: matrix.lookup(i, j) ** n,
        name=f"{matrix.name}^{n}",
    )
