"""Shared vocabulary, sparse count/TfIdf vectors, and cosine similarity.

The vocabulary is built once over every collection that takes part in an
experiment (queries must be expressible in the candidate space) and is frozen
afterwards. Inverse document frequency follows

    idf(w) = ln(|D| / (1 + df(w)))

which can go negative for terms present in (nearly) every document; negative
values are kept as-is, since clamping would silently reorder rankings.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Collection, TextView
from .errors import ValidationError


class Vocabulary:
    """Bijective term/index maps plus document and collection frequencies."""

    def __init__(self, terms: Sequence[str], df: Sequence[int], cf: Sequence[int], n_docs: int):
        self._terms = list(terms)
        self._index = {t: i for i, t in enumerate(self._terms)}
        if len(self._index) != len(self._terms):
            raise ValidationError("vocabulary terms are not unique")
        self._df = list(df)
        self._cf = list(cf)
        self.n_docs = n_docs

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def index(self, term: str) -> int:
        return self._index[term]

    def term(self, idx: int) -> str:
        return self._terms[idx]

    def df(self, term: str) -> int:
        return self._df[self._index[term]]

    def cf(self, term: str) -> int:
        return self._cf[self._index[term]]


def build_vocabulary(collections: Sequence[Collection], view: TextView) -> Vocabulary:
    """Index every term of the given collections under the chosen view.

    Document frequency counts documents, not occurrences; the document count
    spans all input collections. Index order is first occurrence.
    """
    if not collections:
        raise ValidationError("no collections given")
    for coll in collections:
        if len(coll) == 0:
            raise ValidationError(f"collection {coll.name!r} is empty")
    terms: list[str] = []
    index: dict[str, int] = {}
    df: list[int] = []
    cf: list[int] = []
    n_docs = 0
    for coll in collections:
        for doc in coll:
            n_docs += 1
            seq = view.sequence(doc)
            for term in seq:
                if term not in index:
                    index[term] = len(terms)
                    terms.append(term)
                    df.append(0)
                    cf.append(0)
                cf[index[term]] += 1
            for term in set(seq):
                df[index[term]] += 1
    return Vocabulary(terms, df, cf, n_docs)


@dataclass(frozen=True)
class SparseVector:
    """Strictly increasing (index, weight) pairs; zero weights never stored.

    `oov` counts input token occurrences that were dropped because the term
    is not in the vocabulary.
    """

    indices: tuple[int, ...]
    weights: tuple[float, ...]
    oov: int = 0

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.weights):
            raise ValidationError("indices and weights differ in length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValidationError("indices must be strictly increasing")
        if any(w == 0.0 for w in self.weights):
            raise ValidationError("zero weights must not be stored")

    def __len__(self) -> int:
        return len(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)

    def to_dict(self) -> dict[int, float]:
        return dict(zip(self.indices, self.weights))

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))

    def scale(self, factor: float) -> "SparseVector":
        if factor == 0.0:
            return SparseVector((), (), self.oov)
        return SparseVector(self.indices, tuple(w * factor for w in self.weights), self.oov)


def bow(tokens: Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Raw term counts over the vocabulary; out-of-vocabulary tokens dropped."""
    counts: Counter[int] = Counter()
    oov = 0
    for tok in tokens:
        if tok in vocab:
            counts[vocab.index(tok)] += 1
        else:
            oov += 1
    items = sorted(counts.items())
    return SparseVector(
        indices=tuple(i for i, _ in items),
        weights=tuple(float(c) for _, c in items),
        oov=oov,
    )


def idf(term: str, vocab: Vocabulary) -> float:
    """Natural-log inverse document frequency; negative values are kept."""
    if term not in vocab:
        raise KeyError(f"unknown term {term!r}")
    return math.log(vocab.n_docs / (1 + vocab.df(term)))


def tfidf(tokens: Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Term frequency times idf; entries whose weight is exactly 0 drop out."""
    counts = bow(tokens, vocab)
    indices = []
    weights = []
    for i, tf in zip(counts.indices, counts.weights):
        w = tf * idf(vocab.term(i), vocab)
        if w != 0.0:
            indices.append(i)
            weights.append(w)
    return SparseVector(tuple(indices), tuple(weights), oov=counts.oov)


def cosine(u: SparseVector, v: SparseVector) -> float:
    """Cosine similarity of two sparse vectors; 0 if either is empty."""
    if not u or not v:
        return 0.0
    if len(u) > len(v):
        u, v = v, u
    vd = v.to_dict()
    dot = 0.0
    for i, w in zip(u.indices, u.weights):
        other = vd.get(i)
        if other is not None:
            dot += w * other
    if dot == 0.0:
        return 0.0
    return dot / (u.norm() * v.norm())
