"""Ranking metrics, model comparison, and per-term score explanations.

Mean reciprocal rank and precision-at-k are reported on a 0-100 scale. The
harness assumes exactly one relevant document per query; only active
(non-discarded) queries enter evaluation. These metrics describe retrieval
over a pre-annotated benchmark where every query is known to have a match,
not detection performance on unrestricted text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .corpus import Collection, QueryInstance, TextView
from .errors import UnsupportedModelError, ValidationError
from .models import (
    CosineModel,
    Ranking,
    RetrievalModel,
    SoftCosineModel,
    _bilinear,
    rank,
)
from .simmatrix import SimilarityMatrix, identity_matrix
from .vectorize import SparseVector, Vocabulary, tfidf


def _rank_positions(rankings: Iterable) -> list[int]:
    positions = []
    for r in rankings:
        pos = r.rank_of_relevant if isinstance(r, Ranking) else int(r)
        if pos < 1:
            raise ValidationError(f"rank positions are 1-based, got {pos}")
        positions.append(pos)
    if not positions:
        raise ValidationError("no rankings given")
    return positions


def mrr(rankings: Iterable) -> float:
    """Mean reciprocal rank of the relevant document, scaled to [0, 100].

    Accepts Ranking objects or bare 1-based rank positions.
    """
    positions = _rank_positions(rankings)
    return 100.0 * sum(1.0 / p for p in positions) / len(positions)


def precision_at_k(rankings: Iterable, k: int) -> float:
    """Percentage of queries whose relevant document ranks within the top k."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    positions = _rank_positions(rankings)
    return 100.0 * sum(1 for p in positions if p <= k) / len(positions)


@dataclass(frozen=True)
class EvalReport:
    """Metrics of one (model, view) cell plus the per-query rank trail."""

    model: str
    view: TextView
    mrr: float
    p_at_k: dict[int, float]
    ranks: tuple[int, ...]
    query_ids: tuple[str, ...]

    @property
    def n_queries(self) -> int:
        return len(self.ranks)


def evaluate_model(
    model: RetrievalModel,
    queries: Sequence[QueryInstance],
    source: Collection,
    target: Collection,
    ks: Sequence[int] = (10, 20),
) -> EvalReport:
    """Rank every active query with one model and aggregate the metrics."""
    active = [q for q in queries if not q.discarded]
    if not active:
        raise ValidationError("no active queries to evaluate")
    rankings = [rank(model, q, source, target) for q in active]
    return EvalReport(
        model=model.name,
        view=model.view,
        mrr=mrr(rankings),
        p_at_k={k: precision_at_k(rankings, k) for k in ks},
        ranks=tuple(r.rank_of_relevant for r in rankings),
        query_ids=tuple(r.query_id for r in rankings),
    )


def compare(
    models: Sequence[RetrievalModel],
    queries: Sequence[QueryInstance],
    source: Collection,
    target: Collection,
    ks: Sequence[int] = (10, 20),
) -> list[EvalReport]:
    """Evaluate several configured models over the same query set."""
    return [evaluate_model(m, queries, source, target, ks) for m in models]


class TermContribution(NamedTuple):
    side: str  # "query" or "candidate"
    position: int
    term: str
    contribution: float


@dataclass(frozen=True)
class Explanation:
    """Decomposition of a bilinear similarity score over both texts.

    Per-side contributions each sum to the score. A term's share is split
    evenly over its occurrences so that every token position gets a row.
    """

    score: float
    rows: tuple[TermContribution, ...]

    def side_total(self, side: str) -> float:
        return sum(r.contribution for r in self.rows if r.side == side)


def _decomposable(model: RetrievalModel) -> tuple[SimilarityMatrix, Vocabulary]:
    if isinstance(model, SoftCosineModel):
        return model.matrix, model.vocab
    if isinstance(model, CosineModel) and model.scheme == "tfidf":
        return identity_matrix(model.vocab), model.vocab
    raise UnsupportedModelError(
        f"model {model.name!r} has no bilinear decomposition; "
        "use tfidf or a soft-cosine model"
    )


def explain(
    model: RetrievalModel,
    query_terms: Sequence[str],
    cand_terms: Sequence[str],
) -> Explanation:
    """Per-term contributions of both texts to a TfIdf/soft-cosine score.

    The contribution of query term i is sum_j S_ij q_i c_j divided by the
    score's denominator (and symmetrically for candidate terms), so each
    side's contributions add up to the score itself.
    """
    matrix, vocab = _decomposable(model)
    qvec: SparseVector = tfidf(query_terms, vocab)
    cvec: SparseVector = tfidf(cand_terms, vocab)
    leg_q = max(_bilinear(matrix, qvec, qvec), 0.0)
    leg_c = max(_bilinear(matrix, cvec, cvec), 0.0)
    denominator = math.sqrt(leg_q) * math.sqrt(leg_c)
    degenerate = denominator == 0.0 or not math.isfinite(denominator)

    def term_share(vec: SparseVector, other: SparseVector, idx: int, weight: float) -> float:
        if degenerate:
            return 0.0
        total = 0.0
        for j, wj in zip(other.indices, other.weights):
            s = matrix.lookup(idx, j)
            if s != 0.0:
                total += s * weight * wj
        return total / denominator

    score = 0.0 if degenerate else _bilinear(matrix, qvec, cvec) / denominator
    if not math.isfinite(score):
        score = 0.0
        degenerate = True

    rows = []
    for side, terms, vec, other in (
        ("query", query_terms, qvec, cvec),
        ("candidate", cand_terms, cvec, qvec),
    ):
        shares = {
            idx: term_share(vec, other, idx, weight)
            for idx, weight in zip(vec.indices, vec.weights)
        }
        counts: dict[int, int] = {}
        for t in terms:
            if t in vocab:
                i = vocab.index(t)
                counts[i] = counts.get(i, 0) + 1
        for position, t in enumerate(terms):
            if t in vocab:
                i = vocab.index(t)
                value = shares.get(i, 0.0) / counts[i]
            else:
                value = 0.0
            rows.append(TermContribution(side, position, t, value))
    return Explanation(score=score, rows=tuple(rows))
