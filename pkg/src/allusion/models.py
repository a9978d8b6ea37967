"""Retrieval models: lexical, embedding-based, and hybrid scoring.

Every model turns a query term sequence into a total ranking over a candidate
collection. Scores may be undefined for some (query, candidate) pairs: the
shared-word score needs at least two distinct shared terms, and the word
movement distance needs at least one embedded term on both sides. Undefined
candidates always sort after the defined ones, by ascending id, so rankings
stay total and deterministic.

Models are immutable once configured and cache per-document state internally;
ranking the same query twice yields identical output.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Collection, Document, QueryInstance, TextView, query_text
from .embeddings import EmbeddingTable, sentence_embedding
from .errors import ValidationError
from .transport import solve_transport
from .simmatrix import (
    SimilarityMatrix,
    SynonymLexicon,
    embedding_matrix,
    identity_matrix,
    power_boost,
    random_matrix,
    wordnet_matrix,
)
from .vectorize import SparseVector, Vocabulary, bow, build_vocabulary, cosine, idf, tfidf

MODEL_NAMES = (
    "bow",
    "tfidf",
    "tesserae",
    "emb-bow",
    "emb-tfidf",
    "wmd",
    "sc-emb",
    "sc-wn",
    "sc-rnd",
    "t+wmd",
)

# counts pathological events (non-finite soft-cosine denominators etc.)
diagnostics: Counter = Counter()


# ---------------------------------------------------------------------------
# score primitives


def score_bow(query_terms: Sequence[str], cand_terms: Sequence[str], vocab: Vocabulary) -> float:
    return cosine(bow(query_terms, vocab), bow(cand_terms, vocab))


def score_tfidf(query_terms: Sequence[str], cand_terms: Sequence[str], vocab: Vocabulary) -> float:
    return cosine(tfidf(query_terms, vocab), tfidf(cand_terms, vocab))


def rare_pair_distance(terms: Sequence[str], freqs: Mapping[str, float]) -> int:
    """Token-position distance between the two most infrequent words.

    Candidate word pairs are those realizing the two smallest frequency
    values; frequency ties are broken in favor of the pair (and occurrence
    pair) with the largest positional distance. Returns 0 when the sequence
    has fewer than two distinct words.
    """
    distinct = sorted(set(terms), key=lambda w: (freqs[w], w))
    if len(distinct) < 2:
        return 0
    f1, f2 = freqs[distinct[0]], freqs[distinct[1]]
    cands = [w for w in distinct if freqs[w] <= f2]
    positions = {w: [i for i, t in enumerate(terms) if t == w] for w in cands}
    best = 0
    for a, b in itertools.combinations(cands, 2):
        if tuple(sorted((freqs[a], freqs[b]))) != (f1, f2):
            continue
        d = max(abs(i - j) for i in positions[a] for j in positions[b])
        if d > best:
            best = d
    return best


def score_tesserae(
    query_terms: Sequence[str],
    cand_terms: Sequence[str],
    query_freqs: Mapping[str, float],
    cand_freqs: Mapping[str, float],
) -> float | None:
    """Inverse-frequency score of shared words over rare-word spread.

        ln( sum_{w shared} (1/f(w, query) + 1/f(w, cand)) / (d_q + d_c) )

    where d is the positional distance between the two rarest words of each
    text. Undefined (None) with fewer than two distinct shared terms, or when
    both rare-word spreads are zero. Frequency tables must cover every term
    of the respective text and hold positive values; collection-level
    estimates are the intended source.
    """
    shared = set(query_terms) & set(cand_terms)
    if len(shared) < 2:
        return None
    numerator = sum(1.0 / query_freqs[w] + 1.0 / cand_freqs[w] for w in shared)
    d_q = rare_pair_distance(query_terms, query_freqs)
    d_c = rare_pair_distance(cand_terms, cand_freqs)
    if d_q + d_c == 0:
        return None
    return math.log(numerator / (d_q + d_c))


def _dense_cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def score_sentemb(
    query_terms: Sequence[str],
    cand_terms: Sequence[str],
    table: EmbeddingTable,
    weights: Mapping[str, float] | None = None,
) -> float:
    """Cosine between composed sentence embeddings; 0 on zero vectors."""
    qv, q_ok = sentence_embedding(query_terms, table, weights)
    cv, c_ok = sentence_embedding(cand_terms, table, weights)
    if not q_ok or not c_ok:
        return 0.0
    return _dense_cosine(qv, cv)


# ---------------------------------------------------------------------------
# word movement distance


@dataclass(frozen=True)
class FlowMatrix:
    """Optimal transport plan between two term histograms.

    Row sums over `flows` reproduce `source_weights` and column sums
    `target_weights` (up to float round-off); zero-mass basis cells are not
    stored.
    """

    flows: dict[tuple[str, str], float]
    source_weights: dict[str, float]
    target_weights: dict[str, float]

    def marginal_error(self) -> float:
        row: dict[str, float] = {t: 0.0 for t in self.source_weights}
        col: dict[str, float] = {t: 0.0 for t in self.target_weights}
        for (s, t), mass in self.flows.items():
            row[s] += mass
            col[t] += mass
        err = max(abs(row[t] - w) for t, w in self.source_weights.items())
        return max(
            err, max(abs(col[t] - w) for t, w in self.target_weights.items())
        )


class _DocPoints:
    """In-table support of one text: distinct terms, masses, raw vectors."""

    __slots__ = ("terms", "masses", "matrix")

    def __init__(self, terms: tuple[str, ...], masses: np.ndarray, matrix: np.ndarray):
        self.terms = terms
        self.masses = masses
        self.matrix = matrix


def _doc_points(terms: Sequence[str], table: EmbeddingTable) -> _DocPoints | None:
    counts: Counter[str] = Counter(t for t in terms if t in table)
    if not counts:
        return None
    kept = tuple(sorted(counts))
    total = sum(counts.values())
    masses = np.array([counts[t] / total for t in kept], dtype=np.float64)
    matrix = np.stack([table[t] for t in kept])
    return _DocPoints(kept, masses, matrix)


def _ground_cost(a: _DocPoints, b: _DocPoints, kind: str) -> np.ndarray:
    if kind == "cosine":
        na = np.linalg.norm(a.matrix, axis=1)
        nb = np.linalg.norm(b.matrix, axis=1)
        na[na == 0.0] = 1.0
        nb[nb == 0.0] = 1.0
        cost = 1.0 - (a.matrix / na[:, None]) @ (b.matrix / nb[:, None]).T
    elif kind == "euclidean":
        diff = a.matrix[:, None, :] - b.matrix[None, :, :]
        cost = np.linalg.norm(diff, axis=2)
    else:
        raise ValidationError(f"unknown ground cost {kind!r}")
    # identical terms cost exactly nothing, whatever round-off says
    for i, t in enumerate(a.terms):
        for j, u in enumerate(b.terms):
            if t == u:
                cost[i, j] = 0.0
    np.maximum(cost, 0.0, out=cost)
    return cost


def wmd(
    query_terms: Sequence[str],
    cand_terms: Sequence[str],
    table: EmbeddingTable,
    cost: str = "cosine",
    return_flow: bool = False,
):
    """Minimum-cost transport between the two L1-normalized term histograms.

    Restricted to in-table terms; the ground cost between two words is one
    minus their embedding cosine (or their euclidean distance). Returns the
    distance, or (distance, FlowMatrix) with `return_flow`; returns None when
    either side has no embedded term at all, marking the pair incomparable.
    """
    a = _doc_points(query_terms, table)
    b = _doc_points(cand_terms, table)
    if a is None or b is None:
        return None
    ground = _ground_cost(a, b, cost)
    objective, cells = solve_transport(a.masses, b.masses, ground)
    if not return_flow:
        return objective
    flows = {
        (a.terms[i], b.terms[j]): mass for (i, j), mass in cells.items() if mass != 0.0
    }
    flow = FlowMatrix(
        flows=flows,
        source_weights={t: float(m) for t, m in zip(a.terms, a.masses)},
        target_weights={t: float(m) for t, m in zip(b.terms, b.masses)},
    )
    return objective, flow


# ---------------------------------------------------------------------------
# soft cosine


def _bilinear(matrix: SimilarityMatrix, x: SparseVector, y: SparseVector) -> float:
    total = 0.0
    for i, wi in zip(x.indices, x.weights):
        for j, wj in zip(y.indices, y.weights):
            s = matrix.lookup(i, j)
            if s != 0.0:
                total += s * wi * wj
    return total


def soft_cosine(u: SparseVector, v: SparseVector, matrix: SimilarityMatrix) -> float:
    """Cosine generalized by a term-similarity matrix.

        sum_ij S_ij u_i v_j / (sqrt(sum_ij S_ij u_i u_j) sqrt(sum_ij S_ij v_i v_j))

    With the identity matrix this is exactly the cosine. Denominator legs are
    floored at 0 before the square root; a vanishing or non-finite result
    yields score 0 and bumps the `diagnostics` counter.
    """
    if not u or not v:
        return 0.0
    numerator = _bilinear(matrix, u, v)
    leg_u = max(_bilinear(matrix, u, u), 0.0)
    leg_v = max(_bilinear(matrix, v, v), 0.0)
    denominator = math.sqrt(leg_u) * math.sqrt(leg_v)
    if denominator == 0.0 or not math.isfinite(denominator):
        diagnostics["soft_cosine_non_finite"] += 1
        return 0.0
    value = numerator / denominator
    if not math.isfinite(value):
        diagnostics["soft_cosine_non_finite"] += 1
        return 0.0
    return value


# ---------------------------------------------------------------------------
# rankings


@dataclass(frozen=True)
class Ranking:
    """Total ordering of candidate ids with scores; None marks undefined.

    Scores descend within each comparability segment (distance-like models
    are stored as-is and ordered ascending; the hybrid model concatenates a
    shared-word segment and a distance segment on different scales).
    """

    query_id: str
    entries: tuple[tuple[str, float | None], ...]
    rank_of_relevant: int

    def top(self, k: int) -> tuple[tuple[str, float | None], ...]:
        return self.entries[:k]

    def check_total(self, candidate_ids: Sequence[str]) -> None:
        ranked = [cid for cid, _ in self.entries]
        if sorted(ranked) != sorted(candidate_ids):
            raise ValidationError(
                f"ranking for {self.query_id!r} is not a total ordering"
            )


def order_scores(
    scores: Mapping[str, float | None], ascending: bool = False
) -> list[tuple[str, float | None]]:
    """Sort defined scores (ties by ascending id), undefined last by id."""
    defined = [(cid, s) for cid, s in scores.items() if s is not None]
    defined.sort(key=lambda p: (p[1] if ascending else -p[1], p[0]))
    undefined = sorted(cid for cid, s in scores.items() if s is None)
    return defined + [(cid, None) for cid in undefined]


class RetrievalModel:
    """Base: a named, view-bound scorer over (query terms, candidate doc)."""

    name: str = "abstract"
    ascending: bool = False

    def __init__(self, view: TextView):
        self.view = view

    def score_one(self, query_terms: Sequence[str], doc: Document) -> float | None:
        raise NotImplementedError

    def scores(
        self, query_terms: Sequence[str], target: Collection
    ) -> dict[str, float | None]:
        return {doc.id: self.score_one(query_terms, doc) for doc in target}

    def order(
        self,
        query_terms: Sequence[str],
        target: Collection,
        relevant_id: str | None = None,
    ) -> list[tuple[str, float | None]]:
        return order_scores(self.scores(query_terms, target), self.ascending)


def rank(
    model: RetrievalModel,
    query: QueryInstance,
    source: Collection,
    target: Collection,
) -> Ranking:
    """Rank every target document for one query instance."""
    if query.relevant_doc not in target:
        raise ValidationError(
            f"relevant document {query.relevant_doc!r} not in collection {target.name!r}"
        )
    query_terms = query_text(query, source, model.view)
    ordered = model.order(query_terms, target, query.relevant_doc)
    position = next(
        i for i, (cid, _) in enumerate(ordered) if cid == query.relevant_doc
    )
    return Ranking(
        query_id=query.id,
        entries=tuple(ordered),
        rank_of_relevant=position + 1,
    )


# ---------------------------------------------------------------------------
# concrete models


class CosineModel(RetrievalModel):
    """Cosine over raw-count or TfIdf vectors in the shared vocabulary."""

    def __init__(self, view: TextView, vocab: Vocabulary, scheme: str):
        super().__init__(view)
        if scheme not in ("bow", "tfidf"):
            raise ValidationError(f"unknown weighting scheme {scheme!r}")
        self.name = scheme
        self.vocab = vocab
        self.scheme = scheme
        self._doc_vectors: dict[str, SparseVector] = {}

    def vector(self, terms: Sequence[str]) -> SparseVector:
        fn = bow if self.scheme == "bow" else tfidf
        return fn(terms, self.vocab)

    def _doc_vector(self, doc: Document) -> SparseVector:
        vec = self._doc_vectors.get(doc.id)
        if vec is None:
            vec = self.vector(self.view.sequence(doc))
            self._doc_vectors[doc.id] = vec
        return vec

    def score_one(self, query_terms, doc):
        return cosine(self.vector(query_terms), self._doc_vector(doc))

    def scores(self, query_terms, target):
        qvec = self.vector(query_terms)
        return {doc.id: cosine(qvec, self._doc_vector(doc)) for doc in target}


class TesseraeModel(RetrievalModel):
    """Shared-word scoring with collection-level frequency estimates."""

    name = "tesserae"

    def __init__(
        self,
        view: TextView,
        query_freqs: Mapping[str, float],
        cand_freqs: Mapping[str, float],
    ):
        super().__init__(view)
        self.query_freqs = query_freqs
        self.cand_freqs = cand_freqs

    def score_one(self, query_terms, doc):
        return score_tesserae(
            query_terms, self.view.sequence(doc), self.query_freqs, self.cand_freqs
        )


class SentenceEmbeddingModel(RetrievalModel):
    """Cosine of mean (optionally idf-weighted) sentence embeddings."""

    def __init__(
        self,
        view: TextView,
        table: EmbeddingTable,
        weights: Mapping[str, float] | None = None,
        name: str = "emb-bow",
    ):
        super().__init__(view)
        self.name = name
        self.table = table
        self.weights = weights
        self._doc_vectors: dict[str, tuple[np.ndarray, bool]] = {}

    def _doc_vector(self, doc: Document) -> tuple[np.ndarray, bool]:
        cached = self._doc_vectors.get(doc.id)
        if cached is None:
            cached = sentence_embedding(self.view.sequence(doc), self.table, self.weights)
            self._doc_vectors[doc.id] = cached
        return cached

    def score_one(self, query_terms, doc):
        qv, q_ok = sentence_embedding(query_terms, self.table, self.weights)
        cv, c_ok = self._doc_vector(doc)
        if not q_ok or not c_ok:
            return 0.0
        return _dense_cosine(qv, cv)

    def scores(self, query_terms, target):
        qv, q_ok = sentence_embedding(query_terms, self.table, self.weights)
        out: dict[str, float | None] = {}
        for doc in target:
            cv, c_ok = self._doc_vector(doc)
            out[doc.id] = _dense_cosine(qv, cv) if (q_ok and c_ok) else 0.0
        return out


class WmdModel(RetrievalModel):
    """Word movement distance; lower is better, incomparable pairs last."""

    name = "wmd"
    ascending = True

    def __init__(
        self,
        view: TextView,
        table: EmbeddingTable,
        cost: str = "cosine",
        memo: dict | None = None,
    ):
        super().__init__(view)
        self.table = table
        self.cost = cost
        self._doc_points: dict[str, _DocPoints | None] = {}
        self._memo = memo

    def _points(self, doc: Document) -> _DocPoints | None:
        if doc.id not in self._doc_points:
            self._doc_points[doc.id] = _doc_points(self.view.sequence(doc), self.table)
        return self._doc_points[doc.id]

    def score_one(self, query_terms, doc):
        key = None
        if self._memo is not None:
            key = (tuple(query_terms), doc.id)
            if key in self._memo:
                return self._memo[key]
        a = _doc_points(query_terms, self.table)
        b = self._points(doc)
        if a is None or b is None:
            value = None
        else:
            ground = _ground_cost(a, b, self.cost)
            value, _ = solve_transport(a.masses, b.masses, ground)
        if self._memo is not None:
            self._memo[key] = value
        return value

    def scores(self, query_terms, target):
        a = _doc_points(query_terms, self.table)
        out: dict[str, float | None] = {}
        qkey = tuple(query_terms)
        for doc in target:
            if self._memo is not None:
                key = (qkey, doc.id)
                if key in self._memo:
                    out[doc.id] = self._memo[key]
                    continue
            b = self._points(doc)
            if a is None or b is None:
                value = None
            else:
                ground = _ground_cost(a, b, self.cost)
                value, _ = solve_transport(a.masses, b.masses, ground)
            if self._memo is not None:
                self._memo[(qkey, doc.id)] = value
            out[doc.id] = value
        return out


class SoftCosineModel(RetrievalModel):
    """Soft cosine over TfIdf vectors with a term-similarity matrix."""

    def __init__(self, view: TextView, vocab: Vocabulary, matrix: SimilarityMatrix, name: str):
        super().__init__(view)
        self.name = name
        self.vocab = vocab
        self.matrix = matrix
        self._doc_state: dict[str, tuple[SparseVector, float]] = {}

    def _doc_leg(self, doc: Document) -> tuple[SparseVector, float]:
        state = self._doc_state.get(doc.id)
        if state is None:
            vec = tfidf(self.view.sequence(doc), self.vocab)
            state = (vec, max(_bilinear(self.matrix, vec, vec), 0.0))
            self._doc_state[doc.id] = state
        return state

    def score_one(self, query_terms, doc):
        qvec = tfidf(query_terms, self.vocab)
        return soft_cosine(qvec, self._doc_leg(doc)[0], self.matrix)

    def scores(self, query_terms, target):
        qvec = tfidf(query_terms, self.vocab)
        q_leg = max(_bilinear(self.matrix, qvec, qvec), 0.0)
        out: dict[str, float | None] = {}
        for doc in target:
            dvec, d_leg = self._doc_leg(doc)
            if not qvec or not dvec:
                out[doc.id] = 0.0
                continue
            denominator = math.sqrt(q_leg) * math.sqrt(d_leg)
            if denominator == 0.0 or not math.isfinite(denominator):
                diagnostics["soft_cosine_non_finite"] += 1
                out[doc.id] = 0.0
                continue
            value = _bilinear(self.matrix, qvec, dvec) / denominator
            if not math.isfinite(value):
                diagnostics["soft_cosine_non_finite"] += 1
                value = 0.0
            out[doc.id] = value
        return out


class HybridBackoffModel(RetrievalModel):
    """Shared-word scoring where defined, word movement distance elsewhere.

    The split follows a lexical-overlap oracle on the relevant document: when
    the query shares at least two distinct terms with it, candidates with a
    defined shared-word score are ranked first (descending), the rest by
    distance (ascending); otherwise the whole ranking falls back to distance.
    """

    name = "t+wmd"

    def __init__(self, tesserae: TesseraeModel, wmd_model: WmdModel):
        if tesserae.view is not wmd_model.view:
            raise ValidationError("hybrid components must share a view")
        super().__init__(tesserae.view)
        self.tesserae = tesserae
        self.wmd = wmd_model

    def order(self, query_terms, target, relevant_id=None):
        if relevant_id is None:
            raise ValidationError("hybrid ranking needs the relevant document id")
        relevant_terms = self.view.sequence(target.document(relevant_id))
        if len(set(query_terms) & set(relevant_terms)) >= 2:
            t_scores = self.tesserae.scores(query_terms, target)
            head = order_scores(
                {cid: s for cid, s in t_scores.items() if s is not None}
            )
            rest = {
                cid: self.wmd.score_one(query_terms, target.document(cid))
                for cid, s in t_scores.items()
                if s is None
            }
            return head + order_scores(rest, ascending=True)
        return order_scores(self.wmd.scores(query_terms, target), ascending=True)

    def scores(self, query_terms, target):
        raise ValidationError("hybrid model produces orderings, not raw scores")


# ---------------------------------------------------------------------------
# wiring


class RetrievalContext:
    """Shared corpus resources from which models are configured by name.

    Vocabularies are built over source and target together so query vectors
    live in the candidate space; frequency tables, idf weights, similarity
    matrices, and distance memos are built per view and reused across models.
    """

    def __init__(
        self,
        source: Collection,
        target: Collection,
        embeddings: EmbeddingTable | None = None,
        lexicon: SynonymLexicon | None = None,
        seed: int | None = None,
        sim_power: int = 5,
        wmd_cost: str = "cosine",
        wordnet_mode: str = "reciprocal",
    ):
        self.source = source
        self.target = target
        self.embeddings = embeddings
        self.lexicon = lexicon
        self.seed = seed
        self.sim_power = sim_power
        self.wmd_cost = wmd_cost
        self.wordnet_mode = wordnet_mode
        self._vocabs: dict[TextView, Vocabulary] = {}
        self._freqs: dict[tuple[str, TextView], dict[str, float]] = {}
        self._idf: dict[TextView, dict[str, float]] = {}
        self._matrices: dict[tuple[str, TextView], SimilarityMatrix] = {}
        self._wmd_memos: dict[TextView, dict] = {}

    def vocabulary(self, view: TextView) -> Vocabulary:
        if view not in self._vocabs:
            self._vocabs[view] = build_vocabulary([self.source, self.target], view)
        return self._vocabs[view]

    def frequencies(self, which: str, view: TextView) -> dict[str, float]:
        """Relative term frequencies of one collection under a view."""
        key = (which, view)
        if key not in self._freqs:
            coll = self.source if which == "source" else self.target
            counts: Counter[str] = Counter()
            for doc in coll:
                counts.update(view.sequence(doc))
            total = sum(counts.values())
            self._freqs[key] = {t: c / total for t, c in counts.items()}
        return self._freqs[key]

    def idf_weights(self, view: TextView) -> dict[str, float]:
        if view not in self._idf:
            vocab = self.vocabulary(view)
            self._idf[view] = {
                vocab.term(i): idf(vocab.term(i), vocab) for i in range(len(vocab))
            }
        return self._idf[view]

    def similarity(self, kind: str, view: TextView) -> SimilarityMatrix:
        key = (kind, view)
        if key not in self._matrices:
            vocab = self.vocabulary(view)
            if kind == "emb":
                if self.embeddings is None:
                    raise ValidationError("sc-emb needs an embedding table")
                base = embedding_matrix(self.embeddings, vocab)
            elif kind == "wordnet":
                if self.lexicon is None:
                    raise ValidationError("sc-wn needs a synonym lexicon")
                base = wordnet_matrix(self.lexicon, vocab, mode=self.wordnet_mode)
            elif kind == "random":
                if self.seed is None:
                    raise ValidationError("sc-rnd needs a seed")
                base = random_matrix(vocab, self.seed)
            else:
                raise ValidationError(f"unknown similarity kind {kind!r}")
            self._matrices[key] = power_boost(base, self.sim_power)
        return self._matrices[key]

    def _wmd_model(self, view: TextView) -> WmdModel:
        if self.embeddings is None:
            raise ValidationError("wmd needs an embedding table")
        memo = self._wmd_memos.setdefault(view, {})
        return WmdModel(view, self.embeddings, cost=self.wmd_cost, memo=memo)

    def model(self, name: str, view: TextView) -> RetrievalModel:
        """Instantiate one of the named retrieval models for a view."""
        if name in ("bow", "tfidf"):
            return CosineModel(view, self.vocabulary(view), scheme=name)
        if name == "tesserae":
            return TesseraeModel(
                view,
                query_freqs=self.frequencies("source", view),
                cand_freqs=self.frequencies("target", view),
            )
        if name in ("emb-bow", "emb-tfidf"):
            if self.embeddings is None:
                raise ValidationError(f"{name} needs an embedding table")
            weights = self.idf_weights(view) if name == "emb-tfidf" else None
            return SentenceEmbeddingModel(view, self.embeddings, weights, name=name)
        if name == "wmd":
            return self._wmd_model(view)
        if name in ("sc-emb", "sc-wn", "sc-rnd"):
            if name == "sc-wn" and view is not TextView.LEMMA:
                raise ValidationError("sc-wn requires the lemma view")
            kind = {"sc-emb": "emb", "sc-wn": "wordnet", "sc-rnd": "random"}[name]
            return SoftCosineModel(view, self.vocabulary(view), self.similarity(kind, view), name)
        if name == "t+wmd":
            return HybridBackoffModel(
                self.model("tesserae", view), self._wmd_model(view)
            )
        raise ValidationError(
            f"unknown model {name!r}; valid names: {', '.join(MODEL_NAMES)}"
        )
