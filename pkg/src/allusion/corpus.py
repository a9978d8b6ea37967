"""Document collections, query annotations, and dataset statistics.

Collections are line-delimited JSON files of pre-tokenized, pre-lemmatized
documents. Queries are annotated spans in a source collection, each pointing
at the single relevant document in a target collection. Everything is
immutable after loading and safe for concurrent reads.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, ValidationError


class TextView(Enum):
    """Selects which of the two parallel sequences an operation reads."""

    TOKEN = "token"
    LEMMA = "lemma"

    def sequence(self, doc: "Document") -> tuple[str, ...]:
        return doc.tokens if self is TextView.TOKEN else doc.lemmas


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open, zero-based token interval [start, end)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValidationError(f"invalid interval [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: "Interval") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class Document:
    """A retrieval unit: parallel token and lemma sequences under one id."""

    id: str
    tokens: tuple[str, ...]
    lemmas: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "lemmas", tuple(self.lemmas))
        if len(self.tokens) == 0:
            raise ValidationError(f"document {self.id!r} is empty")
        if len(self.tokens) != len(self.lemmas):
            raise ValidationError(
                f"document {self.id!r}: {len(self.tokens)} tokens vs "
                f"{len(self.lemmas)} lemmas"
            )

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Collection:
    """Ordered set of documents with unique ids and O(1) id lookup."""

    name: str
    documents: tuple[Document, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "documents", tuple(self.documents))
        index: dict[str, int] = {}
        for pos, doc in enumerate(self.documents):
            if doc.id in index:
                raise ValidationError(
                    f"collection {self.name!r}: duplicate document id {doc.id!r}"
                )
            index[doc.id] = pos
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.index

    def document(self, doc_id: str) -> Document:
        try:
            return self.documents[self.index[doc_id]]
        except KeyError:
            raise KeyError(f"no document {doc_id!r} in collection {self.name!r}")

    def position(self, doc_id: str) -> int:
        return self.index[doc_id]

    def ids(self) -> tuple[str, ...]:
        return tuple(doc.id for doc in self.documents)


@dataclass(frozen=True)
class QueryInstance:
    """An annotated span in a source document plus its relevant target id.

    The anchor is the editor-identified expression; the span is the annotated
    query segment and must contain the anchor. Discarded instances are kept
    so that pre- and post-curation statistics are both computable.
    """

    id: str
    source_doc: str
    anchor: Interval
    span: Interval
    relevant_doc: str
    discarded: bool = False

    def __post_init__(self) -> None:
        if len(self.anchor) < 1:
            raise ValidationError(f"query {self.id!r}: empty anchor")
        if len(self.span) < 1:
            raise ValidationError(f"query {self.id!r}: empty span")
        if not self.span.contains(self.anchor):
            raise ValidationError(
                f"query {self.id!r}: anchor {self.anchor} outside span {self.span}"
            )


def _normalize(seq: Iterable[str], lowercase: bool) -> tuple[str, ...]:
    return tuple(s.lower() for s in seq) if lowercase else tuple(seq)


def load_collection(path, fmt: str = "jsonl", lowercase: bool = True) -> Collection:
    """Read a collection from a line-delimited JSON file.

    Each line holds one record with a string `id` and string-array `tokens`
    and `lemmas`. Document order follows file order. Tokens and lemmas are
    lowercased unless `lowercase` is disabled.
    """
    if fmt != "jsonl":
        raise ValidationError(f"unsupported collection format {fmt!r}")
    path = Path(path)
    documents = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: malformed record: {exc}") from exc
            try:
                doc_id = record["id"]
                tokens = record["tokens"]
                lemmas = record["lemmas"]
            except (KeyError, TypeError) as exc:
                raise ParseError(f"{path}:{lineno}: missing field {exc}") from exc
            if not isinstance(doc_id, str):
                raise ParseError(f"{path}:{lineno}: id must be a string")
            if doc_id in seen:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate id {doc_id!r} "
                    f"(first seen on line {seen[doc_id]})"
                )
            seen[doc_id] = lineno
            try:
                documents.append(
                    Document(
                        id=doc_id,
                        tokens=_normalize(tokens, lowercase),
                        lemmas=_normalize(lemmas, lowercase),
                    )
                )
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    return Collection(name=path.stem, documents=tuple(documents))


def save_collection(collection: Collection, path) -> None:
    """Write a collection back to line-delimited JSON (inverse of loading)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in collection:
            fh.write(
                json.dumps(
                    {"id": doc.id, "tokens": list(doc.tokens), "lemmas": list(doc.lemmas)},
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_queries(path, source: Collection, target: Collection) -> tuple[QueryInstance, ...]:
    """Read query instances and validate them against both collections.

    Records are line-delimited JSON with fields `id`, `source_doc`,
    `anchor_start`, `anchor_end`, `span_start`, `span_end`, `relevant_doc`
    and an optional boolean `discarded`.
    """
    path = Path(path)
    queries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: malformed record: {exc}") from exc
            try:
                query = QueryInstance(
                    id=str(record["id"]),
                    source_doc=record["source_doc"],
                    anchor=Interval(int(record["anchor_start"]), int(record["anchor_end"])),
                    span=Interval(int(record["span_start"]), int(record["span_end"])),
                    relevant_doc=record["relevant_doc"],
                    discarded=bool(record.get("discarded", False)),
                )
            except KeyError as exc:
                raise ParseError(f"{path}:{lineno}: missing field {exc}") from exc
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            if query.source_doc not in source:
                raise ValidationError(
                    f"{path}:{lineno}: unknown source document {query.source_doc!r}"
                )
            doc_len = len(source.document(query.source_doc))
            if query.span.end > doc_len:
                raise ValidationError(
                    f"{path}:{lineno}: span {query.span} outside document "
                    f"{query.source_doc!r} of length {doc_len}"
                )
            if query.relevant_doc not in target:
                raise ValidationError(
                    f"{path}:{lineno}: unknown relevant document {query.relevant_doc!r}"
                )
            queries.append(query)
    return tuple(queries)


def save_queries(queries: Sequence[QueryInstance], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(
                json.dumps(
                    {
                        "id": q.id,
                        "source_doc": q.source_doc,
                        "anchor_start": q.anchor.start,
                        "anchor_end": q.anchor.end,
                        "span_start": q.span.start,
                        "span_end": q.span.end,
                        "relevant_doc": q.relevant_doc,
                        "discarded": q.discarded,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def query_text(query: QueryInstance, source: Collection, view: TextView) -> tuple[str, ...]:
    """The token or lemma subsequence covered by the query span."""
    seq = view.sequence(source.document(query.source_doc))
    return seq[query.span.start : query.span.end]


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Intersection over union of the two term sets (duplicates collapse).

    Returns 0 when both inputs are empty.
    """
    sa, sb = set(a), set(b)
    union = len(sa | sb)
    if union == 0:
        return 0.0
    return len(sa & sb) / union


def window_segment(query: QueryInstance, source: Collection, n: int) -> QueryInstance:
    """Replace the manual span by a window of `n` tokens around the anchor.

    The window clips silently at document boundaries; the anchor is kept.
    """
    if n < 1:
        raise ValidationError(f"window size must be >= 1, got {n}")
    doc_len = len(source.document(query.source_doc))
    span = Interval(
        max(0, query.anchor.start - n),
        min(doc_len, query.anchor.end + n),
    )
    return replace(query, span=span)


@dataclass(frozen=True)
class InstanceStats:
    query_id: str
    jaccard: float
    shared_terms: int
    query_len: int
    ref_len: int


@dataclass(frozen=True)
class DatasetStats:
    """Per-instance overlap statistics plus their aggregates.

    `aggregates` maps metric name to (mean, population standard deviation);
    `histogram` counts instances by number of distinct shared terms.
    """

    rows: tuple[InstanceStats, ...]
    aggregates: dict[str, tuple[float, float]]
    histogram: dict[int, int]


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


def dataset_stats(
    queries: Sequence[QueryInstance],
    source: Collection,
    target: Collection,
    view: TextView,
    stopwords: frozenset[str] | None = None,
    include_discarded: bool = False,
) -> DatasetStats:
    """Overlap statistics between query spans and their relevant documents.

    One row per active instance (discarded ones enter only on request), plus
    means and standard deviations of the Jaccard coefficient and the query
    and reference lengths, and a histogram keyed by the absolute number of
    distinct shared terms.
    """
    rows = []
    histogram: Counter[int] = Counter()
    for q in queries:
        if q.discarded and not include_discarded:
            continue
        q_terms = query_text(q, source, view)
        ref = view.sequence(target.document(q.relevant_doc))
        if stopwords:
            q_terms = tuple(t for t in q_terms if t not in stopwords)
            ref = tuple(t for t in ref if t not in stopwords)
        shared = len(set(q_terms) & set(ref))
        rows.append(
            InstanceStats(
                query_id=q.id,
                jaccard=jaccard(q_terms, ref),
                shared_terms=shared,
                query_len=len(q_terms),
                ref_len=len(ref),
            )
        )
        histogram[shared] += 1
    if not rows:
        raise ValidationError("no active query instances")
    aggregates = {
        "jaccard": _mean_sd([r.jaccard for r in rows]),
        "query_len": _mean_sd([float(r.query_len) for r in rows]),
        "ref_len": _mean_sd([float(r.ref_len) for r in rows]),
    }
    return DatasetStats(
        rows=tuple(rows),
        aggregates=aggregates,
        histogram=dict(sorted(histogram.items())),
    )


def load_stopwords(path) -> frozenset[str]:
    """One stopword per line, blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())
