"""Span-overlap agreement between annotators, with chance correction.

Two annotations of the same item are compared through the length of their
interval intersection. For spans s and t the overlap is

    O = LCS(s, t) / (|s| + |t| - LCS(s, t))

which decomposes into an agreement count A = LCS(s, t) and a disagreement
count D = |s| + |t| - 2 * LCS(s, t), so that O = A / (A + D). Averaging A and
D separately over all annotation pairs gives the expected overlap

    O_e = A_e / (A_e + D_e)

and the chance-corrected coefficient is kappa = (O_o - O_e) / (1 - O_e),
where O_o is the plain mean of per-pair overlaps.

Pairs are formed within items only; every item must be covered by the same
set of at least two annotators.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .corpus import Interval
from .errors import DegenerateAgreementError, ParseError, ValidationError


@dataclass(frozen=True)
class SpanAnnotation:
    item_id: str
    annotator_id: str
    span: Interval

    def __post_init__(self) -> None:
        if len(self.span) < 1:
            raise ValidationError(
                f"annotation ({self.item_id!r}, {self.annotator_id!r}): empty span"
            )


class PairOverlap(NamedTuple):
    """Overlap O of one annotation pair and its A/D decomposition."""

    o: float
    agreement: int
    disagreement: int


class PairScore(NamedTuple):
    item_id: str
    annotators: tuple[str, str]
    overlap: PairOverlap


@dataclass(frozen=True)
class AgreementReport:
    observed: float
    expected: float
    kappa: float
    pairs: tuple[PairScore, ...]
    n_items: int
    n_annotators: int


def lcs(s: Interval, t: Interval) -> int:
    """Length of the intersection of two contiguous spans."""
    return max(0, min(s.end, t.end) - max(s.start, t.start))


def span_overlap(s: Interval, t: Interval) -> PairOverlap:
    """Overlap O in [0, 1] together with its agreement/disagreement counts."""
    if len(s) < 1 or len(t) < 1:
        raise ValidationError("overlap requires non-empty spans")
    a = lcs(s, t)
    d = len(s) + len(t) - 2 * a
    return PairOverlap(o=a / (a + d), agreement=a, disagreement=d)


def _group_by_item(
    annotations: Sequence[SpanAnnotation],
) -> tuple[dict[str, dict[str, Interval]], tuple[str, ...]]:
    if not annotations:
        raise ValidationError("no annotations given")
    items: dict[str, dict[str, Interval]] = {}
    for ann in annotations:
        spans = items.setdefault(ann.item_id, {})
        if ann.annotator_id in spans:
            raise ValidationError(
                f"duplicate annotation for item {ann.item_id!r} "
                f"by annotator {ann.annotator_id!r}"
            )
        spans[ann.annotator_id] = ann.span
    annotators = sorted({a for spans in items.values() for a in spans})
    if len(annotators) < 2:
        raise ValidationError("agreement needs at least two annotators")
    incomplete = [
        item for item, spans in items.items() if set(spans) != set(annotators)
    ]
    if incomplete:
        raise ValidationError(
            "items missing annotations: " + ", ".join(sorted(incomplete))
        )
    return items, tuple(annotators)


def pair_scores(annotations: Sequence[SpanAnnotation]) -> tuple[PairScore, ...]:
    """All within-item annotation pairs, in item order, annotators sorted."""
    items, annotators = _group_by_item(annotations)
    scores = []
    for item_id, spans in items.items():
        for a1, a2 in itertools.combinations(annotators, 2):
            scores.append(
                PairScore(item_id, (a1, a2), span_overlap(spans[a1], spans[a2]))
            )
    return tuple(scores)


def expected_overlap(annotations: Sequence[SpanAnnotation]) -> float:
    """Expected overlap under chance: ratio of mean agreement to mean total."""
    scores = pair_scores(annotations)
    a_e = sum(s.overlap.agreement for s in scores) / len(scores)
    d_e = sum(s.overlap.disagreement for s in scores) / len(scores)
    return a_e / (a_e + d_e)


def kappa(annotations: Sequence[SpanAnnotation]) -> AgreementReport:
    """Chance-corrected span agreement over a complete annotation panel."""
    items, annotators = _group_by_item(annotations)
    scores = pair_scores(annotations)
    observed = sum(s.overlap.o for s in scores) / len(scores)
    expected = expected_overlap(annotations)
    if expected >= 1.0:
        raise DegenerateAgreementError(
            "expected overlap is 1 (all spans identical); kappa is undefined"
        )
    return AgreementReport(
        observed=observed,
        expected=expected,
        kappa=(observed - expected) / (1.0 - expected),
        pairs=scores,
        n_items=len(items),
        n_annotators=len(annotators),
    )


class OverlapHistogram(NamedTuple):
    counts: tuple[int, ...]
    cumulative: tuple[float, ...]
    perfect_fraction: float
    edges: tuple[float, ...]


def overlap_histogram(
    annotations: Sequence[SpanAnnotation], bins: int = 10
) -> OverlapHistogram:
    """Bin per-pair overlaps into `bins` right-closed bins over [0, 1].

    Bin k covers (k/bins, (k+1)/bins], except bin 0 which also includes 0.
    `cumulative[k]` is the fraction of pairs falling in bins 0..k, and the
    fraction of exactly perfect pairs (O == 1) is reported separately.
    """
    if bins < 1:
        raise ValidationError(f"bins must be >= 1, got {bins}")
    scores = pair_scores(annotations)
    counts = [0] * bins
    perfect = 0
    for s in scores:
        o = s.overlap.o
        if o == 1.0:
            perfect += 1
        idx = 0 if o <= 0.0 else math.ceil(o * bins) - 1
        counts[min(idx, bins - 1)] += 1
    total = len(scores)
    running = 0
    cumulative = []
    for c in counts:
        running += c
        cumulative.append(running / total)
    edges = tuple((k + 1) / bins for k in range(bins))
    return OverlapHistogram(
        counts=tuple(counts),
        cumulative=tuple(cumulative),
        perfect_fraction=perfect / total,
        edges=edges,
    )


def load_annotations(path) -> tuple[SpanAnnotation, ...]:
    """Read annotations from CSV with header item_id,annotator_id,span_start,span_end."""
    annotations = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"item_id", "annotator_id", "span_start", "span_end"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ParseError(f"{path}: expected header with columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                annotations.append(
                    SpanAnnotation(
                        item_id=row["item_id"],
                        annotator_id=row["annotator_id"],
                        span=Interval(int(row["span_start"]), int(row["span_end"])),
                    )
                )
            except (TypeError, KeyError) as exc:
                raise ParseError(f"{path}:{lineno}: bad row: {exc}") from exc
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad row: {exc}") from exc
    return tuple(annotations)
