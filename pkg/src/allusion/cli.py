"""Command-line entry point for reproducible retrieval experiments.

Subcommands: ingest, stats, agreement, segment, retrieve, evaluate, explain.
All settings live in a flat YAML config file (default path from the
ALLUSION_CONFIG environment variable) and can be overridden per flag. Every
run writes a manifest with the resolved config, its hash, the seed, and the
package version next to its outputs; re-running with the same config and
seed reproduces every output byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from . import __version__
from .agreement import kappa, load_annotations, overlap_histogram
from .corpus import (
    Collection,
    TextView,
    dataset_stats,
    load_collection,
    load_queries,
    load_stopwords,
    query_text,
    save_collection,
    save_queries,
    window_segment,
)
from .embeddings import load_embeddings
from .errors import AllusionError, ValidationError
from .evaluation import compare, evaluate_model, explain
from .models import MODEL_NAMES, RetrievalContext, rank
from .simmatrix import load_lexicon
from .vectorize import build_vocabulary

CONFIG_ENV = "ALLUSION_CONFIG"
VIEW_NAMES = ("token", "lemma")


@dataclass
class RunConfig:
    """Resolved experiment settings (config file plus CLI overrides)."""

    source: str | None = None
    target: str | None = None
    queries: str | None = None
    embeddings: str | None = None
    lexicon: str | None = None
    annotations: str | None = None
    stopwords: str | None = None
    output_dir: str = "runs/out"
    models: list[str] = field(default_factory=lambda: ["bow", "tfidf"])
    views: list[str] = field(default_factory=lambda: ["token", "lemma"])
    ks: list[int] = field(default_factory=lambda: [10, 20])
    sim_power: int = 5
    seed: int | None = None
    segmentation: str = "manual"
    top_k: int = 20
    lowercase: bool = True
    wmd_cost: str = "cosine"
    embedding_limit: int | None = None
    restrict_embeddings: bool = False
    histogram_bins: int = 10

    def to_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _parse_list(value, item=str) -> list:
    if value is None:
        return []
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = [value]
    return [item(p) for p in parts]


def load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a flat key-value mapping")
    for key, value in data.items():
        if isinstance(value, dict):
            raise ValidationError(f"{path}: nested value under {key!r}; config is flat")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, and CLI overrides into a RunConfig."""
    file_values: dict = {}
    config_path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if config_path:
        file_values = load_config_file(config_path)
    config = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    unknown = set(file_values) - known
    if unknown:
        raise ValidationError(
            f"unknown config keys: {', '.join(sorted(unknown))}"
        )
    merged = {**file_values}
    for key in known:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
    for key, value in merged.items():
        if key in ("models", "views"):
            value = _parse_list(value, str)
        elif key == "ks":
            value = _parse_list(value, int)
        elif key in ("sim_power", "top_k", "histogram_bins"):
            value = int(value)
        elif key in ("seed", "embedding_limit"):
            value = None if value is None else int(value)
        elif key in ("lowercase", "restrict_embeddings"):
            value = bool(value)
        elif value is not None and key not in ("segmentation", "wmd_cost"):
            value = str(value)
        setattr(config, key, value)
    return config


def validate_config(config: RunConfig, command: str) -> list[str]:
    """Collect every config problem for one aggregated error message."""
    problems: list[str] = []
    needs_paths = {
        "ingest": ["source", "target"],
        "stats": ["source", "target", "queries"],
        "agreement": ["annotations"],
        "segment": ["source", "target", "queries"],
        "retrieve": ["source", "target", "queries"],
        "evaluate": ["source", "target", "queries"],
        "explain": ["source", "target"],
    }[command]
    for name in needs_paths:
        value = getattr(config, name)
        if value is None:
            problems.append(f"missing required path: {name}")
        elif not Path(value).exists():
            problems.append(f"{name} path does not exist: {value}")
    for name in ("embeddings", "lexicon", "stopwords"):
        value = getattr(config, name)
        if value is not None and not Path(value).exists():
            problems.append(f"{name} path does not exist: {value}")
    for model in config.models:
        if model not in MODEL_NAMES:
            problems.append(
                f"unknown model {model!r}; valid models: {', '.join(MODEL_NAMES)}"
            )
    for view in config.views:
        if view not in VIEW_NAMES:
            problems.append(f"unknown view {view!r}; valid views: token, lemma")
    if not config.views:
        problems.append("no views selected")
    if config.sim_power < 1:
        problems.append(f"sim_power must be >= 1, got {config.sim_power}")
    if config.top_k < 1:
        problems.append(f"top_k must be >= 1, got {config.top_k}")
    if config.histogram_bins < 1:
        problems.append(f"histogram_bins must be >= 1, got {config.histogram_bins}")
    if any(k < 1 for k in config.ks):
        problems.append(f"every k must be >= 1, got {config.ks}")
    if config.seed is not None and config.seed < 0:
        problems.append(f"seed must be non-negative, got {config.seed}")
    if "sc-rnd" in config.models and config.seed is None:
        problems.append("sc-rnd is stochastic: a seed is required")
    if config.wmd_cost not in ("cosine", "euclidean"):
        problems.append(f"unknown wmd_cost {config.wmd_cost!r}")
    seg = config.segmentation
    if seg != "manual":
        kind, _, n = seg.partition(":")
        if kind != "window" or not n.isdigit() or int(n) < 1:
            problems.append(
                f"segmentation must be 'manual' or 'window:N' (N >= 1), got {seg!r}"
            )
    embedding_models = {"emb-bow", "emb-tfidf", "wmd", "sc-emb", "t+wmd"}
    if embedding_models & set(config.models) and config.embeddings is None:
        problems.append(
            "models "
            + ", ".join(sorted(embedding_models & set(config.models)))
            + " need an embeddings path"
        )
    if "sc-wn" in config.models and config.lexicon is None:
        problems.append("sc-wn needs a lexicon path")
    return problems


def _config_hash(config: RunConfig) -> str:
    canonical = json.dumps(config.to_mapping(), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(outdir: Path, command: str, config: RunConfig) -> None:
    manifest = {
        "command": command,
        "config": config.to_mapping(),
        "config_hash": _config_hash(config),
        "seed": config.seed,
        "version": __version__,
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(value: float) -> str:
    return f"{value:.6g}"


class Workspace:
    """Loads and caches input artifacts for one run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._source: Collection | None = None
        self._target: Collection | None = None
        self._queries = None
        self._embeddings = None
        self._lexicon = None

    @property
    def source(self) -> Collection:
        if self._source is None:
            self._source = load_collection(
                self.config.source, lowercase=self.config.lowercase
            )
        return self._source

    @property
    def target(self) -> Collection:
        if self._target is None:
            self._target = load_collection(
                self.config.target, lowercase=self.config.lowercase
            )
        return self._target

    @property
    def queries(self):
        if self._queries is None:
            self._queries = load_queries(self.config.queries, self.source, self.target)
            seg = self.config.segmentation
            if seg != "manual":
                n = int(seg.partition(":")[2])
                self._queries = tuple(
                    window_segment(q, self.source, n) for q in self._queries
                )
        return self._queries

    @property
    def embeddings(self):
        if self._embeddings is None and self.config.embeddings is not None:
            restrict = None
            if self.config.restrict_embeddings:
                restrict = set()
                for view in (TextView.TOKEN, TextView.LEMMA):
                    vocab = build_vocabulary([self.source, self.target], view)
                    restrict.update(vocab.term(i) for i in range(len(vocab)))
            self._embeddings = load_embeddings(
                self.config.embeddings,
                limit=self.config.embedding_limit,
                restrict=restrict,
            )
        return self._embeddings

    @property
    def lexicon(self):
        if self._lexicon is None and self.config.lexicon is not None:
            self._lexicon = load_lexicon(
                self.config.lexicon, lowercase=self.config.lowercase
            )
        return self._lexicon

    def context(self) -> RetrievalContext:
        return RetrievalContext(
            source=self.source,
            target=self.target,
            embeddings=self.embeddings,
            lexicon=self.lexicon,
            seed=self.config.seed,
            sim_power=self.config.sim_power,
            wmd_cost=self.config.wmd_cost,
        )

    def view_models(self, ctx: RetrievalContext):
        """(model_name, view, model) for the configured grid.

        sc-wn is lemma-only and silently skips the token view, mirroring its
        input requirement.
        """
        grid = []
        for name in self.config.models:
            for view_name in self.config.views:
                view = TextView(view_name)
                if name == "sc-wn" and view is not TextView.LEMMA:
                    continue
                grid.append((name, view, ctx.model(name, view)))
        return grid


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(config: RunConfig, outdir: Path) -> None:
    ws = Workspace(config)
    summary = {
        "source": {"name": ws.source.name, "documents": len(ws.source)},
        "target": {"name": ws.target.name, "documents": len(ws.target)},
    }
    save_collection(ws.source, outdir / "source.normalized.jsonl")
    save_collection(ws.target, outdir / "target.normalized.jsonl")
    if config.queries:
        queries = load_queries(config.queries, ws.source, ws.target)
        summary["queries"] = {
            "total": len(queries),
            "active": sum(1 for q in queries if not q.discarded),
            "discarded": sum(1 for q in queries if q.discarded),
        }
    with open(outdir / "ingest.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(summary, indent=2, sort_keys=True))


def cmd_stats(config: RunConfig, outdir: Path) -> None:
    ws = Workspace(config)
    stopwords = load_stopwords(config.stopwords) if config.stopwords else None
    summary_rows = []
    for view_name in config.views:
        view = TextView(view_name)
        stats = dataset_stats(ws.queries, ws.source, ws.target, view, stopwords)
        with open(outdir / f"stats_{view_name}.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["query_id", "jaccard", "shared_terms", "query_len", "ref_len"])
            for row in stats.rows:
                writer.writerow(
                    [row.query_id, _fmt(row.jaccard), row.shared_terms, row.query_len, row.ref_len]
                )
        with open(outdir / f"histogram_{view_name}.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin", "count"])
            for shared, count in stats.histogram.items():
                writer.writerow([shared, count])
        for metric, (mean, sd) in stats.aggregates.items():
            summary_rows.append([view_name, metric, _fmt(mean), _fmt(sd)])
    with open(outdir / "stats_summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["view", "metric", "mean", "sd"])
        writer.writerows(summary_rows)
    print(f"wrote stats for views {', '.join(config.views)} to {outdir}")


def cmd_agreement(config: RunConfig, outdir: Path, with_histogram: bool) -> None:
    annotations = load_annotations(config.annotations)
    report = kappa(annotations)
    document = {
        "observed_overlap": report.observed,
        "expected_overlap": report.expected,
        "kappa": report.kappa,
        "n_items": report.n_items,
        "n_annotators": report.n_annotators,
        "n_pairs": len(report.pairs),
    }
    with open(outdir / "agreement.json", "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(outdir / "agreement_pairs.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item_id", "annotator_a", "annotator_b", "agreement", "disagreement", "overlap"])
        for pair in report.pairs:
            writer.writerow(
                [
                    pair.item_id,
                    pair.annotators[0],
                    pair.annotators[1],
                    pair.overlap.agreement,
                    pair.overlap.disagreement,
                    _fmt(pair.overlap.o),
                ]
            )
    if with_histogram:
        hist = overlap_histogram(annotations, bins=config.histogram_bins)
        with open(outdir / "agreement_histogram.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_upper_edge", "count", "cumulative_fraction"])
            for edge, count, cum in zip(hist.edges, hist.counts, hist.cumulative):
                writer.writerow([_fmt(edge), count, _fmt(cum)])
        document["perfect_fraction"] = hist.perfect_fraction
    print(json.dumps(document, indent=2, sort_keys=True))


def cmd_segment(config: RunConfig, outdir: Path, window: int) -> None:
    ws = Workspace(config)
    queries = load_queries(config.queries, ws.source, ws.target)
    segmented = tuple(window_segment(q, ws.source, window) for q in queries)
    out_path = outdir / f"queries_window{window}.jsonl"
    save_queries(segmented, out_path)
    print(f"wrote {len(segmented)} segmented queries to {out_path}")


def cmd_retrieve(config: RunConfig, outdir: Path) -> None:
    ws = Workspace(config)
    ctx = ws.context()
    out_path = outdir / "rankings.csv"
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "view", "query_id", "rank", "candidate_id", "score"])
        for name, view, model in ws.view_models(ctx):
            for query in ws.queries:
                if query.discarded:
                    continue
                ranking = rank(model, query, ws.source, ws.target)
                for position, (cand_id, score) in enumerate(ranking.top(config.top_k), start=1):
                    writer.writerow(
                        [
                            name,
                            view.value,
                            query.id,
                            position,
                            cand_id,
                            "nan" if score is None else _fmt(score),
                        ]
                    )
    print(f"wrote rankings to {out_path}")


def cmd_evaluate(config: RunConfig, outdir: Path) -> None:
    ws = Workspace(config)
    ctx = ws.context()
    grid = ws.view_models(ctx)
    reports = []
    for name, view, model in grid:
        report = evaluate_model(model, ws.queries, ws.source, ws.target, ks=config.ks)
        reports.append((name, view, report))
    columns = list(dict.fromkeys(name for name, _, _ in reports))
    metrics = ["mrr"] + [f"p@{k}" for k in config.ks]
    cells = {
        (name, view.value): report for name, view, report in reports
    }
    with open(outdir / "report.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "view"] + columns)
        for metric in metrics:
            for view_name in config.views:
                row = [metric, view_name]
                for name in columns:
                    report = cells.get((name, view_name))
                    if report is None:
                        row.append("")
                    elif metric == "mrr":
                        row.append(f"{report.mrr:.4f}")
                    else:
                        k = int(metric.split("@")[1])
                        row.append(f"{report.p_at_k[k]:.4f}")
                writer.writerow(row)
    with open(outdir / "ranks.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "view", "query_id", "rank"])
        for name, view, report in reports:
            for query_id, position in zip(report.query_ids, report.ranks):
                writer.writerow([name, view.value, query_id, position])
    print(f"wrote report for {len(reports)} model/view cells to {outdir / 'report.csv'}")


def cmd_explain(
    config: RunConfig, outdir: Path, model_name: str, view_name: str, query_id: str, candidate_id: str
) -> None:
    ws = Workspace(config)
    ctx = ws.context()
    view = TextView(view_name)
    model = ctx.model(model_name, view)
    queries = {q.id: q for q in ws.queries}
    if query_id not in queries:
        raise ValidationError(f"unknown query id {query_id!r}")
    query = queries[query_id]
    query_terms = query_text(query, ws.source, view)
    cand_terms = view.sequence(ws.target.document(candidate_id))
    result = explain(model, query_terms, cand_terms)
    out_path = outdir / "explain.csv"
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["side", "position", "term", "contribution"])
        for row in result.rows:
            writer.writerow([row.side, row.position, row.term, _fmt(row.contribution)])
    print(f"score {_fmt(result.score)}; wrote contributions to {out_path}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="allusion",
        description="Retrieval workbench for allusive text reuse",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help=f"config file (default from ${CONFIG_ENV})")
        p.add_argument("--source", help="source collection (jsonl)")
        p.add_argument("--target", help="target collection (jsonl)")
        p.add_argument("--queries", help="query instances (jsonl)")
        p.add_argument("--embeddings", help="word vectors in text format")
        p.add_argument("--lexicon", help="synonym lexicon (tsv)")
        p.add_argument("--stopwords", help="stopword list, one per line")
        p.add_argument("--output-dir", dest="output_dir", help="where artifacts go")
        p.add_argument("--seed", type=int, help="seed for stochastic components")
        p.add_argument("--sim-power", dest="sim_power", type=int,
                       help="elementwise power applied to similarity matrices (default 5)")
        p.add_argument("--segmentation", help="'manual' or 'window:N'")
        p.add_argument("--wmd-cost", dest="wmd_cost", choices=["cosine", "euclidean"],
                       help="ground cost for the word movement distance")
        p.add_argument("--no-lowercase", dest="lowercase", action="store_false",
                       default=None, help="keep original casing")

    p_ingest = sub.add_parser("ingest", help="validate and normalize the corpora")
    add_common(p_ingest)

    p_stats = sub.add_parser("stats", help="query/reference overlap statistics")
    add_common(p_stats)
    p_stats.add_argument("--views", help="comma-separated views (token,lemma)")

    p_agreement = sub.add_parser("agreement", help="inter-annotator span agreement")
    add_common(p_agreement)
    p_agreement.add_argument("--annotations", help="annotation file (csv)")
    p_agreement.add_argument("--histogram", action="store_true",
                             help="also emit the overlap histogram")
    p_agreement.add_argument("--histogram-bins", dest="histogram_bins", type=int)

    p_segment = sub.add_parser("segment", help="replace spans by anchor windows")
    add_common(p_segment)
    p_segment.add_argument("--window", type=int, required=True,
                           help="tokens kept on each side of the anchor")

    p_retrieve = sub.add_parser("retrieve", help="rank candidates per query")
    add_common(p_retrieve)
    p_retrieve.add_argument("--model", dest="models", help="model name(s), comma-separated")
    p_retrieve.add_argument("--view", dest="views", help="view(s), comma-separated")
    p_retrieve.add_argument("--top", dest="top_k", type=int, help="ranks emitted per query")

    p_evaluate = sub.add_parser("evaluate", help="MRR / P@K over the model grid")
    add_common(p_evaluate)
    p_evaluate.add_argument("--models", help="model name(s), comma-separated")
    p_evaluate.add_argument("--views", help="view(s), comma-separated")
    p_evaluate.add_argument("--ks", help="precision cutoffs, comma-separated")

    p_explain = sub.add_parser("explain", help="per-term contributions of one pair")
    add_common(p_explain)
    p_explain.add_argument("--model", required=True, help="tfidf or a sc-* model")
    p_explain.add_argument("--view", default="lemma", choices=list(VIEW_NAMES))
    p_explain.add_argument("--query-id", required=True)
    p_explain.add_argument("--candidate-id", required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
    except (AllusionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "model", None):
        config.models = _parse_list(args.model, str)
    problems = validate_config(config, args.command)
    if problems:
        print(
            "invalid configuration:\n  - " + "\n  - ".join(problems),
            file=sys.stderr,
        )
        return 2
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "ingest":
            cmd_ingest(config, outdir)
        elif args.command == "stats":
            cmd_stats(config, outdir)
        elif args.command == "agreement":
            cmd_agreement(config, outdir, with_histogram=args.histogram)
        elif args.command == "segment":
            cmd_segment(config, outdir, window=args.window)
        elif args.command == "retrieve":
            cmd_retrieve(config, outdir)
        elif args.command == "evaluate":
            cmd_evaluate(config, outdir)
        elif args.command == "explain":
            cmd_explain(
                config, outdir, args.model, args.view, args.query_id, args.candidate_id
            )
        write_manifest(outdir, args.command, config)
    except AllusionError as exc:
        (outdir / "FAILED.txt").write_text(f"{type(exc).__name__}: {exc}\n", encoding="utf-8")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
