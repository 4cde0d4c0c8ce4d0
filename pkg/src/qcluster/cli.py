"""Command-line entry point.

Subcommands mirror the pipeline stages: ingest, embed, cluster, sweep,
assign. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys

from . import embeddings, ingest, simgraph, sweep
from .cluster import assign_to_cluster, cluster, read_clusters, write_clusters
from .errors import DataError

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qcluster", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse and filter a posts file")
    p.add_argument("--posts", required=True)
    p.add_argument("--format", choices=("xml", "jsonl"), default="xml")
    p.add_argument("--tags", default="javascript,python",
                   help="comma-separated tag whitelist; empty keeps all tags")
    p.add_argument("--max-code-chars", type=int, default=0)
    p.add_argument("--answered-policy", choices=("any_answer", "accepted_only"),
                   default="any_answer")
    p.add_argument("--out", required=True)

    p = sub.add_parser("embed", help="produce a SOCV vector file for questions")
    p.add_argument("--questions", required=True)
    p.add_argument("--provider", choices=("hash", "file"), default="hash")
    p.add_argument("--vectors", required=True,
                   help="SOCV path: output for hash, existing file to validate for file")
    p.add_argument("--dim", type=int, default=768)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("cluster", help="cluster a vector file at one threshold")
    p.add_argument("--vectors", required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--edges-out", help="optional edges.jsonl export")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("sweep", help="cluster and evaluate across thresholds")
    p.add_argument("--vectors", required=True)
    p.add_argument("--thresholds",
                   default=",".join(str(t) for t in sweep.PAPER_THRESHOLDS))
    p.add_argument("--distance", choices=("euclidean", "cosine_distance"),
                   default="euclidean")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--table", action="store_true", help="print the table to stdout")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("assign", help="match a new question against clusters")
    p.add_argument("--vectors", required=True)
    p.add_argument("--clusters", required=True)
    p.add_argument("--query-text", required=True)
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _read_collection(path: str) -> embeddings.VectorCollection:
    with open(path, "rb") as f:
        return embeddings.read_vectors(f)


def _cmd_ingest(args) -> int:
    tags = frozenset(t.strip().lower() for t in args.tags.split(",") if t.strip())
    cfg = ingest.FilterConfig(
        tag_whitelist=tags,
        max_inline_code_chars=args.max_code_chars,
        answered_policy=args.answered_policy,
    )
    with open(args.posts, "rb") as src, open(args.out, "w", encoding="utf-8",
                                             newline="\n") as out:
        posts = ingest.parse_posts(src, format=args.format)
        n = ingest.write_questions(ingest.filter_questions(posts, cfg), out)
    print(f"wrote {n} questions to {args.out}")
    return 0


def _cmd_embed(args) -> int:
    with open(args.questions, "r", encoding="utf-8") as f:
        questions = list(ingest.read_questions(f))
    if args.provider == "hash":
        vectors = [
            embeddings.EmbeddingVector(
                q.id, embeddings.hash_embed(ingest.question_text(q), args.dim, args.seed)
            )
            for q in questions
        ]
        collection = embeddings.VectorCollection.from_vectors(vectors, dim=args.dim)
        with open(args.vectors, "wb") as out:
            nbytes = embeddings.write_vectors(collection, out)
        print(f"wrote {len(collection)} vectors ({nbytes} bytes) to {args.vectors}")
        return 0
    # provider=file: validate an externally produced SOCV against the corpus
    collection = _read_collection(args.vectors)
    want = {q.id for q in questions}
    have = {int(i) for i in collection.ids.tolist()}
    if want != have:
        missing = sorted(want - have)[:5]
        extra = sorted(have - want)[:5]
        raise DataError(
            f"vector file does not match questions: missing ids {missing}, "
            f"unexpected ids {extra}"
        )
    if collection.dim != args.dim:
        raise DataError(f"vector file dim {collection.dim} != expected {args.dim}")
    print(f"{args.vectors} covers all {len(want)} questions at dim {collection.dim}")
    return 0


def _cmd_cluster(args) -> int:
    collection = _read_collection(args.vectors)
    graph = simgraph.build_graph(collection, args.threshold, workers=args.workers)
    result = cluster(graph, args.threshold)
    with open(args.out, "w", encoding="utf-8", newline="\n") as out:
        write_clusters(result, out)
    if args.edges_out:
        with open(args.edges_out, "w", encoding="utf-8", newline="\n") as out:
            simgraph.write_edges(graph, out)
    print(f"{len(result)} clusters at threshold {args.threshold} -> {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    collection = _read_collection(args.vectors)
    try:
        thresholds = tuple(float(t) for t in args.thresholds.split(","))
        cfg = sweep.SweepConfig(thresholds=thresholds, distance=args.distance)
    except ValueError as exc:
        print(f"qcluster sweep: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    report = sweep.run_sweep(collection, cfg, workers=args.workers)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as out:
            sweep.write_report(report, out)
    if args.table or not args.report:
        sys.stdout.write(sweep.render_report(report, format="table"))
    return 0


def _cmd_assign(args) -> int:
    collection = _read_collection(args.vectors)
    with open(args.clusters, "r", encoding="utf-8") as f:
        clusters = read_clusters(f)
    query = embeddings.hash_embed(args.query_text, collection.dim, args.seed)
    idx = assign_to_cluster(clusters, collection, query, args.threshold)
    if idx is None:
        print("no cluster clears the threshold")
    else:
        members = ", ".join(str(i) for i in clusters.clusters[idx])
        print(f"cluster {idx}: [{members}]")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "embed": _cmd_embed,
    "cluster": _cmd_cluster,
    "sweep": _cmd_sweep,
    "assign": _cmd_assign,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"qcluster {args.command}: error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"qcluster {args.command}: error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except ValueError as exc:
        print(f"qcluster {args.command}: error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
