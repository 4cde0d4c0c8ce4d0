"""End-to-end threshold sweep: one graph build, clustering and metrics at
each threshold, and report rendering.

The graph is built once at the sweep's storage floor and reused for every
threshold; clustering at any threshold at or above the floor sees exactly
the same edges it would from a fresh build. The silhouette for all
thresholds is computed in a single pass over the pairwise distances.
"""

from __future__ import annotations

import time
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .cluster import ClusterSet, cluster
from .embeddings import VectorCollection
from .errors import DataError
from .jsonutil import dumps, sig9_str
from .metrics import (
    EUCLIDEAN,
    MetricReport,
    UndefinedMetricError,
    _labels_for,
    _silhouette_many,
    calinski_harabasz,
    davies_bouldin,
)
from .simgraph import build_graph

PAPER_THRESHOLDS = (0.5, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9)


@dataclass(frozen=True)
class SweepConfig:
    thresholds: tuple[float, ...] = PAPER_THRESHOLDS
    distance: str = EUCLIDEAN
    min_weight_stored: float | None = None  # defaults to min(thresholds)

    def __post_init__(self):
        ts = tuple(self.thresholds)
        if not ts:
            raise ValueError("at least one threshold required")
        if any(not -1.0 < t <= 1.0 for t in ts):
            raise ValueError("thresholds must lie in (-1, 1]")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("thresholds must be strictly ascending")
        object.__setattr__(self, "thresholds", ts)
        if self.min_weight_stored is None:
            object.__setattr__(self, "min_weight_stored", ts[0])
        elif self.min_weight_stored > ts[0]:
            raise ValueError("min_weight_stored must not exceed min(thresholds)")


@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    cluster_count: int
    size_distribution: dict[int, int]  # cluster size -> count of clusters
    scr: float
    metrics: MetricReport
    clusters: ClusterSet


@dataclass(frozen=True)
class SweepReport:
    n: int
    dim: int
    distance: str
    min_weight_stored: float
    results: tuple[ThresholdResult, ...]
    elapsed_seconds: float = 0.0  # informational; never serialized


def size_distribution(partition: ClusterSet) -> dict[int, int]:
    return dict(Counter(len(c) for c in partition.clusters))

def singleton_ratio(dist: dict[int, int]) -> float:
    total = sum(dist.values())
    return dist.get(1, 0) / total if total else 0.0


def run_sweep(
    vectors: VectorCollection,
    cfg: SweepConfig | None = None,
    workers: int | None = None,
) -> SweepReport:
    """Cluster and evaluate at every configured threshold."""
    if cfg is None:
        cfg = SweepConfig()
    if len(vectors) < 1:
        raise DataError("at least one vector required")
    start = time.monotonic()
    graph = build_graph(vectors, cfg.min_weight_stored, workers=workers)
    partitions = [cluster(graph, t) for t in cfg.thresholds]

    sil_values = _sweep_silhouettes(vectors, partitions, cfg.distance)

    results = []
    for part, (sil, sil_reason) in zip(partitions, sil_values):
        reasons: dict[str, str] = {}
        if sil_reason is not None:
            reasons["silhouette"] = sil_reason
        try:
            ch = calinski_harabasz(vectors, part)
        except UndefinedMetricError as exc:
            ch = None
            reasons["calinski_harabasz"] = str(exc)
        try:
            db = davies_bouldin(vectors, part)
        except UndefinedMetricError as exc:
            db = None
            reasons["davies_bouldin"] = str(exc)
        dist = size_distribution(part)
        results.append(
            ThresholdResult(
                threshold=part.threshold,
                cluster_count=len(part),
                size_distribution=dist,
                scr=singleton_ratio(dist),
                metrics=MetricReport(
                    silhouette=sil,
                    calinski_harabasz=ch,
                    davies_bouldin=db,
                    distance=cfg.distance,
                    undefined_reason=reasons,
                ),
                clusters=part,
            )
        )
    return SweepReport(
        n=len(vectors),
        dim=vectors.dim,
        distance=cfg.distance,
        min_weight_stored=float(cfg.min_weight_stored),
        results=tuple(results),
        elapsed_seconds=time.monotonic() - start,
    )


def _sweep_silhouettes(
    vectors: VectorCollection, partitions: Sequence[ClusterSet], distance: str
) -> list[tuple[float | None, str | None]]:
    """Silhouette per partition, shared over one distance pass."""
    n = len(vectors)
    out: list[tuple[float | None, str | None]] = []
    shared: list[tuple[int, np.ndarray]] = []
    for i, part in enumerate(partitions):
        k = len(part)
        if k < 2:
            out.append((None, "needs >= 2 clusters"))
        elif n < 3:
            out.append((None, "needs >= 3 points"))
        elif k == n:
            warnings.warn(
                "all clusters are singletons; silhouette is 0 by convention"
            )
            out.append((0.0, None))
        else:
            out.append((np.nan, None))  # placeholder
            shared.append((i, _labels_for(vectors, part)))
    if shared:
        X = np.ascontiguousarray(vectors.matrix, dtype=np.float64)
        values = _silhouette_many(X, [labels for _, labels in shared], distance)
        for (i, _), value in zip(shared, values):
            out[i] = (value, None)
    return out


def report_jsonable(report: SweepReport) -> dict:
    """JSON-ready structure; timing excluded so reruns are byte-identical."""
    return {
        "n": report.n,
        "dim": report.dim,
        "distance": report.distance,
        "min_weight_stored": report.min_weight_stored,
        "thresholds": [
            {
                "threshold": r.threshold,
                "cluster_count": r.cluster_count,
                "size_distribution": {
                    str(size): r.size_distribution[size]
                    for size in sorted(r.size_distribution, reverse=True)
                },
                "scr": r.scr,
                "metrics": r.metrics.to_jsonable(),
            }
            for r in report.results
        ],
    }


def _fmt_metric(value: float | None, reasons: dict[str, str], name: str) -> str:
    return sig9_str(value) if value is not None else "undefined"


def render_report(report: SweepReport, format: str = "table") -> str:
    """Render as JSON or as one table row per threshold."""
    if format == "json":
        return dumps(report_jsonable(report)) + "\n"
    if format != "table":
        raise ValueError(f"unknown format {format!r}")
    lines = [
        f"n={report.n} dim={report.dim} distance={report.distance} "
        f"floor={sig9_str(report.min_weight_stored)}",
        "threshold | clusters | size : count | SCR | silhouette | "
        "calinski_harabasz | davies_bouldin",
    ]
    for r in report.results:
        dist = ", ".join(
            f"{size} : {r.size_distribution[size]}"
            for size in sorted(r.size_distribution, reverse=True)
        )
        m = r.metrics
        lines.append(
            f"{sig9_str(r.threshold)} | {r.cluster_count} | {dist} | "
            f"{sig9_str(r.scr)} | {_fmt_metric(m.silhouette, m.undefined_reason, 'silhouette')} | "
            f"{_fmt_metric(m.calinski_harabasz, m.undefined_reason, 'calinski_harabasz')} | "
            f"{_fmt_metric(m.davies_bouldin, m.undefined_reason, 'davies_bouldin')}"
        )
    return "\n".join(lines) + "\n"


def write_report(report: SweepReport, sink: IO[str]) -> None:
    sink.write(render_report(report, format="json"))
