"""Threshold-filtered BFS clustering of the similarity graph.

Only edges with weight >= the threshold are valid; the connected components
of what remains are the clusters, and isolated vertices become singletons.
Output is canonical: members ascending, clusters by descending size then
ascending smallest member id, so runs are comparable across platforms.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import IO

import numpy as np

from .embeddings import VectorCollection
from .errors import DataError, GraphFloorError
from .jsonutil import dumps
from .simgraph import SimilarityGraph, cosine_similarity


@dataclass(frozen=True)
class ClusterSet:
    """A partition of the graph's question ids, in canonical order."""

    clusters: tuple[tuple[int, ...], ...]
    threshold: float

    def __len__(self) -> int:
        return len(self.clusters)

    def member_map(self) -> dict[int, int]:
        """question id -> cluster index."""
        return {qid: i for i, members in enumerate(self.clusters) for qid in members}


def canonicalize(groups, threshold: float) -> ClusterSet:
    """Sort members and clusters into the canonical order."""
    ordered = sorted(
        (tuple(sorted(g)) for g in groups), key=lambda c: (-len(c), c[0])
    )
    return ClusterSet(clusters=tuple(ordered), threshold=float(threshold))


def _adjacency(graph: SimilarityGraph, threshold: float):
    """CSR-style adjacency over valid edges (w >= threshold)."""
    keep = graph.edge_w >= threshold
    u = graph.edge_u[keep]
    v = graph.edge_v[keep]
    n = graph.n_vertices
    heads = np.concatenate([u, v])
    tails = np.concatenate([v, u])
    order = np.argsort(heads, kind="stable")
    heads = heads[order]
    tails = tails[order]
    starts = np.searchsorted(heads, np.arange(n + 1))
    return starts, tails


def cluster(graph: SimilarityGraph, threshold: float) -> ClusterSet:
    """BFS connected components of the >= threshold subgraph."""
    if not -1.0 <= threshold <= 1.0:
        raise DataError("threshold must lie in [-1, 1]")
    if threshold < graph.min_weight_stored:
        raise GraphFloorError(
            f"graph floor too high for requested threshold: stored >= "
            f"{graph.min_weight_stored}, requested {threshold}"
        )
    n = graph.n_vertices
    starts, tails = _adjacency(graph, threshold)
    ids = graph.vertex_ids
    visited = np.zeros(n, dtype=bool)
    groups = []
    for k in range(n):
        if visited[k]:
            continue
        visited[k] = True
        component = [int(ids[k])]
        queue = deque([k])
        while queue:
            s = queue.popleft()
            for p in tails[starts[s] : starts[s + 1]]:
                if not visited[p]:
                    visited[p] = True
                    queue.append(p)
                    component.append(int(ids[p]))
        groups.append(component)
    return canonicalize(groups, threshold)


def assign_to_cluster(
    clusters: ClusterSet,
    vectors: VectorCollection,
    query,
    threshold: float,
) -> int | None:
    """Index of the cluster whose member is most similar to the query.

    Ties break toward the smaller question id; returns None when no member
    reaches the threshold.
    """
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (vectors.dim,):
        raise DataError(
            f"dimension mismatch: query {query.shape}, collection dim {vectors.dim}"
        )
    best_sim = -np.inf
    best_id = None
    for qid in vectors.ids.tolist():
        sim = cosine_similarity(query, vectors.vector(qid).values)
        if sim > best_sim or (sim == best_sim and (best_id is None or qid < best_id)):
            best_sim = sim
            best_id = qid
    if best_id is None or best_sim < threshold:
        return None
    return clusters.member_map()[best_id]


def write_clusters(clusters: ClusterSet, sink: IO[str]) -> None:
    """Write clusters.json: {"threshold": t, "clusters": [[id, ...], ...]}."""
    sink.write(
        dumps({"threshold": clusters.threshold, "clusters": [list(c) for c in clusters.clusters]})
    )
    sink.write("\n")


def read_clusters(source: IO) -> ClusterSet:
    obj = json.load(source)
    return ClusterSet(
        clusters=tuple(tuple(int(i) for i in c) for c in obj["clusters"]),
        threshold=float(obj["threshold"]),
    )
