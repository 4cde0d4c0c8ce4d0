"""Internal cluster-validity indices: Silhouette, Calinski-Harabasz,
Davies-Bouldin.

All three are computed from the vectors and a partition, in 64-bit floats,
with Euclidean distances (cosine distance is selectable for the silhouette
only). Pairwise work is blocked over rows so memory stays linear in n, and
the silhouette supports evaluating several partitions in one pass over the
distance blocks, which the threshold sweep relies on.

Undefined cases raise UndefinedMetricError with a human-readable reason;
compute_metrics() converts those into an explicit undefined-with-reason
report instead of NaN.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cluster import ClusterSet
from .embeddings import VectorCollection
from .errors import DataError, UndefinedMetricError

EUCLIDEAN = "euclidean"
COSINE_DISTANCE = "cosine_distance"

_BLOCK = 256


@dataclass(frozen=True)
class MetricReport:
    silhouette: float | None
    calinski_harabasz: float | None
    davies_bouldin: float | None
    distance: str
    undefined_reason: dict[str, str] = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        out: dict = {"distance": self.distance}
        for name, value in (
            ("silhouette", self.silhouette),
            ("calinski_harabasz", self.calinski_harabasz),
            ("davies_bouldin", self.davies_bouldin),
        ):
            if value is None:
                out[name] = {"undefined": self.undefined_reason[name]}
            else:
                out[name] = value
        return out


def _labels_for(vectors: VectorCollection, partition: ClusterSet) -> np.ndarray:
    """Cluster label per collection row; partition must cover the ids exactly."""
    covered = {qid for c in partition.clusters for qid in c}
    ids = set(int(i) for i in vectors.ids.tolist())
    if covered != ids:
        raise DataError("partition does not cover exactly the collection's ids")
    labels = np.empty(len(vectors), dtype=np.int64)
    for ci, members in enumerate(partition.clusters):
        for qid in members:
            labels[vectors.id_index[qid]] = ci
    return labels


class _DistanceBlocks:
    """Yields row blocks of the full pairwise distance matrix."""

    def __init__(self, X: np.ndarray, distance: str):
        self.X = X
        self.distance = distance
        if distance == EUCLIDEAN:
            self.sq = np.einsum("ij,ij->i", X, X)
        elif distance == COSINE_DISTANCE:
            norms = np.sqrt(np.einsum("ij,ij->i", X, X))
            if np.any(norms == 0.0):
                raise DataError("cosine distance undefined for a zero vector")
            self.norms = norms
        else:
            raise ValueError(f"unknown distance {distance!r}")

    def __iter__(self):
        X = self.X
        n = X.shape[0]
        for r0 in range(0, n, _BLOCK):
            r1 = min(r0 + _BLOCK, n)
            dots = X[r0:r1] @ X.T
            if self.distance == EUCLIDEAN:
                d2 = self.sq[r0:r1, None] + self.sq[None, :] - 2.0 * dots
                np.maximum(d2, 0.0, out=d2)
                D = np.sqrt(d2)
            else:
                D = 1.0 - dots / (self.norms[r0:r1, None] * self.norms[None, :])
                np.clip(D, 0.0, 2.0, out=D)
            D[np.arange(r1 - r0), np.arange(r0, r1)] = 0.0
            yield r0, r1, D


def _silhouette_many(
    X: np.ndarray, labelings: list[np.ndarray], distance: str
) -> list[float]:
    """Mean silhouette for several labelings in one pass over distances."""
    n = X.shape[0]
    prep = []
    for labels in labelings:
        order = np.argsort(labels, kind="stable")
        seg_starts = np.searchsorted(labels[order], np.arange(labels.max() + 1))
        counts = np.bincount(labels)
        prep.append((labels, order, seg_starts, counts))
    totals = [0.0 for _ in labelings]
    for r0, r1, D in _DistanceBlocks(X, distance):
        rows = np.arange(r0, r1)
        for t, (labels, order, seg_starts, counts) in enumerate(prep):
            sums = np.add.reduceat(D[:, order], seg_starts, axis=1)
            own = labels[rows]
            own_sum = sums[np.arange(len(rows)), own]
            denom = np.maximum(counts[own] - 1, 1)
            a = own_sum / denom
            means = sums / counts[None, :]
            means[np.arange(len(rows)), own] = np.inf
            b = means.min(axis=1)
            peak = np.maximum(a, b)
            s = np.where(peak > 0.0, (b - a) / np.where(peak > 0, peak, 1.0), 0.0)
            s[counts[own] == 1] = 0.0  # singleton convention
            totals[t] += float(s.sum())
    return [total / n for total in totals]


def silhouette(
    vectors: VectorCollection, partition: ClusterSet, distance: str = EUCLIDEAN
) -> float:
    """Mean silhouette coefficient over all points.

    Singletons score 0 by convention; an all-singleton partition returns 0.0
    with a warning rather than an error.
    """
    labels = _labels_for(vectors, partition)
    n = len(vectors)
    k = len(partition)
    if k < 2:
        raise UndefinedMetricError("needs >= 2 clusters")
    if n < 3:
        raise UndefinedMetricError("needs >= 3 points")
    if k == n:
        warnings.warn("all clusters are singletons; silhouette is 0 by convention")
        return 0.0
    X = np.ascontiguousarray(vectors.matrix, dtype=np.float64)
    return _silhouette_many(X, [labels], distance)[0]


def calinski_harabasz(vectors: VectorCollection, partition: ClusterSet) -> float:
    """Ratio of between- to within-cluster dispersion, Euclidean."""
    labels = _labels_for(vectors, partition)
    n = len(vectors)
    k = len(partition)
    if k < 2:
        raise UndefinedMetricError("needs >= 2 clusters")
    if n <= k:
        raise UndefinedMetricError("needs more points than clusters")
    X = np.ascontiguousarray(vectors.matrix, dtype=np.float64)
    centroids, counts = _centroids(X, labels, k)
    mu = X.mean(axis=0)
    tr_b = float(np.sum(counts * np.einsum("ij,ij->i", centroids - mu, centroids - mu)))
    diffs = X - centroids[labels]
    tr_w = float(np.einsum("ij,ij->", diffs, diffs))
    if tr_w == 0.0:
        raise UndefinedMetricError("zero within-cluster dispersion")
    return (tr_b / (k - 1)) / (tr_w / (n - k))


def davies_bouldin(vectors: VectorCollection, partition: ClusterSet) -> float:
    """Mean over clusters of the worst (s_i + s_j) / d_ij similarity ratio."""
    labels = _labels_for(vectors, partition)
    k = len(partition)
    if k < 2:
        raise UndefinedMetricError("needs >= 2 clusters")
    X = np.ascontiguousarray(vectors.matrix, dtype=np.float64)
    centroids, counts = _centroids(X, labels, k)
    diffs = X - centroids[labels]
    member_dists = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    spreads = np.bincount(labels, weights=member_dists) / counts

    # Bitwise-identical centroids are the d_ij = 0 case: undefined when any
    # involved cluster has positive spread, otherwise the pair contributes 0.
    _, group = np.unique(centroids, axis=0, return_inverse=True)
    group_sizes = np.bincount(group)
    dup = group_sizes[group] > 1
    if np.any(dup & (spreads > 0.0)):
        raise UndefinedMetricError("coincident centroids")

    csq = np.einsum("ij,ij->i", centroids, centroids)
    worst = np.zeros(k)
    for r0 in range(0, k, _BLOCK):
        r1 = min(r0 + _BLOCK, k)
        d2 = csq[r0:r1, None] + csq[None, :] - 2.0 * (centroids[r0:r1] @ centroids.T)
        np.maximum(d2, 0.0, out=d2)
        d = np.sqrt(d2)
        ratio = (spreads[r0:r1, None] + spreads[None, :]) / np.where(d > 0.0, d, np.inf)
        same_group = group[r0:r1, None] == group[None, :]
        ratio[same_group] = 0.0  # covers the diagonal and zero-spread duplicates
        zero_d = (d == 0.0) & ~same_group
        if np.any(zero_d & ((spreads[r0:r1, None] + spreads[None, :]) > 0.0)):
            raise UndefinedMetricError("coincident centroids")
        worst[r0:r1] = ratio.max(axis=1)
    return float(worst.mean())


def _centroids(X: np.ndarray, labels: np.ndarray, k: int):
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    centroids = np.zeros((k, X.shape[1]))
    np.add.at(centroids, labels, X)
    centroids /= counts[:, None]
    return centroids, counts


def compute_metrics(
    vectors: VectorCollection, partition: ClusterSet, distance: str = EUCLIDEAN
) -> MetricReport:
    """All three indices, with undefined cases captured as reasons."""
    values: dict[str, float | None] = {}
    reasons: dict[str, str] = {}

    def attempt(name, fn, *args):
        try:
            values[name] = fn(*args)
        except UndefinedMetricError as exc:
            values[name] = None
            reasons[name] = str(exc)

    attempt("silhouette", silhouette, vectors, partition, distance)
    attempt("calinski_harabasz", calinski_harabasz, vectors, partition)
    attempt("davies_bouldin", davies_bouldin, vectors, partition)
    return MetricReport(
        silhouette=values["silhouette"],
        calinski_harabasz=values["calinski_harabasz"],
        davies_bouldin=values["davies_bouldin"],
        distance=distance,
        undefined_reason=reasons,
    )
