"""Pairwise cosine similarities and the thresholded similarity graph.

Edge weights are bit-stable: every pair's weight comes from one dot product
accumulated in ascending coordinate order in 64-bit floats, divided by the
two vector norms (themselves ascending sums of squares) and clamped to
[-1, 1]. The result is therefore independent of worker count and of how the
rows are blocked. Storage is a sparse edge list holding only pairs at or
above ``min_weight_stored``; a dense matrix mode exists for small inputs to
support oracle tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO

import numpy as np
from numba import config, get_num_threads, njit, prange, set_num_threads

from .embeddings import VectorCollection
from .errors import DataError
from .jsonutil import sig9_str

DENSE_LIMIT = 2000
_BLOCK_ROWS = 256


@njit(cache=True)
def _dot_ascending(a, b):
    s = 0.0
    for k in range(a.shape[0]):
        s += a[k] * b[k]
    return s


@njit(cache=True)
def _row_norms(X):
    n, d = X.shape
    out = np.empty(n, np.float64)
    for i in range(n):
        s = 0.0
        for k in range(d):
            s += X[i, k] * X[i, k]
        out[i] = np.sqrt(s)
    return out


@njit(parallel=True, cache=True)
def _block_sims(X, norms, u0, u1, out):
    # out[i, v] for v > u0+i gets the clamped cosine; elsewhere stays at the
    # -2 sentinel, which lies below every admissible floor.
    n, d = X.shape
    for i in prange(u1 - u0):
        u = u0 + i
        for v in range(u + 1, n):
            s = 0.0
            for k in range(d):
                s += X[u, k] * X[v, k]
            c = s / (norms[u] * norms[v])
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            out[i, v] = c


@dataclass(frozen=True)
class SimilarityGraph:
    """Weighted undirected graph over question ids, sparse above a floor."""

    vertex_ids: np.ndarray  # uint64, defines vertex order
    edge_u: np.ndarray  # int64 vertex indices, u < v
    edge_v: np.ndarray
    edge_w: np.ndarray  # float64 cosine weights
    min_weight_stored: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edge_w)

    def weight(self, u: int, v: int) -> float | None:
        """Stored weight between vertex indices, in either order."""
        if u > v:
            u, v = v, u
        mask = (self.edge_u == u) & (self.edge_v == v)
        hits = np.nonzero(mask)[0]
        return float(self.edge_w[hits[0]]) if len(hits) else None


def _as_float64(values) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(values), dtype=np.float64)


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, computed in 64-bit.

    Uses the same fixed-order accumulation as build_graph, so values agree
    exactly with stored edge weights.
    """
    a64 = _as_float64(a)
    b64 = _as_float64(b)
    if a64.shape != b64.shape or a64.ndim != 1:
        raise DataError(f"dimension mismatch: {a64.shape} vs {b64.shape}")
    na = np.sqrt(_dot_ascending(a64, a64))
    nb = np.sqrt(_dot_ascending(b64, b64))
    if na == 0.0 or nb == 0.0:
        raise DataError("cosine similarity undefined for a zero vector")
    c = _dot_ascending(a64, b64) / (na * nb)
    return min(1.0, max(-1.0, c))


def build_graph(
    collection: VectorCollection,
    min_weight_stored: float = -1.0,
    workers: int | None = None,
) -> SimilarityGraph:
    """Materialize all pairs with cosine similarity >= min_weight_stored."""
    if len(collection) < 1:
        raise DataError("cannot build a graph from an empty collection")
    if not -1.0 <= min_weight_stored <= 1.0:
        raise DataError("min_weight_stored must lie in [-1, 1]")
    X = np.ascontiguousarray(collection.matrix, dtype=np.float64)
    n = X.shape[0]
    norms = _row_norms(X)
    if np.any(norms == 0.0):
        raise DataError("cosine similarity undefined for a zero vector")

    old_threads = get_num_threads()
    if workers is not None:
        if workers < 1:
            raise DataError("workers must be >= 1")
        # The weight of each pair is schedule-independent, so capping at the
        # machine's thread budget never changes the result.
        set_num_threads(min(workers, config.NUMBA_NUM_THREADS))
    try:
        us, vs, ws = [], [], []
        buf = np.empty((min(_BLOCK_ROWS, n), n), np.float64)
        for u0 in range(0, n, _BLOCK_ROWS):
            u1 = min(u0 + _BLOCK_ROWS, n)
            block = buf[: u1 - u0]
            block.fill(-2.0)
            _block_sims(X, norms, u0, u1, block)
            bi, bv = np.nonzero(block >= min_weight_stored)
            us.append(bi.astype(np.int64) + u0)
            vs.append(bv.astype(np.int64))
            ws.append(block[bi, bv])
    finally:
        set_num_threads(old_threads)

    return SimilarityGraph(
        vertex_ids=collection.ids,
        edge_u=np.concatenate(us) if us else np.empty(0, np.int64),
        edge_v=np.concatenate(vs) if vs else np.empty(0, np.int64),
        edge_w=np.concatenate(ws) if ws else np.empty(0, np.float64),
        min_weight_stored=float(min_weight_stored),
    )


def dense_similarity(collection: VectorCollection) -> np.ndarray:
    """Full symmetric cosine matrix (diagonal 1), for n <= DENSE_LIMIT."""
    n = len(collection)
    if n > DENSE_LIMIT:
        raise DataError(f"dense mode limited to n <= {DENSE_LIMIT}, got {n}")
    g = build_graph(collection, min_weight_stored=-1.0)
    M = np.eye(n, dtype=np.float64)
    M[g.edge_u, g.edge_v] = g.edge_w
    M[g.edge_v, g.edge_u] = g.edge_w
    return M


def write_edges(graph: SimilarityGraph, sink: IO[str]) -> int:
    """Export edges.jsonl with weights at 9 significant digits."""
    ids = graph.vertex_ids
    n = 0
    for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
        sink.write(
            '{"u":%d,"v":%d,"w":%s}\n' % (int(ids[u]), int(ids[v]), sig9_str(float(w)))
        )
        n += 1
    return n
