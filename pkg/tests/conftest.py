import numpy as np
import pytest

from qcluster.embeddings import VectorCollection
from qcluster.simgraph import SimilarityGraph

DATA_DIR = __import__("pathlib").Path(__file__).parent / "data"


def make_collection(matrix, ids=None) -> VectorCollection:
    matrix = np.asarray(matrix, dtype=np.float32)
    if ids is None:
        ids = np.arange(1, len(matrix) + 1)
    return VectorCollection(matrix.shape[1], ids, matrix)


def make_graph(vertex_ids, edges, min_weight_stored=-1.0) -> SimilarityGraph:
    """Build a SimilarityGraph from explicit (u_id, v_id, w) triples."""
    vertex_ids = np.asarray(vertex_ids, dtype=np.uint64)
    index = {int(q): i for i, q in enumerate(vertex_ids)}
    eu, ev, ew = [], [], []
    for u, v, w in edges:
        iu, iv = index[u], index[v]
        if iu > iv:
            iu, iv = iv, iu
        eu.append(iu)
        ev.append(iv)
        ew.append(float(w))
    return SimilarityGraph(
        vertex_ids=vertex_ids,
        edge_u=np.asarray(eu, dtype=np.int64),
        edge_v=np.asarray(ev, dtype=np.int64),
        edge_w=np.asarray(ew, dtype=np.float64),
        min_weight_stored=float(min_weight_stored),
    )


def random_graph(rng, n) -> SimilarityGraph:
    """Random weighted graph with random edge density, weights in [-1, 1]."""
    ids = np.arange(1, n + 1)
    density = rng.uniform(0.05, 0.9)
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < density:
                edges.append((u, v, rng.uniform(-1.0, 1.0)))
    return make_graph(ids, edges)


def synthetic_corpus(
    dim=768,
    n_group_pairs=50,
    group_size=15,
    n_linked_bg_pairs=50,
    n_bg_singles=400,
    noise=0.15,
    seed=7,
):
    """Corpus of tight near-duplicate groups plus sparse background.

    Groups come in bridged pairs: the two base directions of a pair have
    cosine 0.55, so the pair merges at threshold 0.5 and separates at 0.6+.
    Background is unit basis vectors, some linked in cosine-0.55 pairs.
    Within-group cosine >= 0.92 and background pairwise cosine <= 0.6 hold
    by construction and are asserted where the corpus is used.
    """
    rng = np.random.default_rng(seed)
    bridge = 0.55
    vectors = []
    groups = []  # list of id lists, for reference
    next_id = 1
    axis = 0

    def base_pair():
        nonlocal axis
        a = np.zeros(dim)
        b = np.zeros(dim)
        a[axis] = 1.0
        b[axis] = bridge
        b[axis + 1] = np.sqrt(1.0 - bridge**2)
        axis += 2
        return a, b

    def members(base, count):
        nonlocal next_id
        out = []
        for _ in range(count):
            z = rng.standard_normal(dim)
            z -= np.dot(z, base) * base
            z /= np.linalg.norm(z)
            v = base + noise * z
            v /= np.linalg.norm(v)
            out.append((next_id, v))
            next_id += 1
        return out

    for _ in range(n_group_pairs):
        a, b = base_pair()
        ga = members(a, group_size)
        gb = members(b, group_size)
        vectors.extend(ga)
        vectors.extend(gb)
        groups.append([i for i, _ in ga])
        groups.append([i for i, _ in gb])

    bg_ids = []
    for _ in range(n_linked_bg_pairs):
        a, b = base_pair()
        for v in (a, b):
            vectors.append((next_id, v))
            bg_ids.append(next_id)
            next_id += 1
    for _ in range(n_bg_singles):
        v = np.zeros(dim)
        v[axis] = 1.0
        axis += 1
        vectors.append((next_id, v))
        bg_ids.append(next_id)
        next_id += 1

    assert axis <= dim
    ids = [i for i, _ in vectors]
    matrix = np.array([v for _, v in vectors], dtype=np.float32)
    return make_collection(matrix, ids), groups, bg_ids


@pytest.fixture(scope="session")
def trend_corpus():
    collection, groups, bg_ids = synthetic_corpus()
    assert len(collection) == 2000
    return collection, groups, bg_ids


@pytest.fixture
def posts_xml_path():
    return DATA_DIR / "posts_fixture.xml"
