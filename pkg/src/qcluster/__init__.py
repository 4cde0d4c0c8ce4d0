"""Intent-based clustering of community Q&A questions.

Pipeline: filter raw StackExchange posts into a clean question corpus,
represent each question as a fixed-dimension embedding, build a cosine
similarity graph, extract clusters as connected components above a
similarity threshold, and evaluate cluster quality across a threshold
sweep with Silhouette, Calinski-Harabasz, and Davies-Bouldin indices.
"""

from .cluster import (
    ClusterSet,
    assign_to_cluster,
    cluster,
    read_clusters,
    write_clusters,
)
from .embeddings import (
    EmbeddingVector,
    VectorCollection,
    hash_embed,
    read_vectors,
    write_vectors,
)
from .errors import (
    DataError,
    GraphFloorError,
    ParseError,
    UndefinedMetricError,
    VectorFormatError,
)
from .ingest import (
    FilterConfig,
    Question,
    RawPost,
    filter_questions,
    parse_posts,
    question_text,
    read_questions,
    write_questions,
)
from .metrics import (
    MetricReport,
    calinski_harabasz,
    compute_metrics,
    davies_bouldin,
    silhouette,
)
from .simgraph import SimilarityGraph, build_graph, cosine_similarity
from .sweep import PAPER_THRESHOLDS, SweepConfig, SweepReport, render_report, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ClusterSet",
    "DataError",
    "EmbeddingVector",
    "FilterConfig",
    "GraphFloorError",
    "MetricReport",
    "PAPER_THRESHOLDS",
    "ParseError",
    "Question",
    "RawPost",
    "SimilarityGraph",
    "SweepConfig",
    "SweepReport",
    "UndefinedMetricError",
    "VectorCollection",
    "VectorFormatError",
    "assign_to_cluster",
    "build_graph",
    "calinski_harabasz",
    "cluster",
    "compute_metrics",
    "cosine_similarity",
    "davies_bouldin",
    "filter_questions",
    "hash_embed",
    "parse_posts",
    "question_text",
    "read_clusters",
    "read_questions",
    "read_vectors",
    "render_report",
    "run_sweep",
    "silhouette",
    "write_clusters",
    "write_questions",
    "write_vectors",
]
