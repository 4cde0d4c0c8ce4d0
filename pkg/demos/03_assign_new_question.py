"""Routing a new question to an existing cluster.

Clusters a handful of hash-embedded question texts, then assigns unseen
queries to the nearest cluster (or reports none clears the threshold).
Run with:  python3 demos/03_assign_new_question.py
"""

import numpy as np

from qcluster import (
    VectorCollection,
    assign_to_cluster,
    build_graph,
    cluster,
    hash_embed,
)

QUESTIONS = {
    1: "How do I merge two dictionaries in Python?",
    2: "How can I merge two dictionaries with the update method?",
    3: "How to merge a pair of dictionaries into one dict?",
    4: "Read a CSV file into a pandas DataFrame",
    5: "Loading a CSV file with pandas read_csv into a DataFrame",
    6: "What is a goroutine in Go?",
}

QUERIES = [
    "Combine two dictionaries into a single dict",
    "Import a CSV file with pandas",
    "How do Rust lifetimes work?",
]


def main() -> None:
    dim = 512
    ids = np.array(sorted(QUESTIONS), dtype=np.uint64)
    matrix = np.stack([hash_embed(QUESTIONS[int(i)], dim=dim) for i in ids])
    collection = VectorCollection(dim, ids, matrix)

    graph = build_graph(collection)
    partition = cluster(graph, threshold=0.3)
    print("clusters:")
    for members in partition.clusters:
        print(f"  {list(members)}: {[QUESTIONS[m] for m in members]}")

    for text in QUERIES:
        query = hash_embed(text, dim=dim)
        idx = assign_to_cluster(partition, collection, query, threshold=0.4)
        if idx is None:
            where = "no cluster clears the threshold"
        else:
            where = f"cluster {list(partition.clusters[idx])}"
        print(f"\n{text!r}\n  -> {where}")


if __name__ == "__main__":
    main()
