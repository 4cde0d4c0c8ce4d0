"""End-to-end walkthrough: Posts.xml -> questions -> vectors -> clusters.

Writes its working files to a temp directory and prints each stage.
Run with:  python3 demos/01_pipeline_from_xml.py
"""

import tempfile
from pathlib import Path

from qcluster import (
    VectorCollection,
    build_graph,
    cluster,
    filter_questions,
    hash_embed,
    parse_posts,
    question_text,
    write_clusters,
)

import numpy as np

POSTS = """<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="1" PostTypeId="1" AnswerCount="2" Title="How do I merge two dicts?"
       Body="&lt;p&gt;I have two dicts and want one.&lt;/p&gt;" Tags="&lt;python&gt;" />
  <row Id="2" PostTypeId="1" AnswerCount="1" Title="Merging dictionaries in Python"
       Body="&lt;p&gt;What is the idiomatic way to merge two dicts?&lt;/p&gt;" Tags="&lt;python&gt;" />
  <row Id="3" PostTypeId="1" AnswerCount="3" Title="Read a CSV into a DataFrame"
       Body="&lt;p&gt;Loading comma separated data with pandas.&lt;/p&gt;" Tags="&lt;python&gt;&lt;pandas&gt;" />
  <row Id="4" PostTypeId="2" ParentId="1" Body="&lt;p&gt;Use the | operator.&lt;/p&gt;" />
  <row Id="5" PostTypeId="1" AnswerCount="0" Title="Unanswered question"
       Body="&lt;p&gt;Nobody replied to this one.&lt;/p&gt;" Tags="&lt;python&gt;" />
</posts>
"""


def main() -> None:
    workdir = Path(tempfile.mkdtemp(prefix="qcluster-demo-"))
    posts_path = workdir / "Posts.xml"
    posts_path.write_text(POSTS)

    with open(posts_path, "rb") as f:
        questions = list(filter_questions(parse_posts(f)))
    print(f"retained {len(questions)} of 5 rows (the answer row is dropped):")
    for q in questions:
        flag = "answered" if q.answered else "unanswered"
        print(f"  #{q.id}  {q.title}  [{flag}]")

    dim = 256
    matrix = np.stack([hash_embed(question_text(q), dim=dim) for q in questions])
    collection = VectorCollection(
        dim, np.array([q.id for q in questions], dtype=np.uint64), matrix
    )

    graph = build_graph(collection)
    print(f"\nsimilarity graph: {len(graph.edge_w)} edges over {len(questions)} vertices")
    for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
        a, b = collection.ids[u], collection.ids[v]
        print(f"  cos(#{a}, #{b}) = {w:.3f}")

    partition = cluster(graph, threshold=0.05)
    print(f"\nclusters at threshold 0.05: {list(partition.clusters)}")

    out = workdir / "clusters.json"
    with open(out, "w") as f:
        write_clusters(partition, f)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
