"""Threshold sweep on synthetic vectors: how cluster quality moves with T.

Builds 40 tight groups of near-duplicates plus 200 unrelated background
vectors, sweeps the standard eight thresholds, and prints the report table.
Run with:  python3 demos/02_threshold_sweep.py
"""

import numpy as np

from qcluster import VectorCollection, SweepConfig, render_report, run_sweep


def synthetic(n_groups=40, group_size=8, n_background=200, dim=128, seed=42):
    rng = np.random.default_rng(seed)
    rows, ids = [], []
    next_id = 1
    for _ in range(n_groups):
        base = rng.standard_normal(dim)
        base /= np.linalg.norm(base)
        for _ in range(group_size):
            noise = rng.standard_normal(dim)
            noise -= noise @ base * base
            noise /= np.linalg.norm(noise)
            v = base + 0.6 * noise
            rows.append(v / np.linalg.norm(v))
            ids.append(next_id)
            next_id += 1
    for _ in range(n_background):
        v = rng.standard_normal(dim)
        rows.append(v / np.linalg.norm(v))
        ids.append(next_id)
        next_id += 1
    matrix = np.stack(rows).astype(np.float32)
    return VectorCollection(dim, np.array(ids, dtype=np.uint64), matrix)


def main() -> None:
    collection = synthetic()
    report = run_sweep(collection, SweepConfig())
    print(render_report(report, format="table"))
    print(f"\nswept {len(collection)} vectors in {report.elapsed_seconds:.2f}s")


if __name__ == "__main__":
    main()
