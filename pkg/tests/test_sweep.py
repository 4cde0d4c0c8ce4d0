import json

import numpy as np
import pytest

from qcluster.cluster import ClusterSet
from qcluster.sweep import (
    PAPER_THRESHOLDS,
    SweepConfig,
    render_report,
    report_jsonable,
    run_sweep,
    singleton_ratio,
    size_distribution,
)

from conftest import make_collection


def identical_groups_collection(k=3, m=4, dim=6):
    """k groups of m identical basis vectors; cross-group similarity 0."""
    rows = []
    ids = []
    next_id = 1
    for g in range(k):
        v = np.zeros(dim, np.float32)
        v[g] = 1.0
        for _ in range(m):
            rows.append(v)
            ids.append(next_id)
            next_id += 1
    return make_collection(np.array(rows), ids)


class TestSweepConfig:
    def test_defaults_follow_the_eight_thresholds(self):
        cfg = SweepConfig()
        assert cfg.thresholds == PAPER_THRESHOLDS
        assert cfg.min_weight_stored == 0.5

    def test_thresholds_must_ascend(self):
        with pytest.raises(ValueError, match="ascending"):
            SweepConfig(thresholds=(0.5, 0.5))

    def test_floor_cannot_exceed_min_threshold(self):
        with pytest.raises(ValueError, match="min_weight_stored"):
            SweepConfig(thresholds=(0.5, 0.9), min_weight_stored=0.6)


class TestDistributionArithmetic:
    def test_sizes_and_scr(self):
        part = ClusterSet(
            clusters=((1, 2, 3, 4, 5), (6, 7), (8,), (9,), (10,), (11,)),
            threshold=0.5,
        )
        dist = size_distribution(part)
        assert dist == {5: 1, 2: 1, 1: 4}
        assert singleton_ratio(dist) == pytest.approx(4 / 6)

    def test_scr_zero_without_singletons(self):
        assert singleton_ratio({3: 2}) == 0.0


class TestRunSweep:
    def test_identical_groups_cluster_cleanly(self):
        collection = identical_groups_collection(k=3, m=4)
        report = run_sweep(collection, SweepConfig())
        for r in report.results:
            assert r.cluster_count == 3
            assert r.size_distribution == {4: 3}
            assert r.scr == 0.0

    def test_conservation_and_monotone_count(self, trend_corpus):
        collection, _, _ = trend_corpus
        report = run_sweep(collection, SweepConfig())
        counts = [r.cluster_count for r in report.results]
        assert counts == sorted(counts)
        for r in report.results:
            assert sum(s * c for s, c in r.size_distribution.items()) == report.n
            assert 0.0 <= r.scr <= 1.0

    def test_refinement_between_consecutive_thresholds(self):
        rng = np.random.default_rng(31)
        base = rng.standard_normal((8, 5)).astype(np.float32)
        rows = np.vstack([base + rng.standard_normal((8, 5)).astype(np.float32) * s
                          for s in (0.0, 0.05, 0.1, 0.4)])
        collection = make_collection(rows)
        report = run_sweep(collection, SweepConfig(thresholds=(0.3, 0.5, 0.7, 0.9),
                                                   min_weight_stored=0.3))
        parts = [r.clusters for r in report.results]
        for low, high in zip(parts, parts[1:]):
            blocks = [set(c) for c in low.clusters]
            for fine in high.clusters:
                assert sum(1 for b in blocks if set(fine) <= b) == 1

    def test_deterministic_across_runs_and_workers(self, trend_corpus):
        collection, _, _ = trend_corpus
        cfg = SweepConfig(thresholds=(0.5, 0.9))
        r1 = render_report(run_sweep(collection, cfg, workers=1), "json")
        r2 = render_report(run_sweep(collection, cfg, workers=2), "json")
        assert r1 == r2


class TestRenderReport:
    @pytest.fixture(scope="class")
    @staticmethod
    def report():
        rng = np.random.default_rng(32)
        base = np.eye(4, 6, dtype=np.float32)
        rows = np.vstack([np.repeat(base, 3, axis=0),
                          rng.standard_normal((4, 6)).astype(np.float32)])
        return run_sweep(make_collection(rows), SweepConfig(thresholds=(0.5, 0.9)))

    def test_table_distribution_cell_format(self):
        part = ClusterSet(
            clusters=((1, 2, 3, 4, 5), (6, 7), (8,), (9,), (10,), (11,)),
            threshold=0.5,
        )
        dist = size_distribution(part)
        cell = ", ".join(
            f"{s} : {dist[s]}" for s in sorted(dist, reverse=True)
        )
        assert cell == "5 : 1, 2 : 1, 1 : 4"

    def test_table_contains_distribution_and_metrics(self, report):
        table = render_report(report, "table")
        lines = table.strip().split("\n")
        assert len(lines) == 2 + len(report.results)
        assert " : " in lines[2]

    def test_json_and_table_agree_on_values(self, report):
        obj = json.loads(render_report(report, "json"))
        table = render_report(report, "table")
        for entry in obj["thresholds"]:
            scr = entry["scr"]
            assert f"{scr:.9g}" in table  # same 9-significant-digit text

    def test_json_shape(self, report):
        obj = json.loads(render_report(report, "json"))
        assert set(obj) == {"n", "dim", "distance", "min_weight_stored", "thresholds"}
        entry = obj["thresholds"][0]
        assert set(entry) == {
            "threshold", "cluster_count", "size_distribution", "scr", "metrics",
        }
        sizes = [int(s) for s in entry["size_distribution"]]
        assert sizes == sorted(sizes, reverse=True)

    def test_timing_not_serialized(self, report):
        assert report.elapsed_seconds > 0.0
        assert "elapsed" not in render_report(report, "json")

    def test_unknown_format_rejected(self, report):
        with pytest.raises(ValueError):
            render_report(report, "yaml")
