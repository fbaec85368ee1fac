from __future__ import annotations

import csv
import json

import pytest

from modules.evaluation.experiment import ExperimentReport, SeedResult, run_experiment
from modules.graph.synthetic import NORMAL_CLASS
from modules.layers.specs import LayerKind, build_layer_specs
from modules.ocgnn.config import TrainConfig
from utils.errors import ConfigError


CONFIG = TrainConfig(learning_rate=0.01, dropout_rate=0.0, max_epochs=40, patience=40)


def _specs(graph):
    return build_layer_specs(graph.num_features, [(LayerKind.GCN, 8), (LayerKind.GCN, 4)])


def test_three_seeds_in_order(planted_graph):
    report = run_experiment(
        planted_graph, [4, 2, 9], _specs(planted_graph), CONFIG, normal_class=NORMAL_CLASS
    )

    assert [result.seed for result in report.results] == [4, 2, 9]
    assert all(result.ok for result in report.results)
    assert 0.0 <= report.mean_auc <= 1.0
    assert report.std_auc >= 0.0
    assert report.architecture == ["gcn:8", "gcn:4"]


def test_threads_do_not_change_results(planted_graph):
    specs = _specs(planted_graph)

    serial = run_experiment(planted_graph, [0, 1, 2], specs, CONFIG, normal_class=NORMAL_CLASS)
    parallel = run_experiment(
        planted_graph, [0, 1, 2], specs, CONFIG, normal_class=NORMAL_CLASS, max_workers=3
    )

    assert [r.test_auc for r in serial.results] == [r.test_auc for r in parallel.results]
    assert serial.to_dict(include_timing=False) == parallel.to_dict(include_timing=False)


def test_custom_ratios(planted_graph):
    # 30 normal nodes: 6 train, 24 anomalies needed for val/test out of 30
    report = run_experiment(
        planted_graph,
        [0],
        _specs(planted_graph),
        CONFIG,
        normal_class=NORMAL_CLASS,
        ratios=(0.2, 0.3, 0.5),
    )

    assert report.results[0].ok


def test_failed_seed_is_reported_not_dropped(planted_graph):
    failing = run_experiment(
        planted_graph, [0], _specs(planted_graph), CONFIG, normal_class="no-such-class"
    )
    assert not failing.results[0].ok
    assert "no-such-class" in failing.results[0].error
    assert failing.successful == []


def test_no_seeds_is_a_config_error(planted_graph):
    with pytest.raises(ConfigError):
        run_experiment(planted_graph, [], _specs(planted_graph), CONFIG, normal_class=NORMAL_CLASS)


def _report():
    return ExperimentReport(
        normal_class="Neural_Networks",
        architecture=["gcn:64", "gcn:64", "gcn:32"],
        results=[
            SeedResult(0, 0.70, 0.72, 12, 112, 1.5, 3.0),
            SeedResult(1, 0.80, 0.79, 20, 120, 1.4, 2.0),
            SeedResult(2, None, None, 0, 0, None, 0.1, error="diverged"),
        ],
        wall_seconds=5.1,
    )


def test_summary_uses_sample_standard_deviation():
    report = _report()

    assert report.mean_auc == pytest.approx(0.75)
    assert report.std_auc == pytest.approx(0.0707106781, rel=1e-6)


def test_single_seed_has_zero_deviation():
    report = ExperimentReport("x", ["gcn:2"], [SeedResult(0, 0.9, 0.9, 1, 1, 1.0, 0.1)])

    assert report.std_auc == 0.0


def test_table_shows_percentages_and_failures():
    table = _report().format_table()

    assert "70.00" in table and "80.00" in table
    assert "failed: diverged" in table
    assert "75.00 ± 7.07" in table
    assert "over 2 seeds" in table


def test_json_and_csv_outputs(tmp_path):
    report = _report()

    json_path = report.write_json(tmp_path / "out" / "report.json")
    csv_path = report.write_csv(tmp_path / "out" / "report.csv")

    payload = json.loads(json_path.read_text(encoding="utf-8"))
    assert payload["succeeded"] == 2 and payload["failed"] == 1
    assert payload["seeds"][2]["error"] == "diverged"
    assert payload["mean_auc"] == pytest.approx(0.75)

    with csv_path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert [row["seed"] for row in rows] == ["0", "1", "2"]
    assert float(rows[0]["test_auc"]) == 0.70
    assert rows[2]["test_auc"] == "" and rows[2]["error"] == "diverged"


def test_timing_can_be_left_out():
    payload = _report().to_dict(include_timing=False)

    assert "wall_seconds" not in payload
    assert all("seconds" not in row for row in payload["seeds"])
