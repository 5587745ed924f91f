import json

import numpy as np
import pytest

from curveclust.cli import main
from curveclust.io import (
    read_curves_csv,
    read_labels_csv,
    read_partition_json,
    write_curves_csv,
)


@pytest.fixture()
def small_dataset(tmp_path):
    curves = tmp_path / "curves.csv"
    labels = tmp_path / "labels.csv"
    code = main(
        [
            "simulate", "--scenario", "s33b", "--sizes", "2,2", "--points", "80",
            "--seed", "1", "--out", str(curves), "--labels", str(labels),
        ]
    )
    assert code == 0
    return curves, labels


class TestSimulate:
    def test_writes_csv_pair(self, small_dataset):
        curves, labels = small_dataset
        names, points, samples = read_curves_csv(curves)
        assert names == ["0", "1", "2", "3"]
        assert len(points) == 80 and samples.shape == (4, 80)
        parsed = read_labels_csv(labels)
        assert parsed == {"0": "1", "1": "1", "2": "2", "3": "2"}

    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "c.csv"
        points = np.linspace(0, 1, 60)
        rows = np.sin(np.outer([1, 2], points))
        write_curves_csv(path, ["a", "b"], points, rows)
        names, got_points, got_rows = read_curves_csv(path)
        np.testing.assert_array_equal(got_points, points)
        np.testing.assert_array_equal(got_rows, rows)
        assert names == ["a", "b"]


class TestCluster:
    def test_cluster_and_evaluate(self, small_dataset, tmp_path, capsys):
        curves, labels = small_dataset
        out = tmp_path / "result.json"
        code = main(
            [
                "cluster", "--input", str(curves), "--lambda0", "0.0",
                "--grid", "80", "--max-iter", "4", "--output", str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert set(data) >= {
            "partition", "threshold", "index_name", "index_value", "iterations", "candidates",
        }
        assert data["partition"] == [["0", "1"], ["2", "3"]]
        assert data["index_name"] == "silhouette"
        assert all(len(w) == 101 for w in data["warps"].values())

        code = main(["evaluate", "--pred", str(out), "--truth", str(labels)])
        assert code == 0
        printed = capsys.readouterr().out.strip()
        assert printed == "1.000000"

    def test_byte_identical_reruns(self, small_dataset, tmp_path):
        curves, _ = small_dataset
        outputs = []
        for name in ("one.json", "two.json"):
            out = tmp_path / name
            code = main(
                [
                    "cluster", "--input", str(curves), "--lambda0", "0.25",
                    "--grid", "80", "--max-iter", "3", "--seed", "7",
                    "--output", str(out),
                ]
            )
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_dunn_index_flags(self, small_dataset, tmp_path):
        curves, _ = small_dataset
        out = tmp_path / "result.json"
        code = main(
            [
                "cluster", "--input", str(curves), "--lambda0", "0.0",
                "--index", "dunn", "--dunn-inter", "I3", "--dunn-intra", "J2",
                "--grid", "80", "--max-iter", "3", "--output", str(out),
            ]
        )
        assert code == 0
        assert json.loads(out.read_text())["index_name"] == "dunn-I3-J2"


class TestAlign:
    def test_align_pair(self, small_dataset, tmp_path):
        curves, _ = small_dataset
        out = tmp_path / "align.json"
        code = main(
            [
                "align", "--input", str(curves), "--pair", "0,1",
                "--lambda0", "0.0", "--out", str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert data["rho"] >= 0.99  # same-shape pair
        assert len(data["warp"]) == 101
        assert {"penalty_fwd", "penalty_inv", "r_fwd", "r_inv"} <= set(data)

    def test_unknown_id_is_invalid_input(self, small_dataset, tmp_path):
        curves, _ = small_dataset
        code = main(
            [
                "align", "--input", str(curves), "--pair", "0,99",
                "--lambda0", "0.0", "--out", str(tmp_path / "x.json"),
            ]
        )
        assert code == 2


class TestIndexes:
    def test_prints_all_variants(self, small_dataset, tmp_path, capsys):
        curves, _ = small_dataset
        partition = tmp_path / "partition.json"
        partition.write_text(json.dumps([["0", "1"], ["2", "3"]]))
        code = main(
            [
                "indexes", "--input", str(curves), "--partition", str(partition),
                "--lambda0", "0.0",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("silhouette ")
        names = [line.split()[0] for line in lines[1:]]
        assert names == [
            "dunn_I1_J1", "dunn_I1_J2", "dunn_I2_J1", "dunn_I2_J2", "dunn_I3_J1", "dunn_I3_J2",
        ]


class TestExitCodes:
    def test_missing_file(self, tmp_path):
        code = main(
            [
                "cluster", "--input", str(tmp_path / "none.csv"), "--lambda0", "0.0",
                "--output", str(tmp_path / "out.json"),
            ]
        )
        assert code == 2

    def test_constant_curve_degenerate(self, tmp_path):
        path = tmp_path / "flat.csv"
        points = np.linspace(0, 1, 60)
        rows = np.vstack([np.ones_like(points), np.sin(points)])
        write_curves_csv(path, ["0", "1"], points, rows)
        code = main(
            [
                "cluster", "--input", str(path), "--lambda0", "0.0",
                "--grid", "60", "--output", str(tmp_path / "out.json"),
            ]
        )
        assert code == 3

    def test_partition_json_accepts_bare_array(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps([["0"], ["1"]]))
        assert read_partition_json(path) == [["0"], ["1"]]
