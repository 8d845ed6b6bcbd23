import json
import subprocess
import sys

import pytest

from helpers import golden_trio_set
from xmentor.aggregate import aggregate
from xmentor.formats import parse_aggregation, write_corpus


def run_cli(*args, stdin: bytes | None = None):
    return subprocess.run(
        [sys.executable, "-m", "xmentor", *args],
        input=stdin,
        capture_output=True,
        timeout=60,
    )


class TestAggregateCommand:
    def test_machine_output_golden_features(self, golden_trio_path):
        result = run_cli("aggregate", "--input", str(golden_trio_path), "--format", "machine")
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert [f["feature"] for f in payload["features"]] == ["F1", "F3", "F2", "F5", "F6"]

    def test_machine_equals_library_result(self, golden_trio_path):
        result = run_cli("aggregate", "--input", str(golden_trio_path), "--format", "machine", "--trace")
        assert parse_aggregation(result.stdout) == aggregate(golden_trio_set())

    def test_snapshot_byte_identical_across_runs(self, golden_trio_path):
        args = ("aggregate", "--input", str(golden_trio_path), "--format", "machine", "--trace")
        first = run_cli(*args)
        # interleave a human-mode run; it must not disturb machine output
        human = run_cli("aggregate", "--input", str(golden_trio_path), "--format", "human")
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.returncode == human.returncode == 0

    def test_human_output_shows_stages(self, golden_trio_path):
        result = run_cli("aggregate", "--input", str(golden_trio_path))
        text = result.stdout.decode()
        assert "strict rank" in text
        assert "blacklist" in text
        assert "loose sign" in text
        assert "1. F1 (+)" in text
        assert "k=5" in text

    def test_stdin_single_document_mode(self, golden_trio_path):
        data = golden_trio_path.read_bytes()
        result = run_cli("aggregate", "--stdin", "--format", "machine", stdin=data)
        assert result.returncode == 0
        assert json.loads(result.stdout)["instance_id"] == "golden-1"

    def test_corpus_input_sorted_by_instance(self, tmp_path, golden_trio_path):
        from helpers import lime_shap_pair_set

        corpus = tmp_path / "corpus.xm"
        corpus.write_bytes(write_corpus([lime_shap_pair_set(), golden_trio_set()]))
        result = run_cli("aggregate", "--input", str(corpus), "--format", "machine")
        payload = json.loads(result.stdout)
        assert [doc["instance_id"] for doc in payload] == ["golden-1", "pair-1"]

    def test_k_override(self, golden_trio_path):
        result = run_cli("aggregate", "--input", str(golden_trio_path), "--format", "machine", "--k", "2")
        payload = json.loads(result.stdout)
        assert len(payload["features"]) == 2

    def test_output_file(self, tmp_path, golden_trio_path):
        out = tmp_path / "result.xm"
        run_cli("aggregate", "--input", str(golden_trio_path), "--format", "machine", "--output", str(out))
        assert json.loads(out.read_bytes())["instance_id"] == "golden-1"

    def test_invalid_document_exits_one(self, tmp_path):
        bad = tmp_path / "bad.xm"
        bad.write_text('{"schema_version": "xmentor/1", "instance_id": "x", "explanations": []}')
        result = run_cli("aggregate", "--input", str(bad))
        assert result.returncode == 1
        assert b"too_few_explainers" in result.stderr

    def test_config_file(self, tmp_path, golden_trio_path):
        config = tmp_path / "config.json"
        config.write_text('{"k_moderate": 3}')
        result = run_cli(
            "aggregate", "--input", str(golden_trio_path), "--format", "machine", "--config", str(config)
        )
        assert len(json.loads(result.stdout)["features"]) == 3

    def test_unknown_config_key_is_usage_error(self, tmp_path, golden_trio_path):
        config = tmp_path / "config.json"
        config.write_text('{"k_gigantic": 3}')
        result = run_cli("aggregate", "--input", str(golden_trio_path), "--config", str(config))
        assert result.returncode == 2


class TestMetricsCommand:
    def test_pair_metrics_values(self, lime_shap_pair_path):
        result = run_cli(
            "metrics", "--input", str(lime_shap_pair_path), "--k", "5",
            "--pair", "LIME:SHAP", "--format", "machine",
        )
        payload = json.loads(result.stdout)
        (record,) = payload["pairs"]
        assert record["fa"] == 1.0
        assert record["ra"] == 0.2
        assert record["sa"] == 0.8
        assert record["rank_mismatch_count"] == 4
        assert record["sign_mismatch_count"] == 1

    def test_human_table(self, lime_shap_pair_path):
        result = run_cli("metrics", "--input", str(lime_shap_pair_path), "--k", "5")
        text = result.stdout.decode()
        assert "LIME vs SHAP" in text
        assert "1.000" in text and "0.200" in text and "0.800" in text

    def test_default_k_is_adaptive(self, lime_shap_pair_path):
        result = run_cli("metrics", "--input", str(lime_shap_pair_path), "--format", "machine")
        payload = json.loads(result.stdout)
        assert payload["pairs"][0]["k"] == 3  # n=5 is a small feature space

    def test_unknown_pair_member_fails(self, lime_shap_pair_path):
        result = run_cli("metrics", "--input", str(lime_shap_pair_path), "--pair", "LIME:Anchors")
        assert result.returncode == 1
        assert b"Anchors" in result.stderr

    def test_snapshot_determinism(self, golden_trio_path):
        args = ("metrics", "--input", str(golden_trio_path), "--format", "machine")
        assert run_cli(*args).stdout == run_cli(*args).stdout


class TestValidateCommand:
    def test_valid_fixture(self, golden_trio_path):
        result = run_cli("validate", "--input", str(golden_trio_path))
        assert result.returncode == 0
        assert b"no findings" in result.stdout

    def test_empty_file_exits_one_with_diagnostic(self, tmp_path):
        empty = tmp_path / "empty.xm"
        empty.write_bytes(b"")
        result = run_cli("validate", "--input", str(empty))
        assert result.returncode == 1
        assert b"invalid document" in result.stderr

    def test_invalid_set_reports_findings(self, tmp_path):
        doc = {
            "schema_version": "xmentor/1",
            "instance_id": "x",
            "explanations": [{"explainer": "solo", "attributions": [{"feature": "f", "weight": 0.1}]}],
        }
        path = tmp_path / "doc.xm"
        path.write_text(json.dumps(doc))
        result = run_cli("validate", "--input", str(path), "--format", "machine")
        assert result.returncode == 1
        payload = json.loads(result.stdout)
        assert payload["valid"] is False
        assert any(f["code"] == "too_few_explainers" for f in payload["findings"])

    def test_warning_only_set_is_valid(self, tmp_path):
        doc = {
            "schema_version": "xmentor/1",
            "instance_id": "x",
            "explanations": [
                {"explainer": "a", "attributions": [{"feature": "f", "weight": 0.1}, {"feature": "g", "weight": 0.9}]},
                {"explainer": "b", "attributions": [{"feature": "f", "weight": 0.2}]},
            ],
        }
        path = tmp_path / "doc.xm"
        path.write_text(json.dumps(doc))
        result = run_cli("validate", "--input", str(path))
        assert result.returncode == 0
        assert b"unsorted_weights" in result.stdout

    def test_missing_file(self):
        result = run_cli("validate", "--input", "/nonexistent/nope.xm")
        assert result.returncode == 1
        assert b"cannot read" in result.stderr


class TestUsageErrors:
    def test_unknown_flag(self, golden_trio_path):
        result = run_cli("aggregate", "--input", str(golden_trio_path), "--frobnicate")
        assert result.returncode == 2

    def test_missing_input(self):
        result = run_cli("aggregate")
        assert result.returncode == 2

    def test_unknown_subcommand(self):
        assert run_cli("explode").returncode == 2


class TestSynthCommand:
    def test_deterministic_output(self):
        args = ("synth", "--seed", "42", "--count", "5", "--features", "3:6")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_corpus_is_parseable_and_sized(self):
        result = run_cli("synth", "--seed", "7", "--count", "4", "--mode", "sign_flip")
        payload = json.loads(result.stdout)
        assert len(payload) == 4
        assert all(doc["schema_version"] == "xmentor/1" for doc in payload)

    def test_bad_features_range(self):
        assert run_cli("synth", "--seed", "1", "--features", "6").returncode == 2


class TestReportCommand:
    def test_writes_directory(self, tmp_path):
        corpus = tmp_path / "corpus.xm"
        synth = run_cli("synth", "--seed", "3", "--count", "6", "--output", str(corpus))
        assert synth.returncode == 0
        out_dir = tmp_path / "report"
        result = run_cli("report", "--input", str(corpus), "--output", str(out_dir), "--trace")
        assert result.returncode == 0
        assert (out_dir / "metrics.csv").exists()
        assert (out_dir / "pair_means.csv").exists()
        assert (out_dir / "rank_histogram.csv").exists()
        assert (out_dir / "sign_histogram.csv").exists()
        summary = json.loads((out_dir / "summary.json").read_bytes())
        assert summary["instances"] == 6
        assert summary["pair_records"] == 6 * 3
        aggregations = list((out_dir / "aggregations").glob("*.xm"))
        assert len(aggregations) == 6
        for path in aggregations:
            parse_aggregation(path.read_bytes())

    def test_metrics_csv_row_count(self, tmp_path, golden_trio_path):
        out_dir = tmp_path / "report"
        run_cli("report", "--input", str(golden_trio_path), "--output", str(out_dir))
        lines = (out_dir / "metrics.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 3  # header + 3 explainer pairs
