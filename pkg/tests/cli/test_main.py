"""
Tests for the command-line front-end.
"""

import json

from src.census.census import read_records
from src.cli.main import EXIT_OK, EXIT_USAGE, main


def test_group_quaternion(capsys):
    """Test describing Q8"""
    assert main(["group", "q8e:0"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 8
    assert payload["m"] == 2
    assert payload["q8e"] is True
    assert payload["inverse_closed_count"] == 32
    assert payload["subset_count"] == 256


def test_group_dicyclic(capsys):
    """Test describing Dic(C6)"""
    assert main(["group", "dic:C6:y=3"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["group"] == "dic:C6:y=3"
    assert payload["q8e"] is False
    assert payload["inverse_closed_count"] == 128


def test_verify(capsys):
    """Test the structural facts pass for Q8 x C2"""
    assert main(["verify", "q8e:1"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "q8e"
    assert payload["b_order"] == 128
    assert all(fact["passed"] for fact in payload["facts"])


def test_classify(capsys):
    """Test classifying the empty set on Q8"""
    assert main(["classify", "q8e:0", "--set", "00"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "PROPER_SUPERGROUP"
    assert payload["aut_order"] == 40320


def test_classify_not_inverse_closed(capsys):
    """Test an undirected set that is not inverse-closed is a usage error"""
    assert main(["classify", "q8e:0", "--set", "02"]) == EXIT_USAGE
    assert "inverse-closed" in capsys.readouterr().err
    assert main(["classify", "q8e:0", "--set", "02", "--directed"]) == EXIT_OK


def test_usage_errors(tmp_path, capsys):
    """Test bad specs, bad flags and refused caps exit with status 2"""
    out = str(tmp_path / "records.jsonl")
    assert main(["group", "dic:C6:y=2"]) == EXIT_USAGE
    assert main(["group", "nonsense"]) == EXIT_USAGE
    assert main(["census", "q8e:0", "--sample", "0", "--out", out]) == EXIT_USAGE
    assert main(["census", "q8e:0", "--exhaustive", "--max-sets", "10", "--out", out]) == EXIT_USAGE
    assert main(["census", "q8e:0", "--out", out]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    capsys.readouterr()


def test_census_exhaustive(tmp_path, capsys):
    """Test an exhaustive census writes records and a reproducible summary"""
    out = tmp_path / "q8.jsonl"
    assert main(["census", "q8e:0", "--exhaustive", "--out", str(out)]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["total"] == 32
    assert summary["bound_satisfied"] is True

    records = read_records(str(out))
    assert len(records) == 32
    csv_path = tmp_path / "q8.summary.csv"
    first_csv = csv_path.read_bytes()

    assert main(["census", "q8e:0", "--exhaustive", "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    assert csv_path.read_bytes() == first_csv
    assert [r.fingerprint() for r in read_records(str(out))] == [r.fingerprint() for r in records]


def test_census_sampled(tmp_path, capsys):
    """Test a sampled directed census with an explicit summary path"""
    out = tmp_path / "c6.jsonl"
    csv_path = tmp_path / "c6.csv"
    argv = [
        "census", "dic:C6:y=3", "--sample", "8", "--seed", "2", "--directed",
        "--out", str(out), "--summary-csv", str(csv_path),
    ]
    assert main(argv) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["mode"] == "sampled"
    assert summary["directed"] is True
    assert summary["seed"] == 2
    assert len(out.read_text().splitlines()) == 8
    assert csv_path.exists()


def test_trend(tmp_path, capsys):
    """Test the trend command writes one row per group"""
    out = tmp_path / "trend.csv"
    assert main(["trend", "dic:C6:y=3", "q8e:0", "--sample", "3", "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("dic:C4:y=2,8,")


def test_metrics_file(tmp_path, capsys):
    """Test Prometheus metrics are written on request"""
    metrics = tmp_path / "metrics.prom"
    out = tmp_path / "records.jsonl"
    argv = ["census", "q8e:0", "--sample", "2", "--out", str(out), "--metrics-out", str(metrics)]
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    assert "dicyclic_census_classifications_total" in metrics.read_text()


def test_config_file(tmp_path, capsys):
    """Test a JSON config file overrides the caps"""
    config_path = tmp_path / "caps.json"
    config_path.write_text(json.dumps({"enumeration": {"max_sets": 4}}))
    out = str(tmp_path / "records.jsonl")
    argv = ["census", "q8e:0", "--exhaustive", "--config", str(config_path), "--out", out]
    assert main(argv) == EXIT_USAGE
    capsys.readouterr()
