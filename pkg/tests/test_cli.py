import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from skillscout.catalog import generate_synthetic_catalog, write_catalog
from skillscout.cli import main
from skillscout.service.logs import read_dialog_logs


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A tiny end-to-end pipeline workspace shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    runner = CliRunner()

    r = runner.invoke(main, ["generate-catalog", "--seed", "7", "--skills", "120",
                             "--roots", "6", "--categories", "18",
                             "--out", str(root / "catalog.json")])
    assert r.exit_code == 0, r.output

    r = runner.invoke(main, ["bootstrap-logs", "--catalog", str(root / "catalog.json"),
                             "--episodes", "800", "--seed", "1",
                             "--out", str(root / "logs.jsonl")])
    assert r.exit_code == 0, r.output

    r = runner.invoke(main, ["train-sim", "--logs", str(root / "logs.jsonl"),
                             "--epochs", "6", "--seed", "1",
                             "--out", str(root / "sim.json")])
    assert r.exit_code == 0, r.output

    r = runner.invoke(main, ["train-rl", "--catalog", str(root / "catalog.json"),
                             "--sim", str(root / "sim.json"), "--steps", "600",
                             "--eval-episodes", "20", "--seed", "2",
                             "--out-dir", str(root / "run")])
    assert r.exit_code == 0, r.output
    return root


def test_generate_catalog_counts(workspace):
    doc = json.loads((workspace / "catalog.json").read_text())
    assert doc["format_version"] == 1
    assert len(doc["skills"]) == 120
    assert len(doc["categories"]) == 18


def test_bootstrap_logs_distinct_sessions(workspace):
    episodes = read_dialog_logs(workspace / "logs.jsonl")
    assert len(episodes) == 800
    assert len({e.session_id for e in episodes}) == 800


def test_train_sim_reports_perplexity(workspace):
    assert (workspace / "sim.json").exists()
    doc = json.loads((workspace / "sim.json").read_text())
    assert doc["format_version"] == 1


def test_train_rl_writes_artifacts(workspace):
    run = workspace / "run"
    assert (run / "policy.json").exists()
    assert (run / "learning_curve.png").exists()
    stats = (run / "train_stats.tsv").read_text().strip().split("\n")
    assert stats[0].split("\t") == ["step", "success_rate", "avg_dialog_length", "mean_return"]
    assert len(stats) > 1


def test_evaluate_rule_policy(workspace):
    runner = CliRunner()
    r = runner.invoke(main, ["evaluate", "--catalog", str(workspace / "catalog.json"),
                             "--sim", str(workspace / "sim.json"), "--policy", "rule",
                             "--episodes", "50", "--seed", "1"])
    assert r.exit_code == 0, r.output
    assert "success_rate=" in r.output
    assert "avg_dialog_length=" in r.output


def test_evaluate_consumes_rl_checkpoint(workspace):
    runner = CliRunner()
    r = runner.invoke(main, ["evaluate", "--catalog", str(workspace / "catalog.json"),
                             "--sim", str(workspace / "sim.json"), "--policy", "rl",
                             "--checkpoint", str(workspace / "run" / "policy.json"),
                             "--episodes", "50", "--seed", "1",
                             "--out-dir", str(workspace / "eval")])
    assert r.exit_code == 0, r.output
    assert (workspace / "eval" / "evaluation.tsv").exists()
    assert (workspace / "eval" / "evaluation.png").exists()


def test_evaluate_determinism(workspace):
    runner = CliRunner()
    args = ["evaluate", "--catalog", str(workspace / "catalog.json"),
            "--sim", str(workspace / "sim.json"), "--policy", "rule",
            "--episodes", "40", "--seed", "9"]
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.output == b.output


def test_unknown_subcommand_usage_error():
    runner = CliRunner()
    r = runner.invoke(main, ["frobnicate"])
    assert r.exit_code != 0
    assert "Usage" in r.output or "No such command" in r.output


def test_unknown_flag_usage_error(workspace):
    runner = CliRunner()
    r = runner.invoke(main, ["evaluate", "--bogus-flag", "1"])
    assert r.exit_code != 0


def test_chat_scripted_session(workspace, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)  # the chat log lands in the working directory
    runner = CliRunner()
    r = runner.invoke(main, ["chat", "--catalog", str(workspace / "catalog.json"),
                             "--seed", "4"],
                      input="help\nstop\n")
    assert r.exit_code == 0, r.output
    assert "[agent]" in r.output
    assert "ended" in r.output
    assert (tmp_path / "dialogs.jsonl").exists()


def test_bootstrap_deterministic_bytes(tmp_path):
    runner = CliRunner()
    cat = generate_synthetic_catalog(3, 40, 3, 8)
    write_catalog(cat, tmp_path / "c.json")
    for name in ("a", "b"):
        r = runner.invoke(main, ["bootstrap-logs", "--catalog", str(tmp_path / "c.json"),
                                 "--episodes", "60", "--seed", "5",
                                 "--out", str(tmp_path / f"{name}.jsonl")])
        assert r.exit_code == 0, r.output
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
