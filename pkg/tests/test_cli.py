import csv
import json

import pytest

from qgenbench.cli import main, summarize
from qgenbench.pipeline import read_records

FAST = ["--set", "qcbm.max_evals=100", "--set", "qcbm.popsize=10", "--set", "qcbm.eval_shots=200"]


@pytest.fixture
def results(tmp_path):
    paths = []
    for seed in (1, 2):
        out = tmp_path / f"s{seed}"
        assert main(["run", "-c", "configs/discrete_standard.yaml", "-o", str(out),
                     "--set", f"seed={seed}", *FAST]) == 0
        paths.append(out / "results.json")
    return paths


def test_run_writes_outputs(results):
    recs = read_records(results[0])
    assert len(recs) == 1 and recs[0].status == "ok"
    with (results[0].parent / "loss_history.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0].keys() == {"repetition", "module", "evaluations", "kl"}
    assert [int(r["evaluations"]) for r in rows] == list(range(10, 101, 10))


def test_validate(capsys):
    assert main(["validate", "-c", "configs/x_copula.yaml"]) == 0
    out = capsys.readouterr().out
    assert "transformation:pit(n_qubits=6)" in out


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("chain:\n  - dataset: x\n")
    assert main(["run", "-c", str(bad), "-o", str(tmp_path / "o")]) == 2
    assert "chain[0]" in capsys.readouterr().err
    assert main(["validate", "-c", str(tmp_path / "missing.yaml")]) == 2


def test_failed_run_exit_code(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("chain:\n  - application: generative_modeling\n  - dataset: csv\n    path: nope.csv\n")
    assert main(["run", "-c", str(cfg), "-o", str(tmp_path / "o")]) == 1
    rec = read_records(tmp_path / "o" / "results.json")[0]
    assert rec.failed


def test_report_groups_seeds(results, capsys):
    assert main(["report", *map(str, results), "--format", "csv"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert len(rows) == 1 and rows[0]["runs"] == "2"
    kls = [read_records(p)[0].metrics["qcbm"]["final_kl"] for p in results]
    assert float(rows[0]["final_kl_mean"]) == pytest.approx(sum(kls) / 2)
    assert float(rows[0]["final_kl_sem"]) == pytest.approx(abs(kls[0] - kls[1]) / 2 / 2 ** 0.5)


def test_report_separates_configs(results, tmp_path):
    out = tmp_path / "deep"
    main(["run", "-c", "configs/discrete_standard.yaml", "-o", str(out), "--set", "standard.depth=4", *FAST])
    recs = [r for p in (*results, out / "results.json") for r in read_records(p)]
    rows = summarize(recs)
    assert sorted(r["runs"] for r in rows) == [1, 2]
    assert {r["group"] for r in rows} == {"standard.depth=2", "standard.depth=4"}


def test_report_errors(tmp_path, capsys):
    assert main(["report"]) == 2
    (tmp_path / "x.json").write_text("{not json")
    assert main(["report", str(tmp_path / "x.json")]) == 2


def test_table_output(results, capsys):
    assert main(["report", str(results[0])]) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert "fidelity_mean" in header and "tts_sem" in header
