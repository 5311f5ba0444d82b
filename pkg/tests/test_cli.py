import csv
import io
import json
import math
import os

import numpy as np
import pytest

from matchgate_bp.cli import main
from matchgate_bp.experiment import COLUMNS, ExperimentConfig, default_config, default_config_names, render, run_experiment
from matchgate_bp.operators import PauliSumOperator


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# generated ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_decompose_zero_state(capsys):
    code, out, _ = run(capsys, "decompose", "--state", "zero", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert report["purities"] == pytest.approx([0.25, 0, 0.5, 0, 0.25])
    assert report["S2"] == pytest.approx(0, abs=1e-12)
    assert report["fermionic"] is True


def test_decompose_magic_state(capsys):
    code, out, _ = run(capsys, "decompose", "--state", f"magic:{math.pi}", "--n", "4")
    report = json.loads(out)
    assert code == 0
    assert report["S2"] == pytest.approx(4.0)
    assert report["g_purity"] == pytest.approx(0.0, abs=1e-12)
    code, out, _ = run(capsys, "decompose", "--state", "magic:0", "--n", "4")
    assert json.loads(out)["g_purity"] == pytest.approx(4 / 16)


def test_decompose_operator_file(tmp_path, capsys):
    path = tmp_path / "op.json"
    PauliSumOperator.from_dense(np.diag([1.0, -1.0])).dump(path)
    code, out, _ = run(capsys, "decompose", "--operator", str(path))
    assert code == 0
    assert json.loads(out)["purities"] == pytest.approx([0, 0, 2])


def test_dla_matchgate(capsys):
    code, out, _ = run(capsys, "dla", "--matchgate", "3")
    report = json.loads(out)
    assert code == 0
    assert report["dla_dim"] == 15
    assert sorted(c["size"] for c in report["components"]) == sorted([1, 6, 15, 20, 15, 6, 1])
    assert report["linear_symmetries"] == ["III", "ZZZ"]


def test_dla_generator_file(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("X\n")
    code, out, _ = run(capsys, "dla", "--generators", str(path))
    report = json.loads(out)
    assert code == 0
    assert report["dla_dim"] == 1
    assert report["quadratic_count"] == 6


def test_dla_budget_is_a_config_error(capsys):
    code, _, err = run(capsys, "dla", "--matchgate", "3", "--max-dim", "4")
    assert code == 2
    assert err


def test_bad_generator_file_reports_line(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("XX\nXQ\n")
    code, _, err = run(capsys, "dla", "--generators", str(path))
    assert code == 2
    assert "line 2" in err


@pytest.mark.parametrize(
    "method,expected",
    [("exact", 1 / 7), ("parity", 1 / 7), ("oracle", 1 / 7), ("oracle:parity", 1 / 7)],
)
def test_variance_methods(capsys, method, expected):
    code, out, _ = run(capsys, "variance", "--n", "4", "--state", "zero", "--observable", "Z:1", "--method", method)
    assert code == 0
    assert json.loads(out)["variance"] == pytest.approx(expected, abs=1e-10)


def test_variance_corollary_and_mc(capsys):
    code, out, _ = run(capsys, "variance", "--n", "3", "--state", "zero", "--observable", "Z:1", "--method", "corollary", "--kappas", "2")
    assert code == 0
    assert json.loads(out)["variance"] == pytest.approx(0.2)
    code, out, _ = run(capsys, "variance", "--n", "2", "--state", "zero", "--observable", "Z:1", "--method", "mc", "--samples", "400")
    report = json.loads(out)
    assert code == 0
    assert report["method"] == "monte_carlo"
    assert report["stderr"] >= 0


def test_variance_config_file(tmp_path, capsys):
    path = tmp_path / "v.json"
    path.write_text(json.dumps({"n": 4, "state": "magic:0", "observable": "Z:1"}))
    code, out, _ = run(capsys, "variance", "--config", str(path))
    assert code == 0
    assert json.loads(out)["variance"] == pytest.approx(1 / 7)


def test_config_errors_exit_2(tmp_path, capsys):
    assert run(capsys, "variance", "--n", "2", "--state", "zero", "--observable", "Q:1")[0] == 2
    assert run(capsys, "variance", "--n", "2", "--state", "zero", "--observable", "Z:1", "--method", "nope")[0] == 2
    assert run(capsys, "experiment", "--config", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "gaussian", "n": [3], "colour": "red"}))
    assert run(capsys, "experiment", "--config", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "--experiment", "bogus"])
    assert exc.value.code == 2


def test_experiment_csv_schema(capsys):
    code, out, _ = run(capsys, "experiment", "--experiment", "gaussian", "--n", "3", "4", "--samples", "0")
    assert code == 0
    rows = parse_csv(out)
    assert list(rows[0]) == COLUMNS
    assert [(r["n"], r["param"]) for r in rows] == [("3", "1"), ("3", "2"), ("4", "1"), ("4", "2"), ("4", "3")]
    for r in rows:
        assert float(r["var_exact"]) == pytest.approx(float(r["var_closed"]), abs=1e-10)
        assert r["var_mc"] == ""
        assert r["layers"] == str(int(r["n"]) ** 2)


def test_experiment_rerun_is_identical(tmp_path, capsys):
    argv = ["experiment", "--experiment", "nonfermionic", "--n", "3", "--samples", "300", "--seed", "5"]
    first = run(capsys, *argv)[1].splitlines()
    second = run(capsys, *argv, "--workers", "3")[1].splitlines()
    assert first[0].startswith("# generated") and second[0].startswith("# generated")
    assert first[1:] == second[1:]
    rows = parse_csv("\n".join(first))
    assert len(rows) == 3
    assert all(float(r["stderr"]) >= 0 for r in rows)


def test_experiment_json_and_output_file(tmp_path, capsys):
    out_path = tmp_path / "rows.json"
    code, out, _ = run(
        capsys, "experiment", "--experiment", "magic", "--n", "4", "--samples", "0", "--format", "json", "--output", str(out_path)
    )
    assert code == 0 and out == ""
    data = json.loads(out_path.read_text())
    assert len(data["rows"]) == 5
    assert data["rows"][0]["var_mc"] is None
    for row in data["rows"]:
        assert row["var_exact"] == pytest.approx(row["var_closed"], abs=1e-10)


def test_experiment_custom_point(capsys):
    code, out, _ = run(
        capsys, "experiment", "--experiment", "custom", "--n", "3", "--state", "zero", "--observable", "Zm:2", "--samples", "0"
    )
    rows = parse_csv(out)
    assert code == 0
    assert rows[0]["var_closed"] == ""
    assert float(rows[0]["var_exact"]) == pytest.approx(0.2)


def test_exact_column_skipped_above_dense_limit(monkeypatch, capsys):
    monkeypatch.setenv("BP_DENSE_LIMIT", "3")
    code, out, err = run(capsys, "experiment", "--experiment", "gaussian", "--n", "4", "--grid", "1", "--samples", "0")
    rows = parse_csv(out)
    assert code == 0
    assert rows[0]["var_exact"] == ""
    assert float(rows[0]["var_closed"]) == pytest.approx(1 / 7)
    assert "dense limit" in err


def test_shipped_configs():
    assert default_config_names() == ["gaussian", "magic", "nonfermionic"]
    cfg = default_config("nonfermionic")
    assert cfg.layer_factor == 4
    assert cfg.points()[0] == (4, 1)
    assert default_config("gaussian").points()[:3] == [(4, 1), (4, 2), (4, 3)]
    assert len(default_config("magic").points()) == 10


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("magic", [6])
    with pytest.raises(ValueError):
        ExperimentConfig("gaussian", [3], samples=10)
    with pytest.raises(ValueError):
        ExperimentConfig("custom", [3])
    with pytest.raises(ValueError):
        ExperimentConfig("gaussian", [3], layer_factor=0)


def test_layer_factor_sets_depth():
    rows, _ = run_experiment(ExperimentConfig("gaussian", [3], grid=[1], samples=0, layer_factor=2))
    assert rows[0]["layers"] == 18


def test_render_fixed_timestamp():
    rows, _ = run_experiment(ExperimentConfig("gaussian", [2], samples=0))
    text = render(rows, "csv", timestamp="T")
    assert text.splitlines()[0] == "# generated T"
    assert text == render(rows, "csv", timestamp="T")


def test_selfcheck_passes(capsys):
    code, out, _ = run(capsys, "selfcheck", "--seed", "3")
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.skipif(not os.environ.get("BP_SHIPPED_SWEEPS"), reason="about 5 minutes; set BP_SHIPPED_SWEEPS=1")
@pytest.mark.parametrize("name", ["gaussian", "magic", "nonfermionic"])
def test_shipped_sweeps_agree_within_five_standard_errors(name):
    rows, notes = run_experiment(default_config(name))
    assert not notes
    for r in rows:
        assert abs(r["var_mc"] - r["var_closed"]) <= 5 * r["stderr"] + 1e-12, r
        assert r["var_exact"] == pytest.approx(r["var_closed"], abs=1e-10)
