import orjson
import pytest

import ldpbayes.bench.experiments as experiments
from ldpbayes import main
from ldpbayes.app import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK
from ldpbayes.bench import read_table

TINY = """
    experiment:
      repeats: 2
      seed: 5
      masses: [0.5, 0.9]
    privacy:
      epsilon: [2.0]
    data:
      n: [200]
    model:
      kind: multinomial
      d: 3
    sampler:
      chains: 2
      draws: 600
"""


def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_OK


def test_unknown_subcommand():
    assert main(["fit-everything"]) == EXIT_CONFIG


def test_calibrate_gaussian_writes_mechanism(tmp_path):
    out = tmp_path / "mech.json"
    code = main(["calibrate-mech", "-m", "gaussian", "--epsilon", "1.0", "--delta", "1e-5", "--out", str(out)])
    assert code == EXIT_OK
    assert orjson.loads(out.read_bytes())["kind"] == "gaussian"


def test_calibrate_rejects_bad_budget():
    assert main(["calibrate-mech", "-m", "gaussian", "--epsilon", "1.0", "--delta", "0"]) == EXIT_CONFIG
    assert main(["calibrate-mech", "-m", "laplace", "--epsilon", "abc"]) == EXIT_CONFIG


def test_collect_then_infer(tmp_path):
    run = tmp_path / "run.csv"
    args = ["collect", "--model", "multinomial", "--epsilon", "2", "--n", "300", "--seed", "1", "--out", str(run)]
    assert main(args) == EXIT_OK
    out = tmp_path / "posterior"
    code = main(["infer", "--model", "multinomial", "--run", str(run), "--chains", "2", "--draws", "600", "--out", str(out)])
    assert code == EXIT_OK
    summary = orjson.loads((out / "summary.json").read_bytes())
    assert set(summary["parameters"]) == {"theta[0]", "theta[1]", "theta[2]"}


def test_malformed_config_exits_with_config_code(write_yaml):
    path = write_yaml("privacy:\n  epsilon: 1.0\n  colour: red\n")
    assert main(["coverage", "--config", str(path)]) == EXIT_CONFIG


def test_coverage_writes_table(tmp_path, write_yaml):
    path = write_yaml(TINY)
    out = tmp_path / "results"
    assert main(["coverage", "--config", str(path), "--out", str(out)]) == EXIT_OK
    header, rows = read_table(out / "coverage.csv")
    assert list(rows[0]) == ["epsilon", "mass", "coverage", "repeats"]
    assert header["config"]["seed"] == 5
    assert (out / "coverage_parameters.csv").exists()


@pytest.fixture
def reject_every_run(monkeypatch):
    monkeypatch.setattr(experiments, "RHAT_LIMIT", 0.0)


@pytest.mark.usefixtures("reject_every_run")
def test_rejected_runs_exit_with_failure_code(tmp_path, write_yaml):
    path = write_yaml(TINY)
    assert main(["coverage", "--config", str(path), "--out", str(tmp_path)]) == EXIT_FAILURE
