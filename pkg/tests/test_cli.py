import json

import numpy as np
import pytest

from modules.cli.commands import Command, run
from modules.cli.config import builtin_config, load_config, parse_config
from modules.cli.problem import build_problem
from modules.utils.errors import ConfigError
from symsys import EXIT_CONFIG, EXIT_OK, main

SL_SYSTEM = {"kind": "sturm-liouville", "interval": [0.0, 1.0]}


def write_config(tmp_path, payload, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


# -----------------------------------------------------------------------------
# Config validation
# -----------------------------------------------------------------------------

@pytest.mark.parametrize("payload", [
    {},
    {"system": {}},
    {"system": {"builtin": "sl-dirichlet", "kind": "free"}},
    {"system": {"builtin": "no-such-system"}},
    {"system": SL_SYSTEM, "tau": {"kind": "constant", "C0": [[1, 0]], "C1": "x"}},
    {"system": SL_SYSTEM, "tau": {"kind": "polynomial", "A": [[0]]}},
    {"system": SL_SYSTEM, "lambda_grid": {"points": []}},
    {"system": SL_SYSTEM, "lambda_grid": {"points": [[0, 1]], "rectangle": {"re": [0, 1], "im": [1, 2]}}},
    {"system": {**SL_SYSTEM, "interval": [1.0, 0.0]}},
    {"system": SL_SYSTEM, "options": {"workers": 0}},
    {"system": SL_SYSTEM, "unexpected": 1},
])
def test_bad_configs_raise_config_error(payload):
    with pytest.raises(ConfigError):
        parse_config(payload)


def test_rectangle_grid_order():
    cfg = parse_config({"system": SL_SYSTEM,
                        "lambda_grid": {"rectangle": {"re": [0, 1], "im": [1, 2], "n_re": 2, "n_im": 2}}})
    assert cfg.lams() == [1j, 1 + 1j, 2j, 1 + 2j]


def test_builtin_defaults_and_explicit_overrides():
    cfg = builtin_config("sl-dirichlet")
    assert cfg.lams() == [1j, 2j, 1 + 1j]
    assert cfg.system.mesh_size() == 801
    explicit = parse_config({"system": {"builtin": "sl-dirichlet", "mesh_points": 101},
                             "lambda_grid": {"points": [[0, 3]]}})
    assert explicit.lams() == [3j]
    assert explicit.system.mesh_size() == 101


def test_inadmissible_tau_is_a_config_error():
    cfg = parse_config({"system": SL_SYSTEM,
                        "tau": {"kind": "constant", "C0": [[1, 0], [0, 1]], "C1": [[[0, 1], 0], [0, [0, 1]]]}})
    with pytest.raises(ConfigError, match="Im"):
        build_problem(cfg)


def test_tau_must_fit_the_system():
    cfg = parse_config({"system": {"builtin": "free-3x3"},
                        "tau": {"kind": "constant", "C0": [[1, 0], [0, 1]], "C1": [[0, 0], [0, 0]]}})
    with pytest.raises(ConfigError):
        build_problem(cfg)


def test_load_config_reports_unreadable_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)


# -----------------------------------------------------------------------------
# Driver exit codes
# -----------------------------------------------------------------------------

def test_main_without_arguments_prints_help(capsys):
    assert main([]) == EXIT_CONFIG
    assert "--mode" in capsys.readouterr().out


def test_main_lists_builtins(capsys):
    assert main(["--list-builtins"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sl-dirichlet" in out
    assert "free-3x3" in out


def test_main_config_errors(tmp_path):
    bad_tau = write_config(tmp_path, {"system": SL_SYSTEM,
                                      "tau": {"kind": "pair", "C0": [[1, 0], [0, 1]], "C1": [[0, 0], [0, 0]],
                                              "extra": True}})
    out = str(tmp_path / "out")
    assert main(["--mode", "charmat", "--config", str(bad_tau), "--out", out]) == EXIT_CONFIG
    assert main(["--mode", "charmat"]) == EXIT_CONFIG
    assert main(["--mode", "charmat", "--builtin", "sl-dirichlet", "--tol-override", "nope=1",
                 "--out", out]) == EXIT_CONFIG
    no_tau = write_config(tmp_path, {"system": SL_SYSTEM}, "no_tau.json")
    assert main(["--mode", "eig", "--config", str(no_tau), "--out", out]) == EXIT_CONFIG


def test_main_rejects_bad_worker_counts():
    with pytest.raises(SystemExit):
        main(["--mode", "weyl", "--builtin", "sl-dirichlet", "--workers", "0"])


# -----------------------------------------------------------------------------
# Commands and artifacts
# -----------------------------------------------------------------------------

def test_charmat_of_multivalued_parameter_is_omega0(tmp_path):
    assert main(["--mode", "CharMat", "--builtin", "sl-neumann-dirichlet", "--out", str(tmp_path)]) == EXIT_OK
    payload = json.loads((tmp_path / "sl-neumann-dirichlet_charmat.json").read_text(encoding="utf-8"))
    assert payload["max_route_spread"] <= 1e-7
    for point in payload["points"]:
        lam = complex(*point["lam"])
        s = np.sqrt(lam)
        expected = np.array([[np.tan(s) / s, -0.5], [-0.5, 0.0]])
        for value in point["Omega"].values():
            got = np.array([[complex(*v) for v in row] for row in value])
            np.testing.assert_allclose(got, expected, atol=1e-8)


def test_csv_artifacts_carry_a_column_header(tmp_path):
    result = run(Command.weyl, builtin_config("sl-dirichlet"), out=tmp_path)
    assert result.passed
    (path,) = result.artifacts
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# columns: lam_re, lam_im, boundary_cond")
    assert lines[1].split(",")[-1] == "M_im_2_2"
    assert len(lines) == 2 + 3


def test_artifacts_do_not_depend_on_worker_count(tmp_path):
    cfg = parse_config({"name": "grid", "system": {"builtin": "sl-dirichlet", "mesh_points": 401},
                        "lambda_grid": {"rectangle": {"re": [-2, 2], "im": [0.5, 2], "n_re": 3, "n_im": 2}}})
    one = run(Command.charmat, cfg, out=tmp_path / "one", workers=1)
    two = run(Command.charmat, cfg, out=tmp_path / "two", workers=2)
    for first, second in zip(one.artifacts, two.artifacts):
        assert first.name == second.name
        assert first.read_bytes() == second.read_bytes()


def test_resolve_command(tmp_path):
    cfg = parse_config({"name": "res", "system": {"builtin": "sl-dirichlet"},
                        "lambda_grid": {"points": [[0, 1], [2, 1]]}, "rhs": {"kind": "random", "count": 2}})
    result = run(Command.resolve, cfg, out=tmp_path, seed=3)
    assert result.passed
    csv_path, json_path = result.artifacts
    rows = csv_path.read_text(encoding="utf-8").splitlines()[2:]
    assert len(rows) == 2 * 2 * 801
    summary = json.loads(json_path.read_text(encoding="utf-8"))
    assert summary["max_route_distance"] <= 1e-6
    assert {(r["rhs"], tuple(r["lam"])) for r in summary["results"]} == {
        (k, (x, 1.0)) for k in (0, 1) for x in (0.0, 2.0)}


@pytest.mark.slow
def test_eig_command_writes_eigenvalues(tmp_path):
    result = run("eig", builtin_config("sl-dirichlet"), out=tmp_path)
    assert result.passed
    payload = json.loads(result.artifacts[0].read_text(encoding="utf-8"))
    np.testing.assert_allclose(payload["eigenvalues"], [(n * np.pi) ** 2 for n in range(1, 6)], rtol=1e-8)
    assert len(payload["brackets"]) == 5


@pytest.mark.slow
def test_verify_passes_on_dirichlet_problem(tmp_path):
    result = run(Command.verify, builtin_config("sl-dirichlet"), out=tmp_path, workers=2)
    assert result.passed, result.summary["failed"]
    assert result.summary["checks"] >= 12
    report = json.loads(result.artifacts[0].read_text(encoding="utf-8"))
    assert {c["status"] for c in report["checks"]} <= {"pass", "skip", "recorded"}
