import json
import logging
from pathlib import Path

import numpy as np
import pytest

from modules.utils.atomic_io import atomic_write_text
from modules.utils.complex_json import decode_matrix, decode_scalar, encode_matrix
from modules.utils.errors import (
    ConfigError,
    IllConditionedError,
    SpectralCollisionError,
    SymSysError,
)
from modules.utils.linalg import condition_number, guarded_solve, imag_part, min_eigenvalue
from modules.utils.log_utils import bind, format_tree, get_logger
from modules.utils.paths import ProjectLayoutError, project_root_from_src, resolve_output_paths
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances


# -----------------------------------------------------------------------------
# Tolerances
# -----------------------------------------------------------------------------

def test_tolerance_override_replaces_one_key():
    tol = DEFAULT_TOLERANCES.with_overrides(["eig=1e-12", " cond = 1e-8"])
    assert tol.eig == 1e-12
    assert tol.cond == 1e-8
    assert tol.route == DEFAULT_TOLERANCES.route


@pytest.mark.parametrize("item", ["nope=1", "eig", "eig=abc", "eig=-1"])
def test_tolerance_override_rejects_bad_items(item):
    with pytest.raises(ConfigError):
        DEFAULT_TOLERANCES.with_overrides([item])


def test_tolerances_must_be_positive():
    with pytest.raises(ConfigError):
        Tolerances(route=0.0)


def test_errors_carry_provenance():
    assert ConfigError("x").provenance == "cli"
    assert SymSysError("x", provenance="ode").provenance == "ode"
    err = SpectralCollisionError("x", cond=1e20, label="boundary")
    assert isinstance(err, IllConditionedError)
    assert err.cond == 1e20


# -----------------------------------------------------------------------------
# Linear algebra
# -----------------------------------------------------------------------------

def test_guarded_solve_solves_well_conditioned_systems():
    a = np.array([[2.0, 1.0], [1.0, 3.0]], dtype=complex)
    b = np.array([1.0, 2.0], dtype=complex)
    x = guarded_solve(a, b, label="t", eps_cond=1e-12)
    np.testing.assert_allclose(a @ x, b, atol=1e-14)


def test_guarded_solve_refuses_singular_matrices():
    a = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
    with pytest.raises(IllConditionedError) as info:
        guarded_solve(a, np.ones(2), label="near-singular", eps_cond=1e-12)
    assert not isinstance(info.value, SpectralCollisionError)
    assert info.value.label == "near-singular"
    with pytest.raises(SpectralCollisionError):
        guarded_solve(a, np.ones(2), label="boundary", eps_cond=1e-12, spectral=True)


def test_condition_number_relative_to_scale():
    a = np.array([[1e-6]])
    assert condition_number(a) == pytest.approx(1.0)
    assert condition_number(a, scale=1.0) == pytest.approx(1e6)
    assert condition_number(np.zeros((2, 2)), scale=1.0) == float("inf")


def test_imag_part_and_min_eigenvalue():
    a = np.array([[1 + 2j, 0], [0, -1j]])
    np.testing.assert_allclose(imag_part(a), np.diag([2, -1]))
    assert min_eigenvalue(imag_part(a)) == pytest.approx(-1.0)


# -----------------------------------------------------------------------------
# Complex JSON
# -----------------------------------------------------------------------------

def test_complex_json_decoding():
    assert decode_scalar([1, -2]) == 1 - 2j
    assert decode_scalar(3) == 3 + 0j
    m = decode_matrix([[1, [0, 1]], [[2, 0], 0]])
    np.testing.assert_array_equal(m, np.array([[1, 1j], [2, 0]]))
    assert encode_matrix(np.array([[1j]])) == [[[0.0, 1.0]]]


@pytest.mark.parametrize("bad", [[[1, 2], [3]], [1, 2], [[[1, 2, 3]]], "x"])
def test_complex_json_rejects_malformed_matrices(bad):
    with pytest.raises(ValueError):
        decode_matrix(bad)


# -----------------------------------------------------------------------------
# Files and paths
# -----------------------------------------------------------------------------

def test_atomic_write_replaces_and_leaves_no_temp_files(tmp_path):
    target = tmp_path / "sub" / "out.json"
    atomic_write_text(target, json.dumps({"a": 1}))
    atomic_write_text(target, "second\n")
    assert target.read_text() == "second\n"
    assert [p.name for p in target.parent.iterdir()] == ["out.json"]


def test_output_paths_resolution(tmp_path, monkeypatch):
    start = tmp_path / "proj" / "src" / "modules" / "x.py"
    monkeypatch.delenv("SYMSYS_OUTPUT_DIR", raising=False)
    paths = resolve_output_paths(command="eig", start=start)
    assert paths.command_dir == (tmp_path / "proj" / "output" / "eig").resolve()
    assert paths.command_dir.is_dir()

    monkeypatch.setenv("SYMSYS_OUTPUT_DIR", str(tmp_path / "env"))
    paths = resolve_output_paths(command="eig", start=start)
    assert paths.command_dir == (tmp_path / "env" / "eig").resolve()

    explicit = resolve_output_paths(command="eig", start=start, explicit=tmp_path / "here")
    assert explicit.command_dir == (tmp_path / "here").resolve()


def test_project_root_requires_src(tmp_path):
    assert project_root_from_src(tmp_path / "p" / "src" / "a.py") == (tmp_path / "p").resolve()
    with pytest.raises(ProjectLayoutError):
        project_root_from_src(Path("/nowhere/at/all"))


# -----------------------------------------------------------------------------
# Logging
# -----------------------------------------------------------------------------

def test_loggers_live_under_the_project_namespace():
    assert get_logger("modules.ode.fundamental").name == "symsys.ode.fundamental"
    assert get_logger("__main__").name == "symsys"


def test_bound_context_reaches_the_record(caplog):
    caplog.set_level(logging.INFO)
    log = bind(get_logger("tests.context", route="bvp"), lam=2j)
    log.info("solved")
    record = caplog.records[-1]
    assert record.name == "symsys.tests.context"
    assert (record.route, record.lam) == ("bvp", 2j)


def test_format_tree_summarizes_checks_and_arrays():
    text = format_tree({
        "routes": {"kind": "check", "name": "routes", "passed": False, "value": 1e-5, "tolerance": 1e-7},
        "omega": np.zeros((2, 2)),
    })
    assert text.splitlines() == [
        "routes:",
        "  ❌ routes value=1e-05 tol=1e-07",
        "omega: ndarray shape=(2, 2) dtype=float64 max|.|=0.000e+00",
    ]
