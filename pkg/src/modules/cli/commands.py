"""Batch commands: weyl, charmat, resolve, eig, verify.

Each command builds the problem once, sweeps the λ-grid through
``worker_map`` (results come back in grid order whatever the worker count),
writes its artifacts and reports whether every check it owns passed.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from modules.charmat.characteristic import omega_tau_at
from modules.charmat.grid import characteristic_matrix
from modules.cli.config import ProblemConfig
from modules.cli.emit import matrix_cells, matrix_columns, write_csv, write_json
from modules.cli.problem import Problem, build_problem, worker_map
from modules.cli.verify import run_verification
from modules.resolvent.eig_scan import eig_scan
from modules.resolvent.routes import resolve_bvp, resolve_kernel, resolve_krein, route_distance
from modules.triplet.weyl import nevanlinna_report
from modules.utils.log_utils import get_logger
from modules.utils.paths import resolve_output_paths

logger = get_logger(__name__)


class Command(str, Enum):
    weyl = "weyl"
    charmat = "charmat"
    resolve = "resolve"
    eig = "eig"
    verify = "verify"

    @classmethod
    def help_text(cls) -> str:
        return ", ".join(c.value for c in cls)


@dataclass(frozen=True, slots=True)
class RunResult:
    command: Command
    passed: bool
    artifacts: tuple[Path, ...]
    summary: dict[str, Any] = field(default_factory=dict)


def _lam_cells(lam: complex) -> list[float]:
    return [float(lam.real), float(lam.imag)]


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------

def _weyl(p: Problem, out: Path, workers: int) -> RunResult:
    def row(lam: complex) -> tuple[list[Any], bool]:
        data = p.wf.data(lam)
        nev = nevanlinna_report(data.M, p.wf(np.conj(lam)), lam) if lam.imag != 0 else None
        ok = data.condition_residual <= p.tol.weyl and (nev is None or nev.passed(p.tol.weyl, p.tol.ineq))
        sym = nev.symmetry_defect if nev else float("nan")
        return [*_lam_cells(lam), data.boundary_cond, data.condition_residual, sym, *matrix_cells(data.M)], ok

    with worker_map(workers) as mapper:
        results = list(mapper(row, p.lams))
    n = p.system.decomposition.dim_h0 + p.system.decomposition.dim_h
    cols = ["lam_re", "lam_im", "boundary_cond", "defining_residual", "symmetry_defect", *matrix_columns("M", (n, n))]
    path = write_csv(out / f"{p.config.name}_weyl.csv", cols, [r for r, _ in results])
    passed = all(ok for _, ok in results)
    return RunResult(Command.weyl, passed, (path,), {"points": len(results)})


def _charmat(p: Problem, out: Path, workers: int) -> RunResult:
    tau = p.require_tau()
    with worker_map(workers) as mapper:
        cm = characteristic_matrix(tau, p.wf, p.lams, p.tol, mapper=mapper)
    n = p.system.dim
    rows = [[*_lam_cells(pt.lam), route.value, *matrix_cells(value)]
            for pt in cm.points for route, value in pt.values.items()]
    csv_path = write_csv(out / f"{p.config.name}_charmat.csv",
                         ["lam_re", "lam_im", "route", *matrix_columns("Omega", (n, n))], rows)
    spread = cm.max_route_spread()
    payload = {
        "tau": cm.tau_label,
        "points": [{"lam": pt.lam, "route_spread": pt.route_spread(), "display_residual": pt.display_residual,
                    "skipped": pt.skipped, "Omega": {r: v for r, v in pt.values.items()}} for pt in cm.points],
        "max_route_spread": spread,
        "tolerances": p.tol.as_dict(),
    }
    json_path = write_json(out / f"{p.config.name}_charmat.json", payload)
    return RunResult(Command.charmat, spread <= p.tol.route, (csv_path, json_path), {"max_route_spread": spread})


def _resolve(p: Problem, out: Path, workers: int) -> RunResult:
    tau = p.require_tau()
    fs = p.config.rhs.functions(p.space, p.rng(3))

    def at(lam: complex) -> list[dict[str, Any]]:
        omega = omega_tau_at(tau, p.wf, lam, p.tol)
        out_rows = []
        for k, f in enumerate(fs):
            base = resolve_bvp(tau, p.solver, lam, f)
            kernel = resolve_kernel(omega, p.solver, lam, f, tau)
            krein = resolve_krein(tau, p.wf, lam, f)
            out_rows.append({
                "lam": lam, "rhs": k, "y": base.y.values,
                "bc_residual": base.bc_residual, "ode_residual": base.ode_residual,
                "kernel_distance": route_distance(p.space, base, kernel),
                "krein_distance": route_distance(p.space, base, krein),
            })
        return out_rows

    with worker_map(workers) as mapper:
        per_lam = list(mapper(at, p.lams))

    n = p.system.dim
    cols = ["lam_index", "rhs_index", "t"] + [f"y_{part}_{i + 1}" for i in range(n) for part in ("re", "im")]
    rows = []
    for li, entries in enumerate(per_lam):
        for e in entries:
            for t, y in zip(p.space.grid, e["y"]):
                rows.append([li, e["rhs"], float(t), *matrix_cells(y)])
    csv_path = write_csv(out / f"{p.config.name}_resolve.csv", cols, rows)

    summary = [{k: v for k, v in e.items() if k != "y"} for entries in per_lam for e in entries]
    worst = max((max(e["kernel_distance"], e["krein_distance"]) for e in summary), default=0.0)
    passed = worst <= p.tol.res and all(e["ode_residual"] <= p.tol.bvp for e in summary)
    json_path = write_json(out / f"{p.config.name}_resolve.json",
                           {"tau": tau.label, "results": summary, "max_route_distance": worst,
                            "tolerances": p.tol.as_dict()})
    return RunResult(Command.resolve, passed, (csv_path, json_path), {"max_route_distance": worst})


def _eig(p: Problem, out: Path, workers: int) -> RunResult:
    tau = p.require_tau()
    opts = p.config.options
    brackets = eig_scan(tau, p.solver, opts.eig_interval, opts.eig_grid)
    passed = all(b.imag_defect <= p.tol.det_imag for b in brackets)
    path = write_json(out / f"{p.config.name}_eig.json", {
        "tau": tau.label,
        "interval": list(opts.eig_interval),
        "n_grid": opts.eig_grid,
        "eigenvalues": [b.value for b in brackets],
        "brackets": brackets,
        "tolerances": p.tol.as_dict(),
    })
    return RunResult(Command.eig, passed, (path,), {"eigenvalues": [b.value for b in brackets]})


def _verify(p: Problem, out: Path, workers: int) -> RunResult:
    with worker_map(workers) as mapper:
        report = run_verification(p, mapper)
    path = write_json(out / f"{p.config.name}_verify.json", report)
    return RunResult(Command.verify, report.passed, (path,),
                     {"checks": len(report.checks), "failed": [c.name for c in report.failures()]})


_DISPATCH = {
    Command.weyl: _weyl,
    Command.charmat: _charmat,
    Command.resolve: _resolve,
    Command.eig: _eig,
    Command.verify: _verify,
}


def run(command: Command | str, config: ProblemConfig, *, out: Path | None = None, workers: int | None = None,
        seed: int | None = None, tol_overrides: Sequence[str] = ()) -> RunResult:
    """Run one command on a validated config and write its artifacts.

    Raises:
        ConfigError: For configuration problems (CLI exit code 2).
        SymSysError: For numerical failures (CLI exit code 1).
    """
    cmd = Command(command)
    problem = build_problem(config, tol_overrides=tol_overrides, seed=seed)
    paths = resolve_output_paths(command=cmd.value, start=Path(__file__), explicit=out)
    result = _DISPATCH[cmd](problem, paths.command_dir, workers or config.options.workers)
    marker = "✅" if result.passed else "❌"
    logger.info("%s %s finished: %s", marker, cmd.value, result.summary)
    return result
