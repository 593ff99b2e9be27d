"""The verification suite: every numerical invariant as a named check.

Key behaviors:
- A check returns a ``CheckResult`` (value, threshold, status). Checks that
  do not apply to the problem (e.g. identities claimed only for self-adjoint
  τ) are ``skip``; expectations recorded without a pass/fail claim are
  ``recorded``. Neither fails the report.
- A toolkit error inside a check fails that check with the error's
  provenance; the remaining checks still run.
- λ-sweeps inside a check go through ``mapper`` (an executor's ``map``);
  reductions happen afterwards in grid order.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
import logging

import numpy as np

from modules.charmat.characteristic import omega_tau_at
from modules.charmat.grid import OmegaRoute, omega_routes
from modules.charmat.synthetic import random_model_weyl_data, synthetic_identity_residual
from modules.charmat.z_tau import imag_bound_check, selfadjoint_identity_residual
from modules.cli.problem import Mapper, Problem
from modules.ode.fundamental import solver_symplectic_residual
from modules.parameters.interface_pair import check_admissibility
from modules.resolvent.green import green_kernel, kernel_symmetry_residual
from modules.resolvent.routes import (
    adjoint_residual,
    bvp_resolver,
    resolve_bvp,
    resolve_kernel,
    resolve_krein,
    resolvent_identity_residual,
    route_distance,
)
from modules.systems.definiteness import check_definiteness
from modules.systems.symmetric_system import validate
from modules.triplet.boundary_maps import green_identity_residual, lagrange_residual, random_tmax_pair
from modules.triplet.weyl import nevanlinna_report, weyl_identity_residual
from modules.utils.errors import SymSysError
from modules.utils.linalg import spectral_norm
from modules.utils.log_utils import bind, get_logger, log_tree

logger = get_logger(__name__)


class CheckStatus(str, Enum):
    passed = "pass"
    failed = "fail"
    skipped = "skip"
    recorded = "recorded"


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    status: CheckStatus
    value: float | None = None
    threshold: float | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status is not CheckStatus.failed


@dataclass(frozen=True, slots=True)
class VerificationReport:
    problem: str
    system: str
    tau: str
    checks: tuple[CheckResult, ...]
    tolerances: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def _upper(value: float, threshold: float, name: str, detail: str = "") -> CheckResult:
    status = CheckStatus.passed if value <= threshold else CheckStatus.failed
    return CheckResult(name, status, float(value), float(threshold), detail)


def _lower(value: float, threshold: float, name: str, detail: str = "") -> CheckResult:
    status = CheckStatus.passed if value >= threshold else CheckStatus.failed
    return CheckResult(name, status, float(value), float(threshold), detail)


def _skip(name: str, why: str) -> CheckResult:
    return CheckResult(name, CheckStatus.skipped, detail=why)


# -----------------------------------------------------------------------------
# Individual checks
# -----------------------------------------------------------------------------

def _nonreal(p: Problem) -> list[complex]:
    lams = [lam for lam in p.lams if lam.imag != 0.0]
    return lams or [1j, 2j]


def _pair(p: Problem) -> tuple[complex, complex]:
    lams = _nonreal(p)
    return (lams[0], lams[1]) if len(lams) > 1 else (lams[0], 2 * lams[0])


def check_coefficients(p: Problem, mapper: Mapper) -> CheckResult:
    rep = validate(p.system, tol=p.tol)
    return CheckResult("system.coefficients", CheckStatus.passed if rep.passed else CheckStatus.failed,
                       max(rep.herm_defect, -min(rep.min_delta_eig, 0.0), rep.j_defect), p.tol.herm,
                       "; ".join(rep.failures))


def check_definiteness_(p: Problem, mapper: Mapper) -> CheckResult:
    res = check_definiteness(p.solver)
    ratio = res.min_eig / res.max_eig if res.max_eig > 0 else 0.0
    return _lower(ratio, p.tol.def_rel, "system.definiteness", "min/max Gram eigenvalue")


def check_symplectic(p: Problem, mapper: Mapper) -> CheckResult:
    vals = list(mapper(lambda lam: solver_symplectic_residual(p.solver, lam), _nonreal(p)))
    return _upper(max(vals), p.tol.symp, "ode.symplectic")


def check_defining(p: Problem, mapper: Mapper) -> CheckResult:
    vals = list(mapper(lambda lam: p.wf.data(lam).condition_residual, _nonreal(p)))
    return _upper(max(vals), p.tol.weyl, "triplet.defining_conditions")


def check_weyl_identity(p: Problem, mapper: Mapper) -> CheckResult:
    lams = _nonreal(p)[:3]
    vals = list(mapper(lambda lm: weyl_identity_residual(p.wf, *lm), list(product(lams, lams))))
    return _upper(max(vals), p.tol.weyl_identity, "triplet.weyl_identity", f"{len(vals)} (λ, μ) pairs")


def check_weyl_nevanlinna(p: Problem, mapper: Mapper) -> CheckResult:
    reps = list(mapper(lambda lam: nevanlinna_report(p.wf(lam), p.wf(np.conj(lam)), lam), _nonreal(p)))
    sym = max(r.symmetry_defect for r in reps)
    lo = min(r.min_imag_eig for r in reps)
    ok = all(r.passed(p.tol.weyl, p.tol.ineq) for r in reps)
    return CheckResult("triplet.weyl_nevanlinna", CheckStatus.passed if ok else CheckStatus.failed,
                       sym, p.tol.weyl, f"min eig of Im M/Im λ: {lo:.3e}")


def _tmax_pairs(p: Problem):
    rng = p.rng(1)
    n = p.config.options.random_pairs
    return [(random_tmax_pair(p.solver, rng), random_tmax_pair(p.solver, rng)) for _ in range(n)]


def check_lagrange(p: Problem, mapper: Mapper) -> CheckResult:
    vals = [lagrange_residual(p.space, a, b) for a, b in _tmax_pairs(p)]
    return _upper(max(vals), p.tol.green_identity, "triplet.lagrange_identity", f"{len(vals)} seeded pairs")


def check_green_identity(p: Problem, mapper: Mapper) -> CheckResult:
    vals = [green_identity_residual(p.space, p.wf.bmap, a, b, p.tol) for a, b in _tmax_pairs(p)]
    return _upper(max(vals), p.tol.green_identity, "triplet.green_identity", f"{len(vals)} seeded pairs")


def check_admissibility_(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    rep = check_admissibility(tau, p.system.decomposition, _nonreal(p), p.tol)
    worst = min(s.sign_min_eig for s in rep.samples)
    return CheckResult("parameters.admissibility", CheckStatus.passed if rep.passed else CheckStatus.failed,
                       worst, -p.tol.adm, "; ".join(rep.failures()))


def _points(p: Problem, mapper: Mapper):
    tau = p.require_tau()
    return list(mapper(lambda lam: omega_routes(tau, p.wf, lam, p.tol), _nonreal(p)))


def check_omega_routes(p: Problem, mapper: Mapper) -> CheckResult:
    pts = _points(p, mapper)
    return _upper(max(pt.route_spread() for pt in pts), p.tol.route, "charmat.route_agreement",
                  ", ".join(sorted({r.value for pt in pts for r in pt.values})))


def check_z_boundary(p: Problem, mapper: Mapper) -> CheckResult:
    pts = _points(p, mapper)
    vals = [spectral_norm(pt.values[OmegaRoute.correction] - pt.values[OmegaRoute.z_boundary]) for pt in pts]
    return _upper(max(vals), p.tol.omega_sym, "charmat.z_boundary")


def check_display(p: Problem, mapper: Mapper) -> CheckResult:
    vals = [pt.display_residual for pt in _points(p, mapper) if pt.display_residual is not None]
    if not vals:
        return _skip("charmat.omega_tilde_display", "no λ where Ω̃ is assembled")
    return _upper(max(vals), p.tol.display, "charmat.omega_tilde_display")


def check_omega_nevanlinna(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()

    def defect(lam: complex) -> float:
        return nevanlinna_report(omega_tau_at(tau, p.wf, lam, p.tol),
                                 omega_tau_at(tau, p.wf, np.conj(lam), p.tol), lam).symmetry_defect

    return _upper(max(mapper(defect, _nonreal(p))), p.tol.omega_sym, "charmat.omega_nevanlinna")


def check_imag_bound(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    bounds = list(mapper(lambda lam: imag_bound_check(tau, p.wf, lam), _nonreal(p)))
    lo = min(b.min_eig for b in bounds)
    if tau.is_self_adjoint:
        gap = max(b.gap_norm for b in bounds)
        return _upper(gap, p.tol.ineq_equal, "charmat.imag_bound", f"equality case, min eig {lo:.3e}")
    return _lower(lo, -p.tol.ineq, "charmat.imag_bound")


def check_selfadjoint_identity(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    if not tau.is_self_adjoint:
        return _skip("charmat.selfadjoint_identity", "τ is not self-adjoint")
    lams = _nonreal(p)[:2]
    vals = list(mapper(lambda lm: selfadjoint_identity_residual(tau, p.wf, *lm), list(product(lams, lams))))
    return _upper(max(vals), p.tol.ineq_equal, "charmat.selfadjoint_identity")


def check_synthetic_identity(p: Problem, mapper: Mapper) -> CheckResult:
    dec = p.system.decomposition
    syn = random_model_weyl_data(p.rng(2), dec.dim_h, dec.dim_hhat, dec.dim_h, dec.dim_h + 1)
    lams = _nonreal(p)[:3]
    vals = [synthetic_identity_residual(syn, lam, mu) for lam, mu in product(lams, lams)]
    return _upper(max(vals), p.tol.weyl_identity, "charmat.synthetic_identity", "h̃_b = h_b + 1")


def check_green_symmetry(p: Problem, mapper: Mapper) -> CheckResult:
    lam = _nonreal(p)[0]
    g, g_conj = green_kernel(p.wf, lam), green_kernel(p.wf, np.conj(lam))
    idx = np.linspace(0, len(p.space.mesh) - 1, 10).astype(int).tolist()
    return _upper(kernel_symmetry_residual(g, g_conj, idx), p.tol.green, "resolvent.green_symmetry")


def _rhs(p: Problem):
    return p.config.rhs.functions(p.space, p.rng(3))


def check_resolvent_routes(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    fs = _rhs(p)

    def spread(lam: complex) -> float:
        omega = omega_tau_at(tau, p.wf, lam, p.tol)
        worst = 0.0
        for f in fs:
            base = resolve_bvp(tau, p.solver, lam, f)
            others = (resolve_kernel(omega, p.solver, lam, f, tau), resolve_krein(tau, p.wf, lam, f))
            worst = max([worst, *(route_distance(p.space, base, o) for o in others)])
        return worst

    return _upper(max(mapper(spread, _nonreal(p))), p.tol.res, "resolvent.route_agreement",
                  f"bvp vs kernel vs krein on {len(fs)} right-hand side(s)")


def check_resolvent_adjoint(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    if not tau.is_self_adjoint:
        return _skip("resolvent.adjoint", "τ is not self-adjoint")
    rng = p.rng(4)
    f, g = p.config.rhs.model_copy(update={"kind": "random", "count": 2}).functions(p.space, rng)
    resolve = bvp_resolver(tau, p.solver)
    vals = list(mapper(lambda lam: adjoint_residual(p.space, resolve, lam, f, g), _nonreal(p)))
    return _upper(max(vals), p.tol.route, "resolvent.adjoint")


def check_canonical_identity(p: Problem, mapper: Mapper) -> CheckResult:
    tau = p.require_tau()
    lam, mu = _pair(p)
    f = p.config.rhs.model_copy(update={"kind": "random", "count": 1}).functions(p.space, p.rng(5))[0]
    value = resolvent_identity_residual(p.space, bvp_resolver(tau, p.solver), lam, mu, f)
    if tau.is_self_adjoint:
        return _upper(value, p.tol.res, "resolvent.canonical_identity")
    return CheckResult("resolvent.canonical_identity", CheckStatus.recorded, value, p.tol.res,
                       "generalized resolvent: the identity is not expected to hold")


CHECKS: tuple[Callable[[Problem, Mapper], CheckResult], ...] = (
    check_coefficients,
    check_definiteness_,
    check_symplectic,
    check_defining,
    check_weyl_identity,
    check_weyl_nevanlinna,
    check_lagrange,
    check_green_identity,
    check_admissibility_,
    check_omega_routes,
    check_z_boundary,
    check_display,
    check_omega_nevanlinna,
    check_imag_bound,
    check_selfadjoint_identity,
    check_synthetic_identity,
    check_green_symmetry,
    check_resolvent_routes,
    check_resolvent_adjoint,
    check_canonical_identity,
)


def _run_one(check: Callable[[Problem, Mapper], CheckResult], p: Problem, mapper: Mapper) -> CheckResult:
    name = check.__name__.removeprefix("check_").rstrip("_")
    log = bind(logger, check=name)
    try:
        result = check(p, mapper)
    except SymSysError as exc:
        log.error("❌ raised %s (%s)", type(exc).__name__, exc.provenance)
        return CheckResult(name, CheckStatus.failed, detail=f"{exc.provenance}: {exc}")
    marker = "✅" if result.ok else "⚠️"
    log.info("%s %s", marker, result.status.value)
    return result


def run_verification(p: Problem, mapper: Mapper = map) -> VerificationReport:
    checks = tuple(_run_one(check, p, mapper) for check in CHECKS)
    report = VerificationReport(p.config.name, p.system.name, p.tau.label if p.tau else "-",
                                checks, p.tol.as_dict())
    log_tree(logger, logging.DEBUG, "verification", {
        c.name: {"kind": "check", "name": c.name, "passed": c.ok, "value": c.value, "tolerance": c.threshold}
        for c in checks
    })
    if report.passed:
        logger.info("✅ %d checks passed for %s", len(checks), p.config.name)
    else:
        logger.warning("⚠️ %d of %d checks failed: %s", len(report.failures()), len(checks),
                       ", ".join(c.name for c in report.failures()))
    return report
