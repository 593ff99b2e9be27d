"""Real eigenvalues of a canonical extension by scanning det(C_a + C_bY₀(b,λ)).

For a constant self-adjoint τ the boundary problem has a nonzero solution
at real λ exactly when D(λ) = C_a + C_bY₀(b,λ) is singular. On the real
axis det D is real up to one constant phase (the phase of the rows of the
pair); the phase is removed using the sample of largest modulus, sign
changes of the real part are bracketed on a uniform grid and refined with
``scipy.optimize.brentq``.

Zeros of even multiplicity do not change sign and are not reported. Both ends
of the window are also checked on a short interval around them, so an eigenvalue
sitting exactly on an end is reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from modules.ode.fundamental import FundamentalSolver, fundamental_solution
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.parameters.interface_pair import InterfacePair, to_interface_pair
from modules.utils.errors import AdmissibilityError, ConfigError
from modules.utils.linalg import condition_number, spectral_norm
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

# half-width of the interval checked around each window end, relative to max(1, |λ|)
_EDGE_STEP = 1e-6


@dataclass(frozen=True, slots=True)
class EigenvalueBracket:
    lo: float
    hi: float
    value: float
    det_abs: float
    imag_defect: float
    cond: float


def boundary_matrix(ip: InterfacePair, solver: FundamentalSolver, lam: float) -> tuple[np.ndarray, float]:
    """(D(λ), scale) with scale = max(1, ‖C_a‖ + ‖C_b‖‖Y₀(b,λ)‖) for relative conditioning.

    Scan points are integrated without touching the solver cache.
    """
    w = fundamental_solution(solver.space, lam, solver.tol).monodromy
    scale = max(1.0, spectral_norm(ip.C_a) + spectral_norm(ip.C_b) * spectral_norm(w))
    return ip.C_a + ip.C_b @ w, scale


def eig_scan(tau: BoundaryParameter, solver: FundamentalSolver, interval: tuple[float, float],
             n_grid: int = 400) -> list[EigenvalueBracket]:
    """Eigenvalues of the canonical extension defined by τ inside ``interval``.

    Raises:
        AdmissibilityError: If τ is not a constant self-adjoint parameter.
        ConfigError: If the interval is empty or the grid has fewer than 2 points.
    """
    if not (tau.is_constant and tau.is_self_adjoint):
        raise AdmissibilityError("eigenvalue scans need a constant self-adjoint τ", condition="self-adjoint")
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo or n_grid < 2:
        raise ConfigError(f"bad scan window [{lo}, {hi}] with {n_grid} points")

    tol = solver.tol
    ip = to_interface_pair(tau, solver.system.decomposition, 0.0)
    grid = np.linspace(lo, hi, int(n_grid))
    dets = np.array([np.linalg.det(boundary_matrix(ip, solver, lam)[0]) for lam in grid])

    peak = float(np.max(np.abs(dets)))
    if peak == 0.0:
        logger.warning("⚠️ det D vanishes on the whole scan window [%g, %g]", lo, hi)
        return []
    phase = np.conj(dets[int(np.argmax(np.abs(dets)))]) / peak
    rotated = dets * phase
    imag_defect = float(np.max(np.abs(rotated.imag))) / peak
    if imag_defect > tol.det_imag:
        logger.warning("⚠️ det D is not real up to a phase: defect %.3e", imag_defect)

    def real_det(lam: float) -> float:
        return float((np.linalg.det(boundary_matrix(ip, solver, lam)[0]) * phase).real)

    def refine(a: float, b: float) -> float:
        return float(brentq(real_det, a, b, xtol=tol.eig * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps))

    roots: list[tuple[float, float, float]] = []
    values = rotated.real
    for k in range(len(grid) - 1):
        a, b = float(grid[k]), float(grid[k + 1])
        if values[k] == 0.0:
            roots.append((a, b, a))
        elif values[k] * values[k + 1] < 0.0:
            roots.append((a, b, refine(a, b)))

    # closed window: a root on an end leaves a sample of arbitrary sign
    for edge in (lo, hi):
        step = _EDGE_STEP * max(1.0, abs(edge))
        left, right = real_det(edge - step), real_det(edge + step)
        if left * right > 0.0:
            continue
        if left * right < 0.0:
            root = refine(edge - step, edge + step)
        else:
            root = edge - step if left == 0.0 else edge + step
        if all(abs(root - r) > step for _, _, r in roots):
            roots.append((edge - step, edge + step, root))

    found: list[EigenvalueBracket] = []
    for a, b, root in sorted(roots, key=lambda r: r[2]):
        d, scale = boundary_matrix(ip, solver, root)
        found.append(EigenvalueBracket(a, b, root, float(abs(np.linalg.det(d))), imag_defect,
                                       condition_number(d, scale)))

    logger.info("✅ %d eigenvalue(s) of τ=%s in [%g, %g]", len(found), tau.label or tau.kind.value, lo, hi)
    return found
