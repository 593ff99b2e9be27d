"""The boundary-value solution Z_τ(·,λ) and the inequalities built on it.

Z_τ(t,λ) = −Z(t,λ)(C₀(λ) − C₁(λ)M(λ))⁻¹C_a(λ)J with Z = (v₀, u) solves the
homogeneous equation and the boundary condition

    C_a(λ)(Z_τ(a,λ) + J) + C_b(λ)Γ_b Z_τ(λ) = 0,

after which Ω_τ(λ) = Z_τ(a,λ) + ½J.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as spla

from modules.charmat.characteristic import omega_tau_at
from modules.ode.fundamental import SolutionMatrix
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.parameters.interface_pair import to_interface_pair
from modules.spaces.weighted import solution_gram
from modules.triplet.weyl import WeylFunction
from modules.utils.errors import AdmissibilityError, BoundaryConditionError
from modules.utils.linalg import condition_number, guarded_solve, imag_part, min_eigenvalue, spectral_norm
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class ZTau:
    lam: complex
    solution: SolutionMatrix
    bc_residual: float


def z_tau(tau: BoundaryParameter, wf: WeylFunction, lam: complex) -> ZTau:
    """Z_τ(·,λ) with the boundary condition re-checked after assembly.

    Raises:
        IllConditionedError: If C₀ − C₁M is not invertible.
        BoundaryConditionError: If the boundary residual exceeds ``tol.bc``.
    """
    tol = wf.tol
    j = wf.solver.system.J
    data = wf.data(lam)
    c0, c1 = tau.pair(lam)
    ip = to_interface_pair(tau, data.decomposition, lam)
    coeffs = -guarded_solve(c0 - c1 @ data.M, ip.C_a @ j, label="C0 - C1 M", eps_cond=tol.cond)
    zt = data.gamma_field().times(coeffs)

    resid = spectral_norm(ip.C_a @ (zt.at_a + j) + ip.C_b @ zt.at_b)
    scale = max(1.0, spectral_norm(zt.at_a))
    if resid > tol.bc * scale:
        logger.error("❌ Z_τ misses its boundary condition at λ=%s (residual %.3e)", lam, resid)
        raise BoundaryConditionError(f"boundary residual {resid:.3e} exceeds {tol.bc:.1e}")
    return ZTau(complex(lam), zt, resid)


def omega_from_z(zt: ZTau, j: np.ndarray) -> np.ndarray:
    """Ω_τ(λ) = Z_τ(a,λ) + ½J."""
    return zt.solution.at_a + 0.5 * j


@dataclass(frozen=True, slots=True)
class UniquenessCheck:
    lam: complex
    null_dim: int
    sigma_min: float
    cond: float


def uniqueness_check(tau: BoundaryParameter, wf: WeylFunction, lam: complex) -> UniquenessCheck:
    """Homogeneous solutions y = Y₀h with C_a y(a) + C_b y(b) = 0 are the kernel of C_a + C_bY₀(b,λ)."""
    solver = wf.solver
    ip = to_interface_pair(tau, solver.system.decomposition, lam)
    w = solver.monodromy(lam)
    d = ip.C_a + ip.C_b @ w
    scale = max(1.0, spectral_norm(ip.C_a) + spectral_norm(ip.C_b) * spectral_norm(w))
    cond = condition_number(d, scale)
    null = spla.null_space(d, rcond=wf.tol.cond * scale / max(spectral_norm(d), 1e-300))
    return UniquenessCheck(complex(lam), int(null.shape[1]), float(spla.svdvals(d)[-1]), cond)


@dataclass(frozen=True, slots=True)
class ImagBound:
    lam: complex
    min_eig: float
    gap_norm: float
    passed: bool


def imag_bound_check(tau: BoundaryParameter, wf: WeylFunction, lam: complex) -> ImagBound:
    """Smallest eigenvalue of (Im λ)⁻¹Im Ω_τ(λ) − ∫Z_τ*ΔZ_τ; non-negative for Nevanlinna τ."""
    lam = complex(lam)
    if lam.imag == 0.0:
        raise AdmissibilityError("the imaginary-part bound needs non-real λ", condition="Im λ ≠ 0")
    omega = omega_tau_at(tau, wf, lam, wf.tol)
    zt = z_tau(tau, wf, lam).solution
    diff = imag_part(omega) / lam.imag - solution_gram(wf.solver.space, zt, zt)
    lo = min_eigenvalue(diff)
    passed = lo >= -wf.tol.ineq
    if not passed:
        logger.warning("⚠️ imaginary-part bound violated at λ=%s: %.3e", lam, lo)
    return ImagBound(lam, lo, spectral_norm(diff), passed)


def selfadjoint_identity_residual(tau: BoundaryParameter, wf: WeylFunction, lam: complex, mu: complex) -> float:
    """‖Ω_τ(μ) − Ω_τ(λ)* − (μ − λ̄)∫Z_τ*(t,λ)Δ(t)Z_τ(t,μ)dt‖ for self-adjoint τ.

    Raises:
        AdmissibilityError: If τ is not self-adjoint (the identity is not claimed).
    """
    if not tau.is_self_adjoint:
        raise AdmissibilityError("identity holds only for self-adjoint τ", condition="self-adjoint")
    om_l = omega_tau_at(tau, wf, lam, wf.tol)
    om_m = omega_tau_at(tau, wf, mu, wf.tol)
    gram = solution_gram(wf.solver.space, z_tau(tau, wf, lam).solution, z_tau(tau, wf, mu).solution)
    return spectral_norm(om_m - om_l.conj().T - (mu - np.conj(lam)) * gram)
