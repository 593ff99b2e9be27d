"""Generalized resolvents R_τ(λ)f by independent routes.

Key behaviors:
- ``resolve_bvp``: variation of parameters plus one linear solve for y(a)
  from the boundary condition C_a(λ)y(a) + C_b(λ)y(b) = 0.
- ``resolve_kernel``: the characteristic-matrix kernel
  Y₀(x,λ)(Ω_τ(λ) + ½sgn(t − x)J)Y₀*(t,λ̄), integrated over [a,x] and [x,b]
  separately through cumulative sums.
- ``resolve_green``: (A₀ − λ)⁻¹f through the Green kernel.
- ``resolve_krein``: (A₀ − λ)⁻¹f + γ(λ)T_τ(λ)γ*(λ̄)f.
- Each result carries its boundary-condition and ODE residuals so routes
  can be cross-checked without trusting any single one.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from modules.charmat.characteristic import t_tau
from modules.ode.fundamental import FundamentalSolver
from modules.ode.inhomogeneous import cumulative_adjoint, ode_residual
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.parameters.interface_pair import to_interface_pair
from modules.resolvent.green import green_kernel
from modules.spaces.weighted import WeightedFunction, WeightedSpace, adjoint_apply, delta_inner, delta_norm
from modules.triplet.weyl import WeylFunction
from modules.utils.errors import AdmissibilityError
from modules.utils.linalg import guarded_solve, spectral_norm
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


class ResolventRoute(str, Enum):
    bvp = "bvp"
    kernel = "kernel"
    green = "green"
    krein = "krein"

    @classmethod
    def help_text(cls) -> str:
        return ", ".join(r.value for r in cls)


@dataclass(frozen=True, slots=True)
class ResolventResult:
    lam: complex
    route: ResolventRoute
    f: WeightedFunction
    y: WeightedFunction
    bc_residual: float | None
    ode_residual: float


def _bc_residual(tau: BoundaryParameter | None, solver: FundamentalSolver, lam: complex,
                 y: WeightedFunction) -> float | None:
    if tau is None:
        return None
    ip = to_interface_pair(tau, solver.system.decomposition, lam)
    scale = max(1.0, spectral_norm(y.values))
    return ip.residual(y.at_a, y.at_b) / scale


def _finish(route: ResolventRoute, tau: BoundaryParameter | None, solver: FundamentalSolver,
            lam: complex, f: WeightedFunction, y: WeightedFunction) -> ResolventResult:
    result = ResolventResult(complex(lam), route, f, y, _bc_residual(tau, solver, lam, y),
                             ode_residual(solver.space, lam, y, f))
    if result.ode_residual > solver.tol.bvp:
        logger.warning("⚠️ %s route: ODE residual %.3e at λ=%s", route.value, result.ode_residual, lam)
    return result


def _require_real_ok(tau: BoundaryParameter, lam: complex) -> None:
    if complex(lam).imag == 0.0 and not tau.is_self_adjoint:
        raise AdmissibilityError("real λ is only allowed for self-adjoint τ", condition="self-adjoint")


# -----------------------------------------------------------------------------
# Routes
# -----------------------------------------------------------------------------

def resolve_bvp(tau: BoundaryParameter, solver: FundamentalSolver, lam: complex,
                f: WeightedFunction) -> ResolventResult:
    """Solve Jy' − By = λΔy + Δf, C_a(λ)y(a) + C_b(λ)y(b) = 0.

    With y(t) = Y₀(t)[y(a) − JF(t)] the boundary condition becomes
    (C_a + C_bW)y(a) = C_bWJF(b), W = Y₀(b,λ).

    Raises:
        SpectralCollisionError: If the boundary matrix is singular relative to
            its data (λ is an eigenvalue of the boundary problem).
        AdmissibilityError: For real λ with a non-self-adjoint τ.
    """
    _require_real_ok(tau, lam)
    j = solver.system.J
    ip = to_interface_pair(tau, solver.system.decomposition, lam)
    fund = solver.fundamental(lam)
    w = fund.monodromy
    big_f = cumulative_adjoint(solver, lam, f)

    d = ip.C_a + ip.C_b @ w
    scale = max(1.0, spectral_norm(ip.C_a) + spectral_norm(ip.C_b) * spectral_norm(w))
    y_a = guarded_solve(d, ip.C_b @ w @ j @ big_f[-1], label="boundary matrix",
                        eps_cond=solver.tol.cond, spectral=True, scale=scale)

    coeffs = y_a[None, :] - big_f @ j.T
    y = WeightedFunction(solver.space.grid, np.einsum("kij,kj->ki", fund.values, coeffs))
    return _finish(ResolventRoute.bvp, tau, solver, lam, f, y)


def resolve_kernel(omega: np.ndarray, solver: FundamentalSolver, lam: complex, f: WeightedFunction,
                   tau: BoundaryParameter | None = None) -> ResolventResult:
    """y(x) = Y₀(x,λ)[(Ω − ½J)F(x) + (Ω + ½J)(F(b) − F(x))].

    ``tau`` is only used to report the boundary residual.
    """
    j = solver.system.J
    big_f = cumulative_adjoint(solver, lam, f)
    left = big_f @ (omega - 0.5 * j).T
    right = (big_f[-1][None, :] - big_f) @ (omega + 0.5 * j).T
    values = np.einsum("kij,kj->ki", solver.fundamental(lam).values, left + right)
    return _finish(ResolventRoute.kernel, tau, solver, lam, f, WeightedFunction(solver.space.grid, values))


def resolve_green(wf: WeylFunction, lam: complex, f: WeightedFunction) -> ResolventResult:
    """(A₀ − λ)⁻¹f = ∫G₀(·,t,λ)Δ(t)f(t)dt."""
    solver = wf.solver
    y = green_kernel(wf, lam).apply(solver.space, f)
    return _finish(ResolventRoute.green, None, solver, lam, f, y)


def resolve_krein(tau: BoundaryParameter, wf: WeylFunction, lam: complex, f: WeightedFunction) -> ResolventResult:
    """R_τ(λ)f = (A₀ − λ)⁻¹f + Z(·,λ)T_τ(λ)∫Z*(t,λ̄)Δ(t)f(t)dt."""
    solver = wf.solver
    space = solver.space
    base = green_kernel(wf, lam).apply(space, f)
    t = t_tau(tau, wf.blocks(lam), wf.tol)
    coeffs = t @ adjoint_apply(space, wf.gamma_field(np.conj(lam)), f)
    correction = WeightedFunction(space.grid, wf.gamma_field(lam).values @ coeffs)
    return _finish(ResolventRoute.krein, tau, solver, lam, f, base + correction)


# -----------------------------------------------------------------------------
# Cross-checks
# -----------------------------------------------------------------------------

Resolver = Callable[[complex, WeightedFunction], WeightedFunction]


def route_distance(space: WeightedSpace, first: ResolventResult, second: ResolventResult) -> float:
    """‖y₁ − y₂‖_Δ / ‖y₁‖_Δ (absolute when y₁ vanishes in L²_Δ)."""
    ref = delta_norm(space, first.y)
    diff = delta_norm(space, first.y - second.y)
    return diff / ref if ref > 0.0 else diff


def bvp_resolver(tau: BoundaryParameter, solver: FundamentalSolver) -> Resolver:
    return lambda lam, f: resolve_bvp(tau, solver, lam, f).y


def resolvent_identity_residual(space: WeightedSpace, resolve: Resolver, lam: complex, mu: complex,
                                f: WeightedFunction) -> float:
    """‖R(λ)f − R(μ)f − (λ − μ)R(λ)R(μ)f‖_Δ / ‖f‖_Δ.

    Small exactly when the resolvent family is canonical.
    """
    r_mu = resolve(mu, f)
    lhs = resolve(lam, f) - r_mu
    rhs = resolve(lam, r_mu).scale(lam - mu)
    ref = delta_norm(space, f)
    return delta_norm(space, lhs - rhs) / (ref if ref > 0.0 else 1.0)


def adjoint_residual(space: WeightedSpace, resolve: Resolver, lam: complex,
                     f: WeightedFunction, g: WeightedFunction) -> float:
    """|(R(λ)f, g)_Δ − (f, R(λ̄)g)_Δ|."""
    lam = complex(lam)
    return abs(delta_inner(space, resolve(lam, f), g) - delta_inner(space, f, resolve(lam.conjugate(), g)))
