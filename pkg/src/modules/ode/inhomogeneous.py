"""Inhomogeneous problems Jy' − By − λΔy = Δf by variation of parameters.

y(t) = Y₀(t,λ)[y(a) − J F(t)],   F(t) = ∫_a^t Y₀*(s,λ̄)Δ(s)f(s) ds,

with the cumulative integral taken by composite Simpson on the mesh.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from modules.ode.fundamental import FundamentalSolver
from modules.spaces.weighted import WeightedFunction, WeightedSpace
from modules.utils.errors import MeshMismatchError


def cumulative_adjoint(solver: FundamentalSolver, lam: complex, f: WeightedFunction) -> np.ndarray:
    """F(t_k) = ∫_a^{t_k} Y₀*(s,λ̄)Δ(s)f(s) ds for every mesh node; shape (N, dim)."""
    space = solver.space
    if f.values.shape != (len(space.mesh), space.system.dim):
        raise MeshMismatchError(f"f has shape {f.values.shape}, mesh expects ({len(space.mesh)}, {space.system.dim})")
    y_conj = solver.fundamental(np.conj(lam)).values
    integrand = np.einsum("kji,kjl,kl->ki", y_conj.conj(), space.delta, f.values)
    return space.mesh.cumulative(integrand)


def solve_inhomogeneous(solver: FundamentalSolver, lam: complex, f: WeightedFunction,
                        y_a: np.ndarray) -> WeightedFunction:
    """The solution of Jy' − By = λΔy + Δf with y(a) = y_a."""
    j = solver.system.J
    fund = solver.fundamental(lam).values
    big_f = cumulative_adjoint(solver, lam, f)
    coeffs = np.asarray(y_a, dtype=complex)[None, :] - big_f @ j.T
    return WeightedFunction(solver.space.grid, np.einsum("kij,kj->ki", fund, coeffs))


def ode_residual(space: WeightedSpace, lam: complex, y: WeightedFunction,
                 f: WeightedFunction | None = None) -> float:
    """max_k ‖J y'(t_k) − B y − λΔ y − Δ f‖ with y' from a cubic spline through the samples."""
    system = space.system
    grid = space.grid
    if y.values.shape[0] != len(grid):
        raise MeshMismatchError("y is not sampled on the space's mesh")
    dy = CubicSpline(grid, y.values, axis=0)(grid, 1)
    b = system.B.sample(grid)
    res = dy @ system.J.T - np.einsum("kij,kj->ki", b + lam * space.delta, y.values)
    if f is not None:
        res -= np.einsum("kij,kj->ki", space.delta, f.values)
    return float(np.max(np.linalg.norm(res, axis=1)))
