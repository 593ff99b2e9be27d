"""Fundamental solutions Y₀(·,λ) of y' = −J(B(t) + λΔ(t))y.

Key behaviors:
- The n × n matrix ODE is integrated as one flattened complex vector with
  ``scipy.integrate.solve_ivp`` (DOP853, dense output) and sampled on the
  quadrature mesh of the weighted space.
- ``FundamentalSolver`` memoizes one solution per λ behind a lock, so a
  λ-sweep running on a thread pool can share it.
- Y₀(t,λ)⁻¹ is never formed by inversion; ``inverse_at`` uses the
  symplectic identity Y₀⁻¹(t,λ) = −J Y₀*(t,λ̄) J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import threading
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp

from modules.spaces.weighted import WeightedFunction, WeightedSpace
from modules.utils.errors import CoefficientError, IntegrationError
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


# -----------------------------------------------------------------------------
# Sampled solution containers
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class FundamentalSolution:
    """Y₀(·,λ) on the mesh; ``values[k]`` is Y₀(grid[k], λ)."""

    lam: complex
    grid: np.ndarray
    values: np.ndarray
    steps: np.ndarray = field(repr=False)
    dense: Any = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def monodromy(self) -> np.ndarray:
        """Y₀(b, λ)."""
        return self.values[-1]

    def at(self, t: float) -> np.ndarray:
        """Y₀(t, λ) from the integrator's dense output (mesh value when no dense output is kept)."""
        if self.dense is None:
            k = int(np.argmin(np.abs(self.grid - t)))
            return self.values[k]
        n = self.dim
        return np.asarray(self.dense(t), dtype=complex).reshape(n, n)


@dataclass(frozen=True, slots=True)
class SolutionMatrix:
    """k homogeneous solutions stacked as columns; ``values`` has shape (N, dim, k)."""

    lam: complex
    grid: np.ndarray
    values: np.ndarray

    @property
    def columns(self) -> int:
        return self.values.shape[2]

    @property
    def at_a(self) -> np.ndarray:
        return self.values[0]

    @property
    def at_b(self) -> np.ndarray:
        return self.values[-1]

    def column(self, j: int) -> WeightedFunction:
        return WeightedFunction(self.grid, self.values[:, :, j])

    def times(self, coeffs: np.ndarray) -> "SolutionMatrix":
        """Right-multiply by a constant k × m matrix."""
        return SolutionMatrix(self.lam, self.grid, self.values @ coeffs)

    @staticmethod
    def hstack(*parts: "SolutionMatrix") -> "SolutionMatrix":
        if not parts:
            raise CoefficientError("nothing to stack", provenance="ode")
        lam = parts[0].lam
        if any(p.lam != lam or p.grid.shape != parts[0].grid.shape for p in parts):
            raise CoefficientError("solution matrices differ in λ or mesh", provenance="ode")
        return SolutionMatrix(lam, parts[0].grid, np.concatenate([p.values for p in parts], axis=2))


def propagate(fund: FundamentalSolution, initial: np.ndarray) -> SolutionMatrix:
    """Y(t) = Y₀(t,λ) · initial on every mesh node."""
    init = np.asarray(initial, dtype=complex)
    if init.ndim == 1:
        init = init[:, None]
    if init.ndim != 2 or init.shape[0] != fund.dim or init.shape[1] < 1:
        raise CoefficientError(f"initial matrix of shape {init.shape} does not fit dimension {fund.dim}",
                               provenance="ode")
    return SolutionMatrix(fund.lam, fund.grid, fund.values @ init)


# -----------------------------------------------------------------------------
# Integration
# -----------------------------------------------------------------------------

def fundamental_solution(space: WeightedSpace, lam: complex,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> FundamentalSolution:
    """Integrate Y' = −J(B + λΔ)Y, Y(a) = I, and sample on the space's mesh.

    Raises:
        IntegrationError: If the integrator stops early (step-size underflow etc.).
    """
    system = space.system
    n = system.dim
    lam = complex(lam)
    grid = space.mesh.nodes

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return (system.generator(t, lam) @ y.reshape(n, n)).ravel()

    sol = solve_ivp(
        rhs,
        (system.a, system.b),
        np.eye(n, dtype=complex).ravel(),
        method="DOP853",
        t_eval=grid,
        dense_output=True,
        rtol=tol.ode_rtol,
        atol=tol.ode_atol,
    )
    if sol.status != 0 or sol.y.shape[1] != len(grid):
        t_stop = float(sol.t[-1]) if len(sol.t) else system.a
        logger.error("❌ integration of %s stopped at t=%.6g (λ=%s): %s", system.name, t_stop, lam, sol.message)
        raise IntegrationError(f"integrator failed at t={t_stop:.6g}: {sol.message}", t=t_stop)

    values = sol.y.T.reshape(len(grid), n, n)
    values[0] = np.eye(n)
    values.setflags(write=False)
    steps = np.asarray(sol.sol.ts, dtype=float)
    logger.debug("✅ Y₀ for λ=%s: %d accepted steps, %d rhs evaluations", lam, len(steps) - 1, sol.nfev)
    return FundamentalSolution(lam, grid, values, steps, sol.sol)


class FundamentalSolver:
    """Per-λ memoized fundamental solutions for one weighted space."""

    def __init__(self, space: WeightedSpace, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
        self.space = space
        self.tol = tol
        self._cache: dict[complex, FundamentalSolution] = {}
        self._lock = threading.Lock()

    @property
    def system(self):
        return self.space.system

    def fundamental(self, lam: complex) -> FundamentalSolution:
        key = complex(lam)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        fund = fundamental_solution(self.space, key, self.tol)
        with self._lock:
            # another worker may have inserted the same λ meanwhile; keep the first
            return self._cache.setdefault(key, fund)

    def monodromy(self, lam: complex) -> np.ndarray:
        return self.fundamental(lam).monodromy

    def inverse_at(self, lam: complex, k: int) -> np.ndarray:
        """Y₀(t_k,λ)⁻¹ = −J Y₀*(t_k,λ̄) J."""
        j = self.system.J
        y_conj = self.fundamental(np.conj(lam)).values[k]
        return -j @ y_conj.conj().T @ j

    def cached(self) -> list[complex]:
        with self._lock:
            return list(self._cache)


# -----------------------------------------------------------------------------
# Accuracy monitors
# -----------------------------------------------------------------------------

def symplectic_residual(fund: FundamentalSolution, j: np.ndarray,
                        conj: FundamentalSolution | None = None) -> float:
    """max_k ‖Y₀*(t_k,λ̄) J Y₀(t_k,λ) − J‖; ``conj`` defaults to ``fund`` (λ real)."""
    other = fund if conj is None else conj
    if other.values.shape != fund.values.shape:
        raise CoefficientError("fundamental solutions on different meshes", provenance="ode")
    prod = np.einsum("kji,jl,klm->kim", other.values.conj(), j, fund.values)
    return float(np.max(np.linalg.norm(prod - j, ord=2, axis=(1, 2))))


def solver_symplectic_residual(solver: FundamentalSolver, lam: complex) -> float:
    return symplectic_residual(solver.fundamental(lam), solver.system.J, solver.fundamental(np.conj(lam)))


def min_abs_det(fund: FundamentalSolution) -> float:
    return float(np.min(np.abs(np.linalg.det(fund.values))))
