"""Boundary maps of the decomposing boundary triplet at a regular endpoint b.

Key behaviors:
- ``RegularBoundaryMap`` realizes Γ_b y = (y₀(b), ŷ(b), y₁(b)) by component
  extraction; ℋ̃_b = ℋ_b = H.
- ``triplet_maps`` evaluates Γ₀, Γ₁ on a pair (y, f) after certifying
  Jy' − By = Δf by the spline ODE residual.
- The Lagrange and Green identities are exposed as residual functions so the
  verification suite and tests can sample random T_max pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from modules.ode.fundamental import FundamentalSolver
from modules.ode.inhomogeneous import ode_residual, solve_inhomogeneous
from modules.spaces.weighted import WeightedFunction, WeightedSpace, delta_inner
from modules.systems.structure import SpaceDecomposition
from modules.utils.errors import TmaxMembershipError
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class BoundaryValues:
    """Γ₀b y, Γ̂_b y, Γ₁b y (one column per solution)."""

    g0b: np.ndarray
    ghat: np.ndarray
    g1b: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.g0b, self.ghat, self.g1b], axis=0)


@dataclass(frozen=True, slots=True)
class RegularBoundaryMap:
    decomposition: SpaceDecomposition

    @property
    def dim_hb(self) -> int:
        return self.decomposition.dim_h

    def gamma_b(self, y_b: np.ndarray) -> BoundaryValues:
        """Split the value y(b) (vector or dim × k matrix) into its three boundary components."""
        d = self.decomposition
        y = np.asarray(y_b, dtype=complex)
        return BoundaryValues(y[d.s0], y[d.shat], y[d.s1])

    def boundary_form(self, y_b: np.ndarray, z_b: np.ndarray) -> complex:
        """(Γ₀b y, Γ₁b z) − (Γ₁b y, Γ₀b z) + i(Γ̂_b y, Γ̂_b z) for single vectors."""
        gy, gz = self.gamma_b(y_b), self.gamma_b(z_b)
        return complex(np.vdot(gz.g1b, gy.g0b) - np.vdot(gz.g0b, gy.g1b) + 1j * np.vdot(gz.ghat, gy.ghat))


def bracket(j: np.ndarray, y: np.ndarray, z: np.ndarray) -> complex:
    """[y, z] = (Jy, z) = z* J y."""
    return complex(np.vdot(z, j @ y))


def boundary_form_residual(bmap: RegularBoundaryMap, j: np.ndarray, y_b: np.ndarray, z_b: np.ndarray) -> float:
    """|(Jy(b), z(b)) − boundary_form(y(b), z(b))|; zero up to roundoff at a regular endpoint."""
    return abs(bracket(j, y_b, z_b) - bmap.boundary_form(y_b, z_b))


# -----------------------------------------------------------------------------
# Γ₀, Γ₁ on T_max pairs
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TripletValues:
    gamma0: np.ndarray
    gamma1: np.ndarray


@dataclass(frozen=True, slots=True)
class TmaxPair:
    """A pair (y, f) with Jy' − By = Δf."""

    y: WeightedFunction
    f: WeightedFunction


def triplet_maps(space: WeightedSpace, bmap: RegularBoundaryMap, pair: TmaxPair,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> TripletValues:
    """Γ₀ = (−y₁(a), i(ŷ(a) − Γ̂_b y), Γ₀b y),  Γ₁ = (y₀(a), ½(ŷ(a) + Γ̂_b y), −Γ₁b y).

    Raises:
        TmaxMembershipError: If the ODE residual of the pair exceeds ``tol.tmax``.
    """
    res = ode_residual(space, 0.0, pair.y, pair.f)
    if res > tol.tmax:
        logger.warning("⚠️ pair rejected: ODE residual %.3e > %.1e", res, tol.tmax)
        raise TmaxMembershipError(f"(y, f) is not in T_max: residual {res:.3e} exceeds {tol.tmax:.1e}")
    d = bmap.decomposition
    ya = pair.y.at_a
    gb = bmap.gamma_b(pair.y.at_b)
    gamma0 = np.concatenate([-ya[d.s1], 1j * (ya[d.shat] - gb.ghat), gb.g0b])
    gamma1 = np.concatenate([ya[d.s0], 0.5 * (ya[d.shat] + gb.ghat), -gb.g1b])
    return TripletValues(gamma0, gamma1)


def random_tmax_pair(solver: FundamentalSolver, rng: np.random.Generator, n_modes: int = 3) -> TmaxPair:
    """Seeded pair: smooth random f (low trigonometric modes) and random y(a), y solved at λ = 0."""
    space = solver.space
    n = space.system.dim
    a, b = space.system.a, space.system.b
    s = (space.grid - a) / (b - a)
    k = np.arange(n_modes)
    basis = np.concatenate([np.cos(np.pi * np.outer(s, k)), np.sin(np.pi * np.outer(s, k + 1))], axis=1)
    coeffs = rng.standard_normal((basis.shape[1], n)) + 1j * rng.standard_normal((basis.shape[1], n))
    f = WeightedFunction(space.grid, basis @ coeffs / basis.shape[1])
    y_a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return TmaxPair(solve_inhomogeneous(solver, 0.0, f, y_a), f)


def lagrange_residual(space: WeightedSpace, first: TmaxPair, second: TmaxPair) -> float:
    """|(f, z)_Δ − (y, g)_Δ − ([y, z]_b − [y, z]_a)| for pairs (y, f), (z, g)."""
    j = space.system.J
    lhs = delta_inner(space, first.f, second.y) - delta_inner(space, first.y, second.f)
    rhs = bracket(j, first.y.at_b, second.y.at_b) - bracket(j, first.y.at_a, second.y.at_a)
    return abs(lhs - rhs)


def green_identity_residual(space: WeightedSpace, bmap: RegularBoundaryMap, first: TmaxPair,
                            second: TmaxPair, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """|(f, z)_Δ − (y, g)_Δ − ((Γ₁y, Γ₀z) − (Γ₀y, Γ₁z))|."""
    ty = triplet_maps(space, bmap, first, tol)
    tz = triplet_maps(space, bmap, second, tol)
    lhs = delta_inner(space, first.f, second.y) - delta_inner(space, first.y, second.f)
    rhs = np.vdot(tz.gamma0, ty.gamma1) - np.vdot(tz.gamma1, ty.gamma0)
    return abs(lhs - complex(rhs))
