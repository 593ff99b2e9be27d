"""Defining solutions v₀, u and the Weyl function M(λ) at a regular endpoint.

Key behaviors:
- v₀ (columns indexed by H₀) and u (columns indexed by ℋ_b = H) are found by
  one linear solve in their initial values against the monodromy Y₀(b,λ).
  The boundary matrix is shared by both; when it is singular relative to the
  monodromy scale, λ sits on an eigenvalue of A₀ and
  ``SpectralCollisionError`` is raised.
- M(λ) = [[m₀, M₂], [M₃, M₄]] with m₀ = (𝒫₀+𝒫̂)v₀(a) + (i/2)P_Ĥ,
  M₂ = (𝒫₀+𝒫̂)u(a), M₃ = −Γ₁b v₀, M₄ = −Γ₁b u.
- ``WeylBlocks`` is the shape-generic carrier of (possibly rectangular)
  Weyl data consumed by the characteristic-matrix calculus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import threading

import numpy as np

from modules.ode.fundamental import FundamentalSolver, SolutionMatrix, propagate
from modules.spaces.weighted import solution_gram
from modules.systems.structure import SpaceDecomposition
from modules.triplet.boundary_maps import RegularBoundaryMap
from modules.utils.errors import CoefficientError
from modules.utils.linalg import condition_number, guarded_solve, imag_part, min_eigenvalue, spectral_norm
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import Tolerances

logger = get_logger(__name__)


# -----------------------------------------------------------------------------
# Shape-generic Weyl blocks
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class WeylBlocks:
    """M₊(λ): ℋ₀ → ℋ₁ with ℋ₀ = H₀ ⊕ ℋ̃_b, ℋ₁ = H₀ ⊕ ℋ_b (h_b ≤ h̃_b)."""

    lam: complex
    dim_h: int
    dim_hhat: int
    hb: int
    htb: int
    M: np.ndarray

    def __post_init__(self) -> None:
        if self.hb > self.htb:
            raise CoefficientError(f"h_b={self.hb} exceeds h̃_b={self.htb}")
        if self.M.shape != (self.n1, self.n0):
            raise CoefficientError(f"M₊ has shape {self.M.shape}, expected {(self.n1, self.n0)}")

    @property
    def h0(self) -> int:
        return self.dim_h + self.dim_hhat

    @property
    def n1(self) -> int:
        return self.h0 + self.hb

    @property
    def n0(self) -> int:
        return self.h0 + self.htb

    @property
    def equal_index(self) -> bool:
        return self.hb == self.htb

    @property
    def decomposition(self) -> SpaceDecomposition:
        return SpaceDecomposition(self.dim_h, self.dim_hhat)

    @property
    def m0(self) -> np.ndarray:
        return self.M[:self.h0, :self.h0]

    @property
    def M2(self) -> np.ndarray:
        return self.M[:self.h0, self.h0:]

    @property
    def M3(self) -> np.ndarray:
        return self.M[self.h0:, :self.h0]

    @property
    def M4(self) -> np.ndarray:
        return self.M[self.h0:, self.h0:]

    def padded(self) -> np.ndarray:
        """M₊ as an n₀ × n₀ matrix (ℋ₁ embedded in ℋ₀, zero rows below)."""
        out = np.zeros((self.n0, self.n0), dtype=complex)
        out[:self.n1] = self.M
        return out

    def projections(self) -> tuple[np.ndarray, np.ndarray]:
        """P₁ = P_{ℋ₀,ℋ₁} and P₂ = I − P₁ as n₀ × n₀ projectors."""
        p1 = np.zeros((self.n0, self.n0), dtype=complex)
        p1[:self.n1, :self.n1] = np.eye(self.n1)
        return p1, np.eye(self.n0) - p1


# -----------------------------------------------------------------------------
# Numeric Weyl data
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class WeylData:
    lam: complex
    decomposition: SpaceDecomposition
    m0: np.ndarray
    M2: np.ndarray
    M3: np.ndarray
    M4: np.ndarray
    v0: SolutionMatrix = field(repr=False)
    u: SolutionMatrix = field(repr=False)
    condition_residual: float = 0.0
    boundary_cond: float = 1.0

    @property
    def M(self) -> np.ndarray:
        return np.block([[self.m0, self.M2], [self.M3, self.M4]])

    def blocks(self) -> WeylBlocks:
        d = self.decomposition
        return WeylBlocks(self.lam, d.dim_h, d.dim_hhat, d.dim_h, d.dim_h, self.M)

    def gamma_field(self) -> SolutionMatrix:
        """Z(·,λ) = (v₀(·,λ), u(·,λ))."""
        return SolutionMatrix.hstack(self.v0, self.u)


def _initial_values(dec: SpaceDecomposition, w: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, np.ndarray, float]:
    """v₀(a,λ) and u(a,λ) from the monodromy ``w``, plus the relative boundary condition number."""
    h, hh, h0 = dec.dim_h, dec.dim_hhat, dec.dim_h0
    s0, shat = dec.s0, dec.shat
    e_hat = np.eye(h0, dtype=complex)[h:h0]

    a_mat = np.vstack([w[s0, :h0], 1j * (e_hat - w[shat, :h0])])

    l_v = -dec.p_h0_h()
    rhs_v = np.vstack([-w[s0, h0:] @ l_v, dec.p_h0_hhat() + 1j * (w[shat, h0:] @ l_v)])
    rhs_u = np.vstack([np.eye(h, dtype=complex), np.zeros((hh, h), dtype=complex)])

    scale = max(1.0, spectral_norm(w))
    sol = guarded_solve(a_mat, np.hstack([rhs_v, rhs_u]), label="v₀/u boundary system",
                        eps_cond=tol.cond, spectral=True, scale=scale)

    x_v = np.vstack([sol[:, :h0], l_v])
    x_u = np.vstack([sol[:, h0:], np.zeros((h, h), dtype=complex)])
    return x_v, x_u, condition_number(a_mat, scale)


def defining_residual(dec: SpaceDecomposition, v0_a: np.ndarray, v0_b: np.ndarray,
                      u_a: np.ndarray, u_b: np.ndarray) -> float:
    """Largest violation of the six defining conditions of v₀ and u."""
    s0, shat, s1 = dec.s0, dec.shat, dec.s1
    h = dec.dim_h
    checks = [
        v0_a[s1] + dec.p_h0_h(),
        1j * (v0_a[shat] - v0_b[shat]) - dec.p_h0_hhat(),
        v0_b[s0],
        u_a[s1],
        1j * (u_a[shat] - u_b[shat]),
        u_b[s0] - np.eye(h),
    ]
    return max((spectral_norm(c) for c in checks), default=0.0)


def weyl(solver: FundamentalSolver, bmap: RegularBoundaryMap, lam: complex) -> WeylData:
    """Solve for v₀ and u at λ and assemble the Weyl blocks.

    Raises:
        SpectralCollisionError: If the boundary system is singular relative to
            the monodromy scale (λ near an eigenvalue of A₀).
    """
    dec = solver.system.decomposition
    if bmap.decomposition != dec:
        raise CoefficientError("boundary map and system use different decompositions", provenance="triplet")
    fund = solver.fundamental(lam)
    w = fund.monodromy
    x_v, x_u, cond = _initial_values(dec, w, solver.tol)
    v0 = propagate(fund, x_v)
    u = propagate(fund, x_u)

    h0 = dec.dim_h0
    m0 = x_v[:h0] + 0.5j * dec.p_hat()
    m2 = x_u[:h0]
    m3 = -bmap.gamma_b(v0.at_b).g1b
    m4 = -bmap.gamma_b(u.at_b).g1b
    resid = defining_residual(dec, v0.at_a, v0.at_b, u.at_a, u.at_b)
    if resid > solver.tol.weyl:
        logger.warning("⚠️ defining conditions of v₀/u violated by %.3e at λ=%s", resid, lam)
    return WeylData(complex(lam), dec, m0, m2, m3, m4, v0, u, resid, cond)


def solve_v0(solver: FundamentalSolver, bmap: RegularBoundaryMap, lam: complex) -> SolutionMatrix:
    return weyl(solver, bmap, lam).v0


def solve_u(solver: FundamentalSolver, bmap: RegularBoundaryMap, lam: complex) -> SolutionMatrix:
    return weyl(solver, bmap, lam).u


def gamma_field(solver: FundamentalSolver, bmap: RegularBoundaryMap, lam: complex) -> SolutionMatrix:
    return weyl(solver, bmap, lam).gamma_field()


class WeylFunction:
    """λ ↦ WeylData for one system, memoized behind a lock."""

    def __init__(self, solver: FundamentalSolver, bmap: RegularBoundaryMap | None = None) -> None:
        self.solver = solver
        self.bmap = bmap or RegularBoundaryMap(solver.system.decomposition)
        self._cache: dict[complex, WeylData] = {}
        self._lock = threading.Lock()

    @property
    def tol(self) -> Tolerances:
        return self.solver.tol

    def data(self, lam: complex) -> WeylData:
        key = complex(lam)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        wd = weyl(self.solver, self.bmap, key)
        with self._lock:
            return self._cache.setdefault(key, wd)

    def __call__(self, lam: complex) -> np.ndarray:
        return self.data(lam).M

    def blocks(self, lam: complex) -> WeylBlocks:
        return self.data(lam).blocks()

    def gamma_field(self, lam: complex) -> SolutionMatrix:
        return self.data(lam).gamma_field()

    def gram(self, lam: complex, mu: complex) -> np.ndarray:
        """∫ Z*(t,λ)Δ(t)Z(t,μ) dt = γ*(λ)γ(μ)."""
        return solution_gram(self.solver.space, self.gamma_field(lam), self.gamma_field(mu))


def weyl_identity_residual(wf: WeylFunction, lam: complex, mu: complex) -> float:
    """‖M(μ) − M(λ)* − (μ − λ̄) γ*(λ)γ(μ)‖."""
    lhs = wf(mu) - wf(lam).conj().T
    return spectral_norm(lhs - (mu - np.conj(lam)) * wf.gram(lam, mu))


# -----------------------------------------------------------------------------
# Nevanlinna property
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class NevanlinnaReport:
    lam: complex
    symmetry_defect: float
    min_imag_eig: float

    def passed(self, sym_tol: float, psd_tol: float) -> bool:
        return self.symmetry_defect <= sym_tol and self.min_imag_eig >= -psd_tol


def nevanlinna_report(value: np.ndarray, value_conj: np.ndarray, lam: complex) -> NevanlinnaReport:
    """‖F(λ̄) − F(λ)*‖ and the smallest eigenvalue of Im F(λ)/Im λ."""
    lam = complex(lam)
    sym = spectral_norm(value_conj - value.conj().T)
    if lam.imag == 0.0:
        return NevanlinnaReport(lam, sym, 0.0)
    return NevanlinnaReport(lam, sym, min_eigenvalue(imag_part(value) / lam.imag))
