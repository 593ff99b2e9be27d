"""Green kernel of A₀ (the extension with τ = (I, 0)).

G₀(x,t,λ) = v₀(x,λ)φ*(t,λ̄)  for t < x,
            φ(x,λ)v₀*(t,λ̄)  for t > x,

with φ(t,λ) = Y₀(t,λ)(I_{H₀}; 0). On the diagonal the mean of both branches
is used. ``apply`` evaluates (A₀ − λ)⁻¹f by two cumulative integrals instead
of the N × N kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from modules.ode.fundamental import SolutionMatrix, propagate
from modules.spaces.weighted import WeightedFunction
from modules.triplet.weyl import WeylFunction
from modules.utils.linalg import spectral_norm


@dataclass(frozen=True, slots=True)
class GreenKernel:
    lam: complex
    v0: SolutionMatrix
    phi: SolutionMatrix
    v0_conj: SolutionMatrix
    phi_conj: SolutionMatrix

    @property
    def grid(self) -> np.ndarray:
        return self.v0.grid

    def evaluate(self, i: int, k: int) -> np.ndarray:
        """G₀(x_i, t_k, λ) for mesh indices i (x) and k (t)."""
        lower = self.v0.values[i] @ self.phi_conj.values[k].conj().T
        upper = self.phi.values[i] @ self.v0_conj.values[k].conj().T
        if k < i:
            return lower
        if k > i:
            return upper
        return 0.5 * (lower + upper)

    def evaluate_at(self, x: float, t: float) -> np.ndarray:
        """Kernel value at the mesh nodes nearest to (x, t)."""
        grid = self.grid
        return self.evaluate(int(np.argmin(np.abs(grid - x))), int(np.argmin(np.abs(grid - t))))

    def apply(self, space, f: WeightedFunction) -> WeightedFunction:
        """∫ G₀(·,t,λ)Δ(t)f(t) dt."""
        mesh = space.mesh
        left = mesh.cumulative(np.einsum("kji,kjl,kl->ki", self.phi_conj.values.conj(), space.delta, f.values))
        right_c = mesh.cumulative(np.einsum("kji,kjl,kl->ki", self.v0_conj.values.conj(), space.delta, f.values))
        right = right_c[-1][None, :] - right_c
        y = np.einsum("kij,kj->ki", self.v0.values, left) + np.einsum("kij,kj->ki", self.phi.values, right)
        return WeightedFunction(self.grid, y)


def green_kernel(wf: WeylFunction, lam: complex) -> GreenKernel:
    """Factor solutions for G₀ at λ and λ̄.

    Raises:
        SpectralCollisionError: If λ is (numerically) an eigenvalue of A₀.
    """
    solver = wf.solver
    h0 = solver.system.decomposition.dim_h0
    n = solver.system.dim
    embed = np.eye(n, h0, dtype=complex)
    lam_c = np.conj(lam)
    return GreenKernel(
        complex(lam),
        wf.data(lam).v0,
        propagate(solver.fundamental(lam), embed),
        wf.data(lam_c).v0,
        propagate(solver.fundamental(lam_c), embed),
    )


def kernel_symmetry_residual(kernel: GreenKernel, kernel_conj: GreenKernel, indices) -> float:
    """max ‖G₀(x,t,λ)* − G₀(t,x,λ̄)‖ over index pairs drawn from ``indices``."""
    return max(
        (spectral_norm(kernel.evaluate(i, k).conj().T - kernel_conj.evaluate(k, i)) for i, k in product(indices, indices)),
        default=0.0,
    )
