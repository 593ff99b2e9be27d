"""Space decomposition 𝐇 = H ⊕ Ĥ ⊕ H and the structure matrices J, J_b.

Subspaces are realized as index ranges of 𝐇:

    [0, h)            H     (the y₀ part)
    [h, h + ĥ)        Ĥ     (the ŷ part)
    [h + ĥ, 2h + ĥ)   H     (the y₁ part)

H₀ = H ⊕ Ĥ is the leading block [0, h + ĥ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from modules.utils.errors import CoefficientError


@dataclass(frozen=True, slots=True)
class SpaceDecomposition:
    dim_h: int
    dim_hhat: int = 0

    def __post_init__(self) -> None:
        if self.dim_h < 1 or self.dim_hhat < 0:
            raise CoefficientError(
                f"invalid decomposition dim_h={self.dim_h}, dim_hhat={self.dim_hhat}")

    @property
    def dim_total(self) -> int:
        return 2 * self.dim_h + self.dim_hhat

    @property
    def dim_h0(self) -> int:
        return self.dim_h + self.dim_hhat

    # index ranges of 𝒫₀, 𝒫̂, 𝒫₁ and of H₀
    @property
    def s0(self) -> slice:
        return slice(0, self.dim_h)

    @property
    def shat(self) -> slice:
        return slice(self.dim_h, self.dim_h0)

    @property
    def s1(self) -> slice:
        return slice(self.dim_h0, self.dim_total)

    def p_h0_h(self) -> np.ndarray:
        """P_{H₀,H}: H₀ → H (h × h₀)."""
        return np.eye(self.dim_h, self.dim_h0, dtype=complex)

    def i_h_h0(self) -> np.ndarray:
        """I_{H,H₀}: H → H₀ (h₀ × h)."""
        return np.eye(self.dim_h0, self.dim_h, dtype=complex)

    def p_hat(self) -> np.ndarray:
        """P_Ĥ as an operator on H₀ (h₀ × h₀)."""
        p = np.zeros((self.dim_h0, self.dim_h0), dtype=complex)
        p[self.shat, self.shat] = np.eye(self.dim_hhat)
        return p

    def p_h0_hhat(self) -> np.ndarray:
        """P_{H₀,Ĥ}: H₀ → Ĥ (ĥ × h₀)."""
        return np.eye(self.dim_h0, dtype=complex)[self.shat, :]


def _three_block_structure(n_outer: int, n_middle: int) -> np.ndarray:
    n = 2 * n_outer + n_middle
    j = np.zeros((n, n), dtype=complex)
    j[:n_outer, n_outer + n_middle:] = -np.eye(n_outer)
    j[n_outer:n_outer + n_middle, n_outer:n_outer + n_middle] = 1j * np.eye(n_middle)
    j[n_outer + n_middle:, :n_outer] = np.eye(n_outer)
    return j


def canonical_J(dec: SpaceDecomposition) -> np.ndarray:
    """[[0, 0, -I_H], [0, iI_Ĥ, 0], [I_H, 0, 0]] on H ⊕ Ĥ ⊕ H."""
    return _three_block_structure(dec.dim_h, dec.dim_hhat)


def boundary_J_b(dim_hb: int, dim_hbperp: int, dim_hhat: int) -> np.ndarray:
    """J_b on ℋ_b ⊕ (ℋ_b^⊥ ⊕ Ĥ) ⊕ ℋ_b."""
    if min(dim_hb, dim_hbperp, dim_hhat) < 0:
        raise CoefficientError("boundary dimensions must be non-negative")
    return _three_block_structure(dim_hb, dim_hbperp + dim_hhat)
