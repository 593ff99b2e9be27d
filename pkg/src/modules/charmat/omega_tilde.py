"""The block operator Ω̃_τ(λ): ℋ₀ ⊕ ℋ₁ → ℋ₁ ⊕ ℋ₀ and its compression to Ω_τ.

Ω̃_τ = [[ω₁, ω₂], [ω₃, ω₄]] is assembled twice:

- through W = (τ + M₊)⁻¹, taken from a kernel basis (U₀; U₁) of (C₀, C₁) so
  multivalued τ needs no special case: W = U₀(U₁ + M₊U₀)⁻¹ and
  ω₁ = M₊ − M₊WM₊, ω₂ = −½I + M₊W, ω₃ = −½I + WM₊, ω₄ = −W;
- through K = C₀ − C₁M₊: ω₁ = M₊K⁻¹C₀, ω₂ = −½I − M₊K⁻¹C₁,
  ω₃ = ½I − K⁻¹C₀, ω₄ = K⁻¹C₁.

The second assembly is returned; the distance between both is kept as a
consistency residual. Ω_τ = X₁Ω̃_τX₂*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as spla

from modules.charmat.characteristic import check_fit
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.triplet.weyl import WeylBlocks
from modules.utils.errors import CoefficientError
from modules.utils.linalg import guarded_solve, spectral_norm
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, slots=True)
class OmegaTilde:
    lam: complex
    value: np.ndarray
    resolvent_form: np.ndarray
    display_residual: float


def omega_tilde(tau: BoundaryParameter, bl: WeylBlocks, tol: Tolerances = DEFAULT_TOLERANCES) -> OmegaTilde:
    check_fit(tau, bl)
    c0, c1 = tau.pair(bl.lam)
    m = bl.M
    n0, n1 = bl.n0, bl.n1

    basis = spla.null_space(np.hstack([c0, c1]))
    if basis.shape[1] != n1:
        raise CoefficientError(f"τ has a kernel of dimension {basis.shape[1]}, expected {n1}", provenance="charmat")
    u0, u1 = basis[:n0], basis[n0:]
    w = u0 @ guarded_solve(u1 + m @ u0, np.eye(n1, dtype=complex), label="U1 + M U0", eps_cond=tol.cond)
    by_w = np.block([
        [m - m @ w @ m, -0.5 * np.eye(n1) + m @ w],
        [-0.5 * np.eye(n0) + w @ m, -w],
    ])

    k = c0 - c1 @ m
    kc0 = guarded_solve(k, c0, label="C0 - C1 M", eps_cond=tol.cond)
    kc1 = guarded_solve(k, c1, label="C0 - C1 M", eps_cond=tol.cond)
    by_k = np.block([
        [m @ kc0, -0.5 * np.eye(n1) - m @ kc1],
        [0.5 * np.eye(n0) - kc0, kc1],
    ])
    return OmegaTilde(bl.lam, by_k, by_w, spectral_norm(by_k - by_w))


def compression_X(bl: WeylBlocks) -> tuple[np.ndarray, np.ndarray]:
    """(X₁, X₂) with
    X₁ = [[P_{ℋ₁,H₀}, (i/2)P_Ĥ P_{ℋ₀,H₀}], [0, P_{ℋ₀,H}]],
    X₂ = [[P_{ℋ₀,H₀}, (i/2)P_Ĥ P_{ℋ₁,H₀}], [0, P_{ℋ₁,H}]].
    """
    dec = bl.decomposition
    h, h0 = bl.dim_h, bl.h0
    p_hat = dec.p_hat()

    def proj(dim_from: int, dim_to: int) -> np.ndarray:
        return np.eye(dim_to, dim_from, dtype=complex)

    x1 = np.block([
        [proj(bl.n1, h0), 0.5j * p_hat @ proj(bl.n0, h0)],
        [np.zeros((h, bl.n1), dtype=complex), proj(bl.n0, h)],
    ])
    x2 = np.block([
        [proj(bl.n0, h0), 0.5j * p_hat @ proj(bl.n1, h0)],
        [np.zeros((h, bl.n0), dtype=complex), proj(bl.n1, h)],
    ])
    return x1, x2


def compress(value: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """X₁ Ω̃ X₂*."""
    if x1.shape[1] != value.shape[0] or x2.shape[1] != value.shape[1]:
        raise CoefficientError(f"cannot compress Ω̃ {value.shape} with X₁ {x1.shape}, X₂ {x2.shape}",
                               provenance="charmat")
    return x1 @ value @ x2.conj().T
