"""Synthetic rectangular Weyl data (h_b ≤ h̃_b) with an explicit γ-Gram.

There is no singular ODE backend for unequal indices, so the rectangular
calculus runs on data that satisfies the Weyl identity by construction:

- ``embedded_weyl_data``: numeric equal-index data padded with ``extra`` zero
  columns, M₊ = [M, 0]; the padding contributes i/(μ − λ̄)·I to the Gram.
- ``random_model_weyl_data``: a finite model with Hermitian K (N × N),
  G (N × n₁), Hermitian A₀ and c (n₂ × n₁), n₂ = h̃_b − h_b,
  M₊(μ) = [G*(K − μ)⁻¹G + A₀ + (i/2)c*c,  i c*].
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from modules.parameters.boundary_parameter import BoundaryParameter
from modules.parameters.interface_pair import to_interface_pair
from modules.systems.structure import SpaceDecomposition, canonical_J
from modules.triplet.weyl import WeylBlocks, WeylFunction
from modules.utils.errors import CoefficientError
from modules.utils.linalg import guarded_solve, hermitian_part, imag_part, min_eigenvalue, spectral_norm
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, slots=True)
class SyntheticWeylData:
    dim_h: int
    dim_hhat: int
    hb: int
    htb: int
    mplus: Callable[[complex], np.ndarray]
    gram: Callable[[complex, complex], np.ndarray] | None = None
    label: str = "synthetic"

    def __post_init__(self) -> None:
        if not 0 <= self.hb <= self.htb:
            raise CoefficientError(f"need 0 ≤ h_b ≤ h̃_b, got {self.hb}, {self.htb}")

    @property
    def decomposition(self) -> SpaceDecomposition:
        return SpaceDecomposition(self.dim_h, self.dim_hhat)

    def blocks(self, lam: complex) -> WeylBlocks:
        return WeylBlocks(complex(lam), self.dim_h, self.dim_hhat, self.hb, self.htb,
                          np.asarray(self.mplus(complex(lam)), dtype=complex))


def embedded_weyl_data(wf: WeylFunction, extra: int) -> SyntheticWeylData:
    """Pad numeric Weyl data to h̃_b = h_b + ``extra``."""
    dec = wf.solver.system.decomposition
    h = dec.dim_h

    def mplus(lam: complex) -> np.ndarray:
        m = wf(lam)
        return np.hstack([m, np.zeros((m.shape[0], extra), dtype=complex)])

    def gram(lam: complex, mu: complex) -> np.ndarray:
        g = wf.gram(lam, mu)
        n = g.shape[0]
        out = np.zeros((n + extra, n + extra), dtype=complex)
        out[:n, :n] = g
        out[n:, n:] = 1j / (mu - np.conj(lam)) * np.eye(extra)
        return out

    return SyntheticWeylData(h, dec.dim_hhat, h, h + extra, mplus, gram, label=f"embedded+{extra}")


def random_model_weyl_data(rng: np.random.Generator, dim_h: int, dim_hhat: int, hb: int, htb: int,
                           model_size: int = 6) -> SyntheticWeylData:
    """Finite-model rectangular Weyl data; the Weyl identity holds exactly."""
    h0 = dim_h + dim_hhat
    n1, n2 = h0 + hb, htb - hb
    if n2 < 0:
        raise CoefficientError("h̃_b must be at least h_b")

    def crandn(*shape: int) -> np.ndarray:
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    k = hermitian_part(crandn(model_size, model_size))
    g = crandn(model_size, n1) / np.sqrt(model_size)
    a0 = hermitian_part(crandn(n1, n1)) / 2
    c = crandn(n2, n1) / 2
    eye_n = np.eye(model_size)

    def resolvent(z: complex) -> np.ndarray:
        return np.linalg.solve(k - z * eye_n, g)

    def mplus(mu: complex) -> np.ndarray:
        top = g.conj().T @ resolvent(mu) + a0 + 0.5j * c.conj().T @ c
        return np.hstack([top, 1j * c.conj().T])

    def gram(lam: complex, mu: complex) -> np.ndarray:
        d = mu - np.conj(lam)
        g11 = resolvent(lam).conj().T @ resolvent(mu) + 1j * c.conj().T @ c / d
        return np.block([[g11, 1j * c.conj().T / d], [1j * c / d, 1j * np.eye(n2) / d]])

    return SyntheticWeylData(dim_h, dim_hhat, hb, htb, mplus, gram, label="random-model")


def synthetic_identity_residual(syn: SyntheticWeylData, lam: complex, mu: complex) -> float:
    """‖M̃(μ) − M̃(λ)*P₁ + iP₂ − (μ − λ̄)gram(λ, μ)‖ with M̃ = M₊ padded to n₀ × n₀."""
    if syn.gram is None:
        raise CoefficientError(f"{syn.label} carries no Gram data")
    bl, bm = syn.blocks(lam), syn.blocks(mu)
    p1, p2 = bm.projections()
    lhs = bm.padded() - bl.padded().conj().T @ p1 + 1j * p2
    return spectral_norm(lhs - (mu - np.conj(lam)) * syn.gram(lam, mu))


def synthetic_imag_bound(tau: BoundaryParameter, syn: SyntheticWeylData, lam: complex,
                         omega: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Smallest eigenvalue of (Im λ)⁻¹Im Ω_τ(λ) − V*gram(λ,λ)V, V = (C₀ − C₁M₊)⁻¹C_aJ.

    This is the Gram of Z_τ = −Z₊V written through the model Gram of Z₊.
    """
    if syn.gram is None:
        raise CoefficientError(f"{syn.label} carries no Gram data")
    blocks = syn.blocks(lam)
    c0, c1 = tau.pair(lam)
    k = c0 - c1 @ blocks.M
    ip = to_interface_pair(tau, syn.decomposition, lam)
    v = guarded_solve(k, ip.C_a @ canonical_J(syn.decomposition), label="C0 - C1 M", eps_cond=tol.cond)
    diff = imag_part(omega) / complex(lam).imag - v.conj().T @ syn.gram(lam, lam) @ v
    return min_eigenvalue(diff)
