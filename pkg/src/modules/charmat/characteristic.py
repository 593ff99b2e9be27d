"""Characteristic matrices Ω_τ(λ) by the correction and Krein-type formulas.

Everything here works on ``WeylBlocks`` so numeric (equal-index) and
synthetic (rectangular) Weyl data share one code path:

    Ω₀ = [[m₀, −½I_{H,H₀}], [−½P_{H₀,H}, 0]]
    S₁ = [[m₀ − (i/2)P_Ĥ, M₂₊], [−P_{H₀,H}, 0]]
    S₂ = [[m₀ + (i/2)P_Ĥ, −I_{H,H₀}], [M₃₊, 0]]
    T_τ = (C₀ − C₁M₊)⁻¹C₁
    Ω_τ = Ω₀ + S₁T_τS₂
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from modules.parameters.boundary_parameter import BoundaryParameter
from modules.triplet.weyl import WeylBlocks
from modules.utils.errors import CoefficientError, OperatorFormError
from modules.utils.linalg import guarded_solve
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


class WeylSource(Protocol):
    """Anything that yields Weyl blocks at λ (``WeylFunction``, ``SyntheticWeylData``)."""

    def blocks(self, lam: complex) -> WeylBlocks: ...


def omega0(bl: WeylBlocks) -> np.ndarray:
    dec = bl.decomposition
    h = bl.dim_h
    return np.block([
        [bl.m0, -0.5 * dec.i_h_h0()],
        [-0.5 * dec.p_h0_h(), np.zeros((h, h), dtype=complex)],
    ])


def s_factors(bl: WeylBlocks) -> tuple[np.ndarray, np.ndarray]:
    """(S₁(λ), S₂(λ)); in the equal-index case S₂(λ) = S₁(λ̄)*."""
    dec = bl.decomposition
    h = bl.dim_h
    half_p = 0.5j * dec.p_hat()
    s1 = np.block([
        [bl.m0 - half_p, bl.M2],
        [-dec.p_h0_h(), np.zeros((h, bl.htb), dtype=complex)],
    ])
    s2 = np.block([
        [bl.m0 + half_p, -dec.i_h_h0()],
        [bl.M3, np.zeros((bl.hb, h), dtype=complex)],
    ])
    return s1, s2


def check_fit(tau: BoundaryParameter, bl: WeylBlocks) -> None:
    if (tau.dim0, tau.dim1) != (bl.n0, bl.n1):
        raise CoefficientError(
            f"τ acts on ({tau.dim0}, {tau.dim1}) but the Weyl data on ({bl.n0}, {bl.n1})", provenance="charmat")


def t_tau(tau: BoundaryParameter, bl: WeylBlocks, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """T_τ(λ) = (C₀(λ) − C₁(λ)M₊(λ))⁻¹C₁(λ).

    Raises:
        IllConditionedError: If C₀ − C₁M₊ is not boundedly invertible (τ inadmissible
            or numeric breakdown).
    """
    check_fit(tau, bl)
    c0, c1 = tau.pair(bl.lam)
    return guarded_solve(c0 - c1 @ bl.M, c1, label="C0 - C1 M", eps_cond=tol.cond)


def t_tau_operator(tau: BoundaryParameter, bl: WeylBlocks, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """−(τ(λ) + M(λ))⁻¹ for operator-valued τ (equal index)."""
    check_fit(tau, bl)
    op = tau.operator(bl.lam, eps_cond=tol.cond)
    return -guarded_solve(op + bl.M, np.eye(bl.n0, dtype=complex), label="tau + M", eps_cond=tol.cond)


def omega_tau(tau: BoundaryParameter, bl: WeylBlocks, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Ω_τ(λ) = Ω₀(λ) + S₁(λ)T_τ(λ)S₂(λ)."""
    s1, s2 = s_factors(bl)
    return omega0(bl) + s1 @ t_tau(tau, bl, tol) @ s2


def omega_tau_krein(tau: BoundaryParameter, source: WeylSource, lam: complex,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Ω₀(λ) − S(λ)(τ(λ) + M(λ))⁻¹S(λ̄)* (equal index, τ operator-valued at λ).

    Raises:
        OperatorFormError: If τ has a multivalued part or the data is rectangular.
    """
    bl = source.blocks(lam)
    if not bl.equal_index:
        raise OperatorFormError("the Krein-type formula needs equal deficiency indices")
    bl_conj = source.blocks(np.conj(lam))
    s, _ = s_factors(bl)
    s_conj, _ = s_factors(bl_conj)
    return omega0(bl) + s @ t_tau_operator(tau, bl, tol) @ s_conj.conj().T


def omega_tau_at(tau: BoundaryParameter, source: WeylSource, lam: complex,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Ω_τ(λ) on both half-planes; rectangular data in ℂ₋ goes through Ω_τ(λ̄)*."""
    lam = complex(lam)
    if lam.imag < 0:
        bl_conj = source.blocks(lam.conjugate())
        if not bl_conj.equal_index:
            return omega_tau(tau, bl_conj, tol).conj().T
    return omega_tau(tau, source.blocks(lam), tol)
