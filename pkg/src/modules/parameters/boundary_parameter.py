"""Boundary parameters τ = {(C₀(λ), C₁(λ)); ℋ}.

Convention: τ(λ) = {(h₀, h₁) : C₀(λ)h₀ + C₁(λ)h₁ = 0}. The boundary condition
attached to τ is C₀Γ₀y − C₁Γ₁y = 0. Under it (I, 0) is the purely
multivalued relation and (0, I) the zero operator.

Key behaviors:
- Three representations: a constant self-adjoint pair, a constant
  (possibly dissipative or rectangular) pair and a rational Nevanlinna
  function τ(λ) = A + Bλ + Σ α_j((t_j − λ)⁻¹ − t_j(1 + t_j²)⁻¹) exposed as the
  pair (τ(λ), −I).
- Constructors raise ``AdmissibilityError`` naming the violated condition.
- Pairs are compared through the orthogonal projector onto their row space.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as spla
from scipy.stats import unitary_group

from modules.utils.errors import AdmissibilityError, OperatorFormError
from modules.utils.linalg import (
    condition_number,
    hermitian_part,
    imag_part,
    min_eigenvalue,
    row_projector,
    spectral_norm,
)
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


class ParameterKind(str, Enum):
    constant_selfadjoint = "constant-self-adjoint"
    constant_pair = "constant-pair"
    rational = "rational-nevanlinna"

    @classmethod
    def coerce(cls, value: "ParameterKind | str") -> "ParameterKind":
        if isinstance(value, cls):
            return value
        raw = str(value).strip().lower()
        aliases = {
            "constant": cls.constant_selfadjoint,
            "constant-self-adjoint": cls.constant_selfadjoint,
            "selfadjoint": cls.constant_selfadjoint,
            "pair": cls.constant_pair,
            "constant-pair": cls.constant_pair,
            "rational": cls.rational,
            "rational-nevanlinna": cls.rational,
        }
        try:
            return aliases[raw]
        except KeyError as exc:
            raise ValueError(f"Invalid ParameterKind {value!r}. Valid: {sorted(aliases)}") from exc


@dataclass(frozen=True, slots=True)
class RationalTerm:
    pole: float
    residue: np.ndarray


@dataclass(frozen=True, slots=True)
class BoundaryParameter:
    """A Nevanlinna boundary parameter; C₀ is n₀ × n₀ and C₁ is n₀ × n₁ (n₁ ≤ n₀)."""

    kind: ParameterKind
    dim0: int
    dim1: int
    C0: np.ndarray | None = None
    C1: np.ndarray | None = None
    A: np.ndarray | None = None
    B: np.ndarray | None = None
    terms: tuple[RationalTerm, ...] = ()
    label: str = ""

    @property
    def equal_index(self) -> bool:
        return self.dim0 == self.dim1

    @property
    def is_constant(self) -> bool:
        return self.kind is not ParameterKind.rational

    @property
    def is_self_adjoint(self) -> bool:
        """True for parameters that define canonical (not generalized) resolvents."""
        if self.kind is ParameterKind.constant_selfadjoint:
            return True
        if self.kind is ParameterKind.constant_pair:
            return self.equal_index and spectral_norm(imag_part(self.C1 @ self.C0.conj().T)) <= DEFAULT_TOLERANCES.adm
        return not self.terms and spectral_norm(self.B) == 0.0

    def tau(self, lam: complex) -> np.ndarray:
        """τ(λ) for the rational representation."""
        if self.kind is not ParameterKind.rational:
            raise OperatorFormError("tau() is only defined for rational parameters; use operator()")
        lam = complex(lam)
        out = self.A + lam * self.B
        for term in self.terms:
            t = term.pole
            out = out + term.residue * (1.0 / (t - lam) - t / (1.0 + t * t))
        return out

    def pair(self, lam: complex = 1j) -> tuple[np.ndarray, np.ndarray]:
        """(C₀(λ), C₁(λ)); an equal-index constant pair θ stands for θ* in ℂ₋."""
        if self.kind is ParameterKind.rational:
            return self.tau(lam), -np.eye(self.dim0, dtype=complex)
        if self.kind is ParameterKind.constant_pair and self.equal_index and complex(lam).imag < 0:
            return self.adjoint_pair()
        return self.C0, self.C1

    def adjoint_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """θ* = ker(U₁*, −U₀*) where the columns of (U₀; U₁) span θ = ker(C₀, C₁)."""
        n = self.dim0
        basis = spla.null_space(np.hstack([self.C0, self.C1]))
        u0, u1 = basis[:n], basis[n:]
        return u1.conj().T, -u0.conj().T

    def operator(self, lam: complex = 1j, *, eps_cond: float = DEFAULT_TOLERANCES.cond) -> np.ndarray:
        """The operator form τ(λ) = −C₁⁻¹C₀.

        Raises:
            OperatorFormError: If C₁(λ) is not (well-)invertible, i.e. τ has a multivalued part.
        """
        if self.kind is ParameterKind.rational:
            return self.tau(lam)
        c0, c1 = self.pair(lam)
        if c1.shape[0] != c1.shape[1] or condition_number(c1) > 1.0 / eps_cond:
            raise OperatorFormError(f"τ={self.label or self.kind.value} has no operator form (C₁ singular)")
        return -np.linalg.solve(c1, c0)


# -----------------------------------------------------------------------------
# Constructors
# -----------------------------------------------------------------------------

def _as_matrix(m, what: str) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise AdmissibilityError(f"{what} must be a matrix, got shape {a.shape}", condition="shape")
    return a


def make_constant_selfadjoint(C0, C1, *, tol: Tolerances = DEFAULT_TOLERANCES,
                              label: str = "") -> BoundaryParameter:
    """Accept (C₀, C₁) iff Im(C₁C₀*) = 0 and C₀ ± iC₁ are invertible.

    Raises:
        AdmissibilityError: Naming the violated condition.
    """
    c0, c1 = _as_matrix(C0, "C0"), _as_matrix(C1, "C1")
    n = c0.shape[0]
    if c0.shape != (n, n) or c1.shape != (n, n):
        raise AdmissibilityError(f"C0 {c0.shape} and C1 {c1.shape} must be square of equal size", condition="shape")
    defect = spectral_norm(imag_part(c1 @ c0.conj().T))
    if defect > tol.adm:
        raise AdmissibilityError(f"Im(C1 C0*) has norm {defect:.3e}", condition="Im(C1C0*)=0")
    for sign, name in ((1, "C0+iC1"), (-1, "C0-iC1")):
        smin = float(np.linalg.svd(c0 + sign * 1j * c1, compute_uv=False)[-1])
        if smin < tol.adm:
            raise AdmissibilityError(f"{name} is singular (σ_min={smin:.3e})", condition=f"0∈ρ({name})")
    return BoundaryParameter(ParameterKind.constant_selfadjoint, n, n, c0, c1, label=label)


def make_constant_pair(C0, C1, *, tol: Tolerances = DEFAULT_TOLERANCES, label: str = "") -> BoundaryParameter:
    """A constant Nevanlinna pair, possibly dissipative and rectangular (C₁ is n₀ × n₁, n₁ ≤ n₀).

    Conditions: rank(C₀, C₁) = n₀ and 2 Im(C₁C₀₁*) + C₀₂C₀₂* ⪰ 0 where C₀ = (C₀₁, C₀₂)
    splits the columns along ℋ₀ = ℋ₁ ⊕ ℋ₁^⊥.
    """
    c0, c1 = _as_matrix(C0, "C0"), _as_matrix(C1, "C1")
    n0, n1 = c0.shape[0], c1.shape[1]
    if c0.shape != (n0, n0) or c1.shape[0] != n0 or n1 > n0:
        raise AdmissibilityError(f"C0 {c0.shape} / C1 {c1.shape} do not form a pair on ℋ₀ ⊇ ℋ₁", condition="shape")
    rank = int(np.linalg.matrix_rank(np.hstack([c0, c1]), tol=tol.adm))
    if rank != n0:
        raise AdmissibilityError(f"rank(C0, C1) = {rank} < {n0}", condition="rank(C0,C1)=dim ℋ₀")
    c01, c02 = c0[:, :n1], c0[:, n1:]
    form = 2.0 * imag_part(c1 @ c01.conj().T) + c02 @ c02.conj().T
    lo = min_eigenvalue(form)
    if lo < -tol.adm:
        raise AdmissibilityError(f"pair is not dissipative (eigenvalue {lo:.3e})", condition="Nevanlinna sign")
    kind = ParameterKind.constant_pair
    return BoundaryParameter(kind, n0, n1, c0, c1, label=label)


def make_rational_nevanlinna(A, B, residues: Sequence = (), poles: Sequence[float] = (), *,
                             tol: Tolerances = DEFAULT_TOLERANCES, label: str = "") -> BoundaryParameter:
    """τ(λ) = A + Bλ + Σ α_j((t_j − λ)⁻¹ − t_j(1 + t_j²)⁻¹) with A = A*, B ⪰ 0, α_j ⪰ 0, t_j real and distinct."""
    a, b = _as_matrix(A, "A"), _as_matrix(B, "B")
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n, n):
        raise AdmissibilityError("A and B must be square of equal size", condition="shape")
    if spectral_norm(a - a.conj().T) > tol.adm:
        raise AdmissibilityError("A is not Hermitian", condition="A=A*")
    if spectral_norm(b - b.conj().T) > tol.adm or min_eigenvalue(b) < -tol.adm:
        raise AdmissibilityError("B is not positive semi-definite", condition="B⪰0")
    if len(residues) != len(poles):
        raise AdmissibilityError("one residue per pole is required", condition="shape")
    pole_list = [float(t) for t in poles]
    if len(set(pole_list)) != len(pole_list):
        raise AdmissibilityError("poles must be distinct", condition="distinct poles")
    terms = []
    for t, r in zip(pole_list, residues):
        alpha = _as_matrix(r, "residue")
        if alpha.shape != (n, n) or spectral_norm(alpha - alpha.conj().T) > tol.adm or min_eigenvalue(alpha) < -tol.adm:
            raise AdmissibilityError(f"residue at pole {t} is not positive semi-definite", condition="α_j⪰0")
        terms.append(RationalTerm(t, hermitian_part(alpha)))
    return BoundaryParameter(ParameterKind.rational, n, n, A=hermitian_part(a), B=hermitian_part(b),
                             terms=tuple(terms), label=label)


def pad_to_rectangular(tau: BoundaryParameter, extra: int, *, tol: Tolerances = DEFAULT_TOLERANCES) -> BoundaryParameter:
    """Embed an equal-index constant pair into ℋ₀ = ℋ₁ ⊕ ℂ^extra: C₀ ↦ diag(C₀, I), C₁ ↦ (C₁; 0)."""
    if not tau.is_constant or not tau.equal_index:
        raise AdmissibilityError("only equal-index constant pairs can be padded", condition="shape")
    n = tau.dim0
    c0 = np.zeros((n + extra, n + extra), dtype=complex)
    c0[:n, :n] = tau.C0
    c0[n:, n:] = np.eye(extra)
    c1 = np.zeros((n + extra, n), dtype=complex)
    c1[:n] = tau.C1
    return make_constant_pair(c0, c1, tol=tol, label=f"{tau.label}+pad{extra}")


def random_selfadjoint(rng: np.random.Generator, n: int, *, tol: Tolerances = DEFAULT_TOLERANCES) -> BoundaryParameter:
    """Cayley parametrization C₀ = I + U, C₁ = i(I − U) with Haar-random unitary U."""
    u = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    eye = np.eye(n, dtype=complex)
    return make_constant_selfadjoint(eye + u, 1j * (eye - u), tol=tol, label="random")


# -----------------------------------------------------------------------------
# Pair equivalence
# -----------------------------------------------------------------------------

def canonicalize(C0: np.ndarray, C1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormalize the rows of (C₀, C₁); equivalent pairs map to unitarily related results."""
    stacked = np.hstack([C0, C1])
    q, _ = np.linalg.qr(stacked.conj().T)
    rows = q[:, :stacked.shape[0]].conj().T
    return rows[:, :C0.shape[1]], rows[:, C0.shape[1]:]


def pairs_equivalent(first: tuple[np.ndarray, np.ndarray], second: tuple[np.ndarray, np.ndarray],
                     tol: float = DEFAULT_TOLERANCES.equiv) -> bool:
    """True when both pairs have the same row space (C ~ XC for invertible X)."""
    p = row_projector(np.hstack(canonicalize(*first)))
    q = row_projector(np.hstack(canonicalize(*second)))
    return p.shape == q.shape and spectral_norm(p - q) <= tol
