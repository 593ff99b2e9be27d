"""Interface form (C_a(λ), C_b(λ)) of a boundary parameter.

C_a = (−C₁a, iĈ₀ − ½Ĉ₁, −C₀a),   C_b = (C₀b, −iĈ₀ − ½Ĉ₁, C₁b)

where the columns of C₀ split along H | Ĥ | ℋ̃_b and those of C₁ along
H | Ĥ | ℋ_b. The boundary condition C₀Γ₀y − C₁Γ₁y = 0 becomes
C_a y(a) + C_b Γ_b y = 0.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from modules.parameters.boundary_parameter import BoundaryParameter
from modules.systems.structure import SpaceDecomposition, boundary_J_b, canonical_J
from modules.utils.errors import AdmissibilityError
from modules.utils.linalg import min_eigenvalue, spectral_norm
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class InterfacePair:
    lam: complex
    decomposition: SpaceDecomposition
    hb: int
    htb: int
    C_a: np.ndarray
    C_b: np.ndarray

    @property
    def equal_index(self) -> bool:
        return self.hb == self.htb

    @property
    def J_b(self) -> np.ndarray:
        return boundary_J_b(self.hb, self.htb - self.hb, self.decomposition.dim_hhat)

    def residual(self, y_a: np.ndarray, y_b: np.ndarray) -> float:
        """‖C_a y(a) + C_b Γ_b y‖ (regular endpoint: Γ_b y = y(b))."""
        return spectral_norm(self.C_a @ y_a + self.C_b @ y_b)


def _dims(tau: BoundaryParameter, dec: SpaceDecomposition) -> tuple[int, int]:
    h0 = dec.dim_h0
    htb, hb = tau.dim0 - h0, tau.dim1 - h0
    if hb < 0 or htb < hb:
        raise AdmissibilityError(
            f"τ on ({tau.dim0}, {tau.dim1}) does not fit H₀ of dimension {h0}", condition="shape")
    return hb, htb


def to_interface_pair(tau: BoundaryParameter, dec: SpaceDecomposition, lam: complex = 1j) -> InterfacePair:
    """Blockwise transform of (C₀(λ), C₁(λ)) into (C_a(λ), C_b(λ))."""
    hb, htb = _dims(tau, dec)
    if hb != dec.dim_h and htb == hb:
        raise AdmissibilityError(f"equal-index τ needs ℋ_b of dimension {dec.dim_h}, got {hb}", condition="shape")
    c0, c1 = tau.pair(lam)
    h, h0 = dec.dim_h, dec.dim_h0
    c0a, c0hat, c0b = c0[:, :h], c0[:, h:h0], c0[:, h0:]
    c1a, c1hat, c1b = c1[:, :h], c1[:, h:h0], c1[:, h0:]
    c_a = np.hstack([-c1a, 1j * c0hat - 0.5 * c1hat, -c0a])
    c_b = np.hstack([c0b, -1j * c0hat - 0.5 * c1hat, c1b])
    return InterfacePair(complex(lam), dec, hb, htb, c_a, c_b)


def from_interface_pair(pair: InterfacePair) -> tuple[np.ndarray, np.ndarray]:
    """Inverse transform: (C_a, C_b) ↦ (C₀, C₁)."""
    dec = pair.decomposition
    hh = dec.dim_hhat
    c_a, c_b = pair.C_a, pair.C_b
    a_hat, b_hat = c_a[:, dec.shat], c_b[:, pair.htb:pair.htb + hh]
    c1hat = -(a_hat + b_hat)
    c0hat = (a_hat - b_hat) / 2j
    c0 = np.hstack([-c_a[:, dec.s1], c0hat, c_b[:, :pair.htb]])
    c1 = np.hstack([-c_a[:, dec.s0], c1hat, c_b[:, pair.htb + hh:]])
    return c0, c1


# -----------------------------------------------------------------------------
# Admissibility
# -----------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class AdmissibilitySample:
    lam: complex
    rank: int
    expected_rank: int
    sign_min_eig: float
    coupling_defect: float | None
    passed: bool


@dataclass(frozen=True, slots=True)
class AdmissibilityReport:
    samples: tuple[AdmissibilitySample, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.samples)

    def failures(self) -> list[str]:
        out = []
        for s in self.samples:
            if s.rank != s.expected_rank:
                out.append(f"λ={s.lam}: rank {s.rank} ≠ {s.expected_rank}")
            if not s.passed and s.rank == s.expected_rank:
                out.append(f"λ={s.lam}: sign {s.sign_min_eig:.3e}, coupling {s.coupling_defect}")
        return out


def _sample(ip: InterfacePair, ip_conj: InterfacePair | None, tol: Tolerances) -> AdmissibilitySample:
    j = canonical_J(ip.decomposition)
    jb = ip.J_b
    expected = ip.C_a.shape[0]
    rank = int(np.linalg.matrix_rank(np.hstack([ip.C_a, ip.C_b]), tol=tol.adm))
    form = ip.C_a @ j @ ip.C_a.conj().T - ip.C_b @ jb @ ip.C_b.conj().T
    if ip.lam.imag == 0.0:
        sign_val = -spectral_norm(form)
    else:
        sign_val = min_eigenvalue(1j * np.sign(ip.lam.imag) * form)
    coupling = None
    if ip.equal_index and ip_conj is not None:
        coupling = spectral_norm(ip.C_a @ j @ ip_conj.C_a.conj().T - ip.C_b @ jb @ ip_conj.C_b.conj().T)
    ok = rank == expected and sign_val >= -tol.adm and (coupling is None or coupling <= tol.adm)
    return AdmissibilitySample(ip.lam, rank, expected, sign_val, coupling, ok)


def _report(samples: list[AdmissibilitySample], label: str) -> AdmissibilityReport:
    report = AdmissibilityReport(tuple(samples))
    if report.passed:
        logger.debug("✅ %s admissible at %d sample points", label, len(samples))
    else:
        logger.warning("⚠️ %s fails admissibility: %s", label, "; ".join(report.failures()))
    return report


def check_admissibility(tau: BoundaryParameter, dec: SpaceDecomposition, lams: Iterable[complex],
                        tol: Tolerances = DEFAULT_TOLERANCES) -> AdmissibilityReport:
    """Per sampled λ: rank(C_a, C_b) = dim ℋ₀, i·sgn(Im λ)(C_aJC_a* − C_bJ_bC_b*) ⪰ 0 and,
    for equal indices, C_a(λ)JC_a(λ̄)* = C_b(λ)J_bC_b(λ̄)*.

    At real λ the sign form must vanish instead of being semi-definite.
    """
    samples = []
    for lam in lams:
        lam = complex(lam)
        ip = to_interface_pair(tau, dec, lam)
        ip_conj = to_interface_pair(tau, dec, lam.conjugate()) if ip.equal_index else None
        samples.append(_sample(ip, ip_conj, tol))
    return _report(samples, f"τ={tau.label or tau.kind.value}")


def check_interface_pair(ip: InterfacePair, tol: Tolerances = DEFAULT_TOLERANCES) -> AdmissibilityReport:
    """Admissibility of a constant interface pair given directly (C_a(λ̄) = C_a(λ))."""
    return _report([_sample(ip, ip, tol)], "interface pair")
