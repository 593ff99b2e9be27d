"""Small dense linear-algebra helpers with conditioning guards."""

from __future__ import annotations

import numpy as np
import scipy.linalg as spla

from modules.utils.errors import IllConditionedError, SpectralCollisionError
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


def condition_number(a: np.ndarray, scale: float | None = None) -> float:
    """2-norm condition number; ``inf`` for exactly singular input.

    With ``scale`` the result is ``scale / σ_min(a)``: conditioning relative to
    the magnitude of the data the matrix was assembled from, which is what
    matters for small boundary matrices (a 1 × 1 matrix always has cond 1).
    """
    if a.size == 0:
        return 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if scale is None:
            c = float(np.linalg.cond(a))
        else:
            smin = float(spla.svdvals(a)[-1])
            c = float(scale) / smin if smin > 0.0 else float("inf")
    return c if np.isfinite(c) else float("inf")


def guarded_solve(
    a: np.ndarray,
    b: np.ndarray,
    *,
    label: str,
    eps_cond: float,
    spectral: bool = False,
    scale: float | None = None,
) -> np.ndarray:
    """Solve ``a x = b`` by pivoted LU, refusing when cond(a) > 1/eps_cond.

    Args:
        a: Square coefficient matrix.
        b: Right-hand side (vector or matrix).
        label: Name of the system, used in diagnostics.
        eps_cond: Inverse condition threshold.
        spectral: Raise ``SpectralCollisionError`` instead of the plain
            ``IllConditionedError`` (the matrix is a boundary matrix whose
            singularity means λ is an eigenvalue).
        scale: Reference magnitude for a relative condition estimate
            (see ``condition_number``).

    Raises:
        IllConditionedError: If the condition estimate exceeds 1/eps_cond.
    """
    cond = condition_number(a, scale)
    if cond > 1.0 / eps_cond:
        exc = SpectralCollisionError if spectral else IllConditionedError
        logger.warning("⚠️ %s is ill-conditioned (cond=%.3e)", label, cond)
        raise exc(f"{label}: condition number {cond:.3e} exceeds {1.0 / eps_cond:.1e}",
                  cond=cond, label=label)
    lu, piv = spla.lu_factor(a)
    return spla.lu_solve((lu, piv), b)


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def imag_part(a: np.ndarray) -> np.ndarray:
    """Operator imaginary part (A - A*)/(2i)."""
    return (a - a.conj().T) / 2j


def min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``h``."""
    if h.size == 0:
        return 0.0
    return float(spla.eigvalsh(hermitian_part(h))[0])


def row_projector(rows: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the row space of ``rows`` (conjugate-linear convention)."""
    basis = spla.orth(rows.conj().T)
    return basis @ basis.conj().T


def spectral_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0
