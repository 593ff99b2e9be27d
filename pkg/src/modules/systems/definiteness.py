"""Numeric definiteness test.

A system is definite when Δy ≡ 0 forces y ≡ 0 for homogeneous solutions.
With y = Y₀h this happens iff G(λ)h = 0, G(λ) = ∫ Y₀*(t,λ)Δ(t)Y₀(t,λ) dt, so
positivity of the Gram matrix is used as the computable surrogate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from modules.ode.fundamental import FundamentalSolver
from modules.spaces.weighted import solution_gram
from modules.utils.linalg import hermitian_part
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class DefinitenessResult:
    lam: complex
    definite: bool
    min_eig: float
    max_eig: float


def check_definiteness(solver: FundamentalSolver, lam: complex = 1j) -> DefinitenessResult:
    """Definite iff the smallest Gram eigenvalue is ≥ def_rel · largest (and the largest is > 0)."""
    fund = solver.fundamental(lam)
    gram = solution_gram(solver.space, fund, fund)
    eigs = np.linalg.eigvalsh(hermitian_part(gram))
    lo, hi = float(eigs[0]), float(eigs[-1])
    definite = hi > 0.0 and lo >= solver.tol.def_rel * hi
    if not definite:
        logger.warning("⚠️ %s is not definite at λ=%s (Gram eigenvalues %.3e .. %.3e)",
                       solver.system.name, lam, lo, hi)
    return DefinitenessResult(complex(lam), definite, lo, hi)
