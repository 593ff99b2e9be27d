"""Symmetric first-order systems Jy' − B(t)y = λΔ(t)y on a finite interval.

Key behaviors:
- ``SymmetricSystem`` is immutable; J is always the canonical structure
  matrix of its decomposition.
- ``validate`` samples the coefficients and reports Hermiticity of B,
  positivity of Δ and the structure of J without raising.
- ``from_sturm_liouville`` reduces −(py')' + qy = λwy to the 2 × 2 system
  with y = (u, pu').
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from modules.systems.coefficients import CoefficientKind, CoefficientMap, diagonal
from modules.systems.structure import SpaceDecomposition, canonical_J
from modules.utils.errors import CoefficientError
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class SymmetricSystem:
    decomposition: SpaceDecomposition
    interval: tuple[float, float]
    B: CoefficientMap
    Delta: CoefficientMap
    name: str = "system"
    J: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        a, b = (float(x) for x in self.interval)
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise CoefficientError(f"interval must be finite with a < b, got {self.interval}")
        object.__setattr__(self, "interval", (a, b))
        n = self.decomposition.dim_total
        for cmap, what in ((self.B, "B"), (self.Delta, "Δ")):
            if cmap.dim != n:
                raise CoefficientError(f"{what} has dimension {cmap.dim}, decomposition needs {n}")
        j = canonical_J(self.decomposition)
        j.setflags(write=False)
        object.__setattr__(self, "J", j)

    @property
    def a(self) -> float:
        return self.interval[0]

    @property
    def b(self) -> float:
        return self.interval[1]

    @property
    def dim(self) -> int:
        return self.decomposition.dim_total

    def generator(self, t: float, lam: complex) -> np.ndarray:
        """Right-hand side matrix of y' = −J(B(t) + λΔ(t))y (J⁻¹ = −J)."""
        return -self.J @ (self.B(t) + lam * self.Delta(t))


@dataclass(frozen=True, slots=True)
class ValidationReport:
    grid_size: int
    herm_defect: float
    min_delta_eig: float
    j_defect: float
    passed: bool
    failures: tuple[str, ...] = ()


def validate(sys: SymmetricSystem, grid: np.ndarray | None = None,
             tol: Tolerances = DEFAULT_TOLERANCES) -> ValidationReport:
    """Check B = B*, Δ ⪰ 0 on ``grid`` and the J structure (J* = −J, J*J = I)."""
    ts = np.linspace(sys.a, sys.b, 200) if grid is None else np.asarray(grid, dtype=float)
    if ts.size == 0 or ts.min() < sys.a or ts.max() > sys.b:
        raise CoefficientError("validation grid must be non-empty and inside the interval")

    herm = 0.0
    min_eig = np.inf
    for t in ts:
        bt = sys.B(float(t))
        herm = max(herm, float(np.linalg.norm(bt - bt.conj().T, 2)))
        dt = sys.Delta(float(t))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (dt + dt.conj().T))[0]))

    j = sys.J
    eye = np.eye(sys.dim)
    j_defect = max(float(np.linalg.norm(j.conj().T + j, 2)), float(np.linalg.norm(j.conj().T @ j - eye, 2)))

    failures = []
    if herm > tol.herm:
        failures.append(f"B not Hermitian (defect {herm:.3e})")
    if min_eig < -tol.psd:
        failures.append(f"Δ not positive semi-definite (eigenvalue {min_eig:.3e})")
    if j_defect > tol.herm:
        failures.append(f"J structure defect {j_defect:.3e}")

    report = ValidationReport(len(ts), herm, float(min_eig), j_defect, not failures, tuple(failures))
    if failures:
        logger.warning("⚠️ %s failed validation: %s", sys.name, "; ".join(failures))
    else:
        logger.debug("✅ %s validated on %d points", sys.name, len(ts))
    return report


def from_sturm_liouville(
    p: Callable[[float], float],
    q: Callable[[float], float],
    w: Callable[[float], float],
    interval: tuple[float, float],
    *,
    name: str = "sturm-liouville",
    check_points: int = 401,
) -> SymmetricSystem:
    """Build the system for −(p u')' + q u = λ w u with y = (u, p u').

    B(t) = diag(−q(t), 1/p(t)), Δ(t) = diag(w(t), 0).

    Raises:
        CoefficientError: If p vanishes (or changes sign) on the sampling grid.
    """
    ts = np.linspace(interval[0], interval[1], check_points)
    pv = np.array([p(float(t)) for t in ts], dtype=float)
    if np.any(np.abs(pv) <= 1e-14) or np.any(np.sign(pv[1:]) != np.sign(pv[:-1])):
        raise CoefficientError("p has a zero on the sampling grid")

    B = diagonal((lambda t: -q(t), lambda t: 1.0 / p(t)), CoefficientKind.hermitian, "sl-B")
    Delta = diagonal((w, lambda _t: 0.0), CoefficientKind.weight, "sl-Delta")
    return SymmetricSystem(SpaceDecomposition(1, 0), interval, B, Delta, name=name)
