"""Ω_τ on a λ-grid, every value tagged with the route that produced it."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from modules.charmat.characteristic import WeylSource, omega_tau_at, omega_tau_krein
from modules.charmat.omega_tilde import compress, compression_X, omega_tilde
from modules.charmat.z_tau import omega_from_z, z_tau
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.triplet.weyl import WeylFunction
from modules.utils.errors import OperatorFormError
from modules.utils.linalg import spectral_norm
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


class OmegaRoute(str, Enum):
    correction = "correction"
    krein = "krein"
    z_boundary = "z-boundary"
    compression = "compression"

    @classmethod
    def help_text(cls) -> str:
        return ", ".join(r.value for r in cls)


@dataclass(frozen=True, slots=True)
class OmegaPoint:
    lam: complex
    values: dict[OmegaRoute, np.ndarray]
    skipped: dict[OmegaRoute, str]
    display_residual: float | None = None

    @property
    def primary(self) -> np.ndarray:
        return self.values[OmegaRoute.correction]

    def route_spread(self) -> float:
        """Largest pairwise distance between the routes that ran."""
        vals = list(self.values.values())
        return max((spectral_norm(a - b) for a, b in combinations(vals, 2)), default=0.0)


def omega_routes(tau: BoundaryParameter, source: WeylSource, lam: complex,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> OmegaPoint:
    """Evaluate every applicable route at λ.

    The Krein route needs an operator-valued τ, the boundary-value route
    needs numeric Weyl data and the compression route is evaluated where M₊
    is available directly (ℂ₊, or both half-planes for equal indices).
    """
    lam = complex(lam)
    values: dict[OmegaRoute, np.ndarray] = {OmegaRoute.correction: omega_tau_at(tau, source, lam, tol)}
    skipped: dict[OmegaRoute, str] = {}

    try:
        values[OmegaRoute.krein] = omega_tau_krein(tau, source, lam, tol)
    except OperatorFormError as exc:
        skipped[OmegaRoute.krein] = str(exc)

    if isinstance(source, WeylFunction):
        values[OmegaRoute.z_boundary] = omega_from_z(z_tau(tau, source, lam), source.solver.system.J)
    else:
        skipped[OmegaRoute.z_boundary] = "no ODE backend for synthetic Weyl data"

    display = None
    bl = source.blocks(lam)
    if lam.imag > 0 or bl.equal_index:
        ot = omega_tilde(tau, bl, tol)
        x1, x2 = compression_X(bl)
        values[OmegaRoute.compression] = compress(ot.value, x1, x2)
        display = ot.display_residual
    else:
        skipped[OmegaRoute.compression] = "rectangular data is only available on ℂ₊"

    point = OmegaPoint(lam, values, skipped, display)
    spread = point.route_spread()
    if spread > tol.route:
        logger.warning("⚠️ Ω routes disagree at λ=%s by %.3e", lam, spread)
    return point


@dataclass(frozen=True, slots=True)
class CharacteristicMatrix:
    tau_label: str
    points: tuple[OmegaPoint, ...]

    @property
    def lams(self) -> list[complex]:
        return [p.lam for p in self.points]

    def value(self, lam: complex, route: OmegaRoute = OmegaRoute.correction) -> np.ndarray:
        for p in self.points:
            if p.lam == complex(lam):
                return p.values[route]
        raise KeyError(f"λ={lam} not on the grid")

    def max_route_spread(self) -> float:
        return max((p.route_spread() for p in self.points), default=0.0)


def characteristic_matrix(tau: BoundaryParameter, source: WeylSource, lams: Sequence[complex],
                          tol: Tolerances = DEFAULT_TOLERANCES,
                          mapper: Callable[[Callable, Iterable], Iterable] = map) -> CharacteristicMatrix:
    """Ω_τ on ``lams``; ``mapper`` may be an executor's ``map`` (results keep grid order)."""
    points = tuple(mapper(lambda lam: omega_routes(tau, source, lam, tol), lams))
    return CharacteristicMatrix(tau.label or tau.kind.value, points)
