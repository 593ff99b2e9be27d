"""Exception hierarchy shared by every module.

Each error carries ``provenance``: the dotted module area that raised it
(``"ode"``, ``"triplet"``, ...). The CLI reports it next to the message and
maps ``ConfigError`` to exit code 2 and everything else to exit code 1.
"""

from __future__ import annotations


class SymSysError(RuntimeError):
    """Base class for all toolkit errors."""

    provenance: str = "symsys"

    def __init__(self, message: str, *, provenance: str | None = None) -> None:
        super().__init__(message)
        if provenance is not None:
            self.provenance = provenance


class CoefficientError(SymSysError):
    """Invalid coefficient data or dimensions."""

    provenance = "systems"


class IntegrationError(SymSysError):
    """The integrator failed; ``t`` is where it stopped."""

    provenance = "ode"

    def __init__(self, message: str, *, t: float | None = None) -> None:
        super().__init__(message)
        self.t = t


class MeshMismatchError(SymSysError):
    """Two sampled objects live on different meshes."""

    provenance = "spaces"


class IllConditionedError(SymSysError):
    """A linear system was too ill-conditioned to solve reliably."""

    provenance = "utils.linalg"

    def __init__(self, message: str, *, cond: float, label: str) -> None:
        super().__init__(message)
        self.cond = cond
        self.label = label


class SpectralCollisionError(IllConditionedError):
    """λ sits on (or numerically next to) an eigenvalue of the problem at hand."""


class TmaxMembershipError(SymSysError):
    """A pair (y, f) failed the ODE-residual certificate Jy' - By = Δf."""

    provenance = "triplet"


class AdmissibilityError(SymSysError):
    """A boundary parameter violates one of its admissibility conditions."""

    provenance = "parameters"

    def __init__(self, message: str, *, condition: str) -> None:
        super().__init__(message)
        self.condition = condition


class OperatorFormError(SymSysError):
    """The boundary parameter has no operator form τ(λ) at the requested λ."""

    provenance = "parameters"


class BoundaryConditionError(SymSysError):
    """A computed solution misses its boundary condition."""

    provenance = "charmat"


class ConfigError(SymSysError):
    """Malformed or inconsistent problem configuration."""

    provenance = "cli"
