""" Numeric tolerances used across the toolkit.

    One frozen record is threaded through every computation so a run is fully
    described by (config, tolerances). ``--tol-override KEY=VAL`` on the CLI
    goes through ``Tolerances.with_overrides``.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, fields, replace, asdict

from modules.utils.errors import ConfigError


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Named tolerances; every value must be positive."""

    herm: float = 1e-10        # Hermiticity defect of B
    psd: float = 1e-10         # most negative eigenvalue allowed for Δ
    def_rel: float = 1e-10     # definiteness: min Gram eig ≥ def_rel · max Gram eig
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12
    symp: float = 1e-8
    bvp: float = 1e-6          # ODE residual of inhomogeneous solutions
    tmax: float = 1e-6         # T_max membership certificate
    bnd: float = 1e-10         # boundary form identity at b
    cond: float = 1e-12        # flag when cond > 1/cond
    adm: float = 1e-9
    weyl: float = 1e-9
    weyl_identity: float = 1e-7
    green_identity: float = 1e-8
    route: float = 1e-7
    omega_sym: float = 1e-8
    ineq: float = 1e-8
    ineq_equal: float = 1e-7
    bc: float = 1e-9
    green: float = 1e-8
    res: float = 1e-6
    eig: float = 1e-10
    syn: float = 1e-9
    display: float = 1e-11
    det_imag: float = 1e-10
    equiv: float = 1e-10

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ConfigError(f"tolerance {f.name} must be positive (got {value!r})")

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def with_overrides(self, items: Iterable[str]) -> "Tolerances":
        """Return a copy with ``KEY=VAL`` overrides applied.

        Raises:
            ConfigError: On unknown keys or unparsable values.
        """
        changes: dict[str, float] = {}
        for item in items:
            key, sep, raw = item.partition("=")
            key = key.strip()
            if not sep or key not in self.keys():
                raise ConfigError(f"bad tolerance override {item!r}; known keys: {', '.join(self.keys())}")
            try:
                changes[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"tolerance {key} needs a number, got {raw!r}") from exc
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
