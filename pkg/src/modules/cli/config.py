"""Problem configuration: a pydantic model tree loaded from JSON.

A config names a system (a built-in catalog entry or an inline description),
a boundary parameter τ, a λ-grid, the right-hand sides used by ``resolve``
and run options. Built-in entries supply defaults for τ, the λ-grid and the
mesh size; anything given explicitly wins.

Every validation problem surfaces as ``ConfigError`` (CLI exit code 2).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from modules.parameters.boundary_parameter import (
    BoundaryParameter,
    make_constant_pair,
    make_constant_selfadjoint,
    make_rational_nevanlinna,
)
from modules.spaces.weighted import WeightedFunction, WeightedSpace
from modules.systems.builtins import builtin_names, builtin_resource, system_from_description
from modules.systems.symmetric_system import SymmetricSystem
from modules.utils.complex_json import decode_matrix, decode_scalar
from modules.utils.errors import AdmissibilityError, CoefficientError, ConfigError
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = get_logger(__name__)


def _matrix(value: list) -> list:
    try:
        decode_matrix(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"not a complex matrix: {exc}") from exc
    return value


def _scalar(value: Any) -> Any:
    try:
        decode_scalar(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"not a complex number: {exc}") from exc
    return value


ComplexMatrix = Annotated[list[list[Any]], AfterValidator(_matrix)]
ComplexScalar = Annotated[Any, AfterValidator(_scalar)]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# -----------------------------------------------------------------------------
# System
# -----------------------------------------------------------------------------

class SystemSpec(_Spec):
    """Either ``builtin`` or an inline description (see ``system_from_description``)."""

    builtin: str | None = None
    kind: Literal["sturm-liouville", "free", "matrix"] | None = None
    interval: tuple[float, float] = (0.0, 1.0)
    dim_h: Annotated[int, Field(ge=1)] = 1
    dim_hhat: Annotated[int, Field(ge=0)] = 0
    p: list[float] = [1.0]
    q: list[float] = [0.0]
    w: list[float] = [1.0]
    B: dict[str, Any] | None = None
    Delta: dict[str, Any] | None = None
    mesh_points: Annotated[int | None, Field(ge=3)] = None

    @model_validator(mode="after")
    def _one_source(self) -> "SystemSpec":
        if (self.builtin is None) == (self.kind is None):
            raise ValueError("give exactly one of 'builtin' or 'kind'")
        if self.builtin is not None and self.builtin not in builtin_names():
            raise ValueError(f"unknown built-in {self.builtin!r}; available: {', '.join(builtin_names())}")
        if self.kind == "matrix" and (self.B is None or self.Delta is None):
            raise ValueError("a 'matrix' system needs both 'B' and 'Delta'")
        if not self.interval[1] > self.interval[0]:
            raise ValueError("interval must satisfy a < b")
        return self

    def build(self) -> SymmetricSystem:
        try:
            if self.builtin is not None:
                res = builtin_resource(self.builtin)
                return system_from_description(res["system"], name=self.builtin)
            desc = self.model_dump(exclude={"builtin", "mesh_points"}, exclude_none=True)
            return system_from_description(desc, name=f"{self.kind}-system")
        except CoefficientError as exc:
            raise ConfigError(f"system: {exc}") from exc

    def mesh_size(self) -> int:
        if self.mesh_points is not None:
            return self.mesh_points
        if self.builtin is not None:
            return int(builtin_resource(self.builtin).get("mesh_points", 801))
        return 801


# -----------------------------------------------------------------------------
# Boundary parameter
# -----------------------------------------------------------------------------

class ConstantTauSpec(_Spec):
    kind: Literal["constant"]
    C0: ComplexMatrix
    C1: ComplexMatrix
    label: str = "constant"

    def build(self, tol: Tolerances) -> BoundaryParameter:
        return make_constant_selfadjoint(decode_matrix(self.C0), decode_matrix(self.C1), tol=tol, label=self.label)


class PairTauSpec(_Spec):
    kind: Literal["pair"]
    C0: ComplexMatrix
    C1: ComplexMatrix
    label: str = "pair"

    def build(self, tol: Tolerances) -> BoundaryParameter:
        return make_constant_pair(decode_matrix(self.C0), decode_matrix(self.C1), tol=tol, label=self.label)


class RationalTauSpec(_Spec):
    kind: Literal["rational"]
    A: ComplexMatrix
    B: ComplexMatrix
    residues: list[ComplexMatrix] = []
    poles: list[float] = []
    label: str = "rational"

    def build(self, tol: Tolerances) -> BoundaryParameter:
        return make_rational_nevanlinna(decode_matrix(self.A), decode_matrix(self.B),
                                        [decode_matrix(r) for r in self.residues], self.poles,
                                        tol=tol, label=self.label)


TauSpec = Annotated[ConstantTauSpec | PairTauSpec | RationalTauSpec, Field(discriminator="kind")]
_TAU_ADAPTER: TypeAdapter = TypeAdapter(TauSpec)


# -----------------------------------------------------------------------------
# λ-grid, right-hand sides, options
# -----------------------------------------------------------------------------

class RectangleSpec(_Spec):
    re: tuple[float, float]
    im: tuple[float, float]
    n_re: Annotated[int, Field(ge=1)] = 3
    n_im: Annotated[int, Field(ge=1)] = 3


class LambdaGridSpec(_Spec):
    points: list[ComplexScalar] | None = None
    rectangle: RectangleSpec | None = None

    @model_validator(mode="after")
    def _one_kind(self) -> "LambdaGridSpec":
        if (self.points is None) == (self.rectangle is None):
            raise ValueError("give exactly one of 'points' or 'rectangle'")
        if self.points is not None and not self.points:
            raise ValueError("λ-grid must not be empty")
        return self

    def values(self) -> list[complex]:
        """Grid points in a fixed order (row-major over Im, then Re for rectangles)."""
        if self.points is not None:
            return [decode_scalar(p) for p in self.points]
        r = self.rectangle
        res = np.linspace(r.re[0], r.re[1], r.n_re)
        ims = np.linspace(r.im[0], r.im[1], r.n_im)
        return [complex(x, y) for y in ims for x in res]


class RhsSpec(_Spec):
    """Right-hand sides f for ``resolve``: seeded random trigonometric data, sin(πs)e₁ or zero."""

    kind: Literal["random", "sine", "zero"] = "random"
    count: Annotated[int, Field(ge=1, le=100)] = 1
    modes: Annotated[int, Field(ge=1, le=20)] = 3

    def functions(self, space: WeightedSpace, rng: np.random.Generator) -> list[WeightedFunction]:
        n = space.system.dim
        a, b = space.system.a, space.system.b
        s = (space.grid - a) / (b - a)
        out = []
        for _ in range(self.count):
            match self.kind:
                case "zero":
                    out.append(space.zero())
                case "sine":
                    vals = np.zeros((len(s), n), dtype=complex)
                    vals[:, 0] = np.sin(np.pi * s)
                    out.append(WeightedFunction(space.grid, vals))
                case _:
                    k = np.arange(1, self.modes + 1)
                    basis = np.sin(np.pi * np.outer(s, k))
                    coeffs = rng.standard_normal((self.modes, n)) + 1j * rng.standard_normal((self.modes, n))
                    out.append(WeightedFunction(space.grid, basis @ coeffs / self.modes))
        return out


class RunOptions(_Spec):
    workers: Annotated[int, Field(ge=1, le=64)] = 1
    seed: int = 0
    tol_overrides: list[str] = []
    eig_interval: tuple[float, float] = (1.0, 260.0)
    eig_grid: Annotated[int, Field(ge=2)] = 400
    random_pairs: Annotated[int, Field(ge=1)] = 10


class ProblemConfig(_Spec):
    name: str = "problem"
    system: SystemSpec
    tau: TauSpec | None = None
    lambda_grid: LambdaGridSpec | None = None
    rhs: RhsSpec = RhsSpec()
    options: RunOptions = RunOptions()

    def tolerances(self, extra: list[str] | None = None) -> Tolerances:
        return DEFAULT_TOLERANCES.with_overrides([*self.options.tol_overrides, *(extra or [])])

    def tau_spec(self) -> ConstantTauSpec | PairTauSpec | RationalTauSpec:
        if self.tau is not None:
            return self.tau
        if self.system.builtin is not None and "tau" in builtin_resource(self.system.builtin):
            return _validate(_TAU_ADAPTER, builtin_resource(self.system.builtin)["tau"])
        raise ConfigError("no boundary parameter τ given and the system has no default")

    def build_tau(self, tol: Tolerances) -> BoundaryParameter:
        try:
            return self.tau_spec().build(tol)
        except AdmissibilityError as exc:
            raise ConfigError(f"τ is not admissible ({exc.condition}): {exc}") from exc

    def lams(self) -> list[complex]:
        if self.lambda_grid is not None:
            return self.lambda_grid.values()
        if self.system.builtin is not None and "lambda_grid" in builtin_resource(self.system.builtin):
            return _validate(TypeAdapter(LambdaGridSpec), builtin_resource(self.system.builtin)["lambda_grid"]).values()
        return [1j]


_CONFIG_ADAPTER: TypeAdapter = TypeAdapter(ProblemConfig)


def _validate(adapter: TypeAdapter, data: Any) -> Any:
    try:
        return adapter.validate_python(data)
    except ValidationError as exc:
        lines = [f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()]
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(lines)) from exc


def parse_config(data: Any) -> ProblemConfig:
    """Validate a decoded JSON object.

    Raises:
        ConfigError: With one line per schema violation.
    """
    return _validate(_CONFIG_ADAPTER, data)


def load_config(path: Path) -> ProblemConfig:
    """Read and validate a JSON config file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = parse_config(data)
    logger.debug("✅ loaded config %s (%s)", path, cfg.name)
    return cfg


def builtin_config(name: str) -> ProblemConfig:
    """A config that runs a catalog entry with all its defaults."""
    return parse_config({"name": name, "system": {"builtin": name}})
