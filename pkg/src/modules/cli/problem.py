"""A validated config turned into live numerical objects."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from modules.cli.config import ProblemConfig
from modules.ode.fundamental import FundamentalSolver
from modules.parameters.boundary_parameter import BoundaryParameter
from modules.parameters.interface_pair import to_interface_pair
from modules.spaces.weighted import WeightedSpace
from modules.systems.symmetric_system import SymmetricSystem
from modules.triplet.weyl import WeylFunction
from modules.utils.errors import AdmissibilityError, ConfigError
from modules.utils.log_utils import get_logger
from modules.utils.tolerances import Tolerances

logger = get_logger(__name__)

Mapper = Callable[[Callable, Iterable], Iterable]


@dataclass(frozen=True, slots=True)
class Problem:
    config: ProblemConfig
    tol: Tolerances
    system: SymmetricSystem
    space: WeightedSpace
    solver: FundamentalSolver
    wf: WeylFunction
    tau: BoundaryParameter | None
    lams: tuple[complex, ...]
    seed: int

    def require_tau(self) -> BoundaryParameter:
        if self.tau is None:
            raise ConfigError("this command needs a boundary parameter τ")
        return self.tau

    def rng(self, stream: int = 0) -> np.random.Generator:
        """Independent seeded streams so adding one consumer never shifts another."""
        return np.random.default_rng([self.seed, stream])


def build_problem(config: ProblemConfig, *, tol_overrides: Sequence[str] = (), seed: int | None = None) -> Problem:
    """Build system, mesh, solver, Weyl function and τ.

    Raises:
        ConfigError: For bad tolerances, systems, or a τ that does not fit the system.
    """
    tol = config.tolerances(list(tol_overrides))
    system = config.system.build()
    space = WeightedSpace.uniform(system, config.system.mesh_size())
    solver = FundamentalSolver(space, tol)

    tau = None
    if config.tau is not None or config.system.builtin is not None:
        try:
            tau = config.build_tau(tol)
        except ConfigError:
            if config.tau is not None:
                raise
    if tau is not None:
        try:
            to_interface_pair(tau, system.decomposition)
        except AdmissibilityError as exc:
            raise ConfigError(f"τ does not fit system {system.name}: {exc}") from exc

    lams = tuple(config.lams())
    logger.info("✅ problem %s: %s, %d mesh nodes, τ=%s, %d λ-points", config.name, system.name,
                len(space.mesh), tau.label if tau else "-", len(lams))
    return Problem(config, tol, system, space, solver, WeylFunction(solver), tau, lams,
                   config.options.seed if seed is None else seed)


@contextmanager
def worker_map(workers: int) -> Iterator[Mapper]:
    """``map`` for one worker, otherwise a thread pool's order-preserving ``map``."""
    if workers <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="symsys") as pool:
        yield pool.map
