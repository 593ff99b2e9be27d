"""Shared fixtures: built-in systems, their solvers and Weyl functions, common τ."""

from __future__ import annotations

import numpy as np
import pytest

from modules.ode.fundamental import FundamentalSolver
from modules.parameters.boundary_parameter import make_constant_selfadjoint, make_rational_nevanlinna
from modules.spaces.weighted import WeightedFunction, WeightedSpace
from modules.systems.builtins import builtin_system
from modules.triplet.weyl import WeylFunction

LAMS = (1j, 2j, 1 + 1j)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20261019)


@pytest.fixture(scope="session")
def sl_solver() -> FundamentalSolver:
    return FundamentalSolver(WeightedSpace.uniform(builtin_system("sl-dirichlet")))


@pytest.fixture(scope="session")
def sl_wf(sl_solver) -> WeylFunction:
    return WeylFunction(sl_solver)


@pytest.fixture(scope="session")
def free3_solver() -> FundamentalSolver:
    return FundamentalSolver(WeightedSpace.uniform(builtin_system("free-3x3")))


@pytest.fixture(scope="session")
def free3_wf(free3_solver) -> WeylFunction:
    return WeylFunction(free3_solver)


@pytest.fixture(scope="session")
def dirichlet():
    return make_constant_selfadjoint([[0, 0], [0, 1]], [[-1, 0], [0, 0]], label="dirichlet")


@pytest.fixture(scope="session")
def neumann_dirichlet():
    """(I, 0): the multivalued parameter whose extension is A₀."""
    return make_constant_selfadjoint(np.eye(2), np.zeros((2, 2)), label="A0")


@pytest.fixture(scope="session")
def zero_operator():
    return make_constant_selfadjoint(np.zeros((2, 2)), np.eye(2), label="zero")


@pytest.fixture(scope="session")
def lambda_identity():
    """τ(λ) = λI: Nevanlinna but λ-dependent, so the resolvent is not canonical."""
    return make_rational_nevanlinna(np.zeros((2, 2)), np.eye(2), label="lambda-I")


@pytest.fixture(scope="session")
def sl_taus(dirichlet, neumann_dirichlet, zero_operator, lambda_identity):
    return (dirichlet, neumann_dirichlet, zero_operator, lambda_identity)


def random_rhs(space: WeightedSpace, rng: np.random.Generator, modes: int = 3) -> WeightedFunction:
    a, b = space.system.a, space.system.b
    s = (space.grid - a) / (b - a)
    basis = np.sin(np.pi * np.outer(s, np.arange(1, modes + 1)))
    n = space.system.dim
    coeffs = rng.standard_normal((modes, n)) + 1j * rng.standard_normal((modes, n))
    return WeightedFunction(space.grid, basis @ coeffs)
