from dataclasses import replace

import numpy as np
import pytest

from modules.ode.fundamental import (
    FundamentalSolver,
    min_abs_det,
    propagate,
    solver_symplectic_residual,
    symplectic_residual,
)
from modules.ode.inhomogeneous import cumulative_adjoint, ode_residual, solve_inhomogeneous
from modules.spaces.weighted import WeightedSpace
from modules.systems.builtins import builtin_system
from modules.utils.errors import CoefficientError, MeshMismatchError

from conftest import random_rhs


def sl_closed_form(t: np.ndarray, lam: complex) -> np.ndarray:
    s = np.sqrt(complex(lam))
    c, sn = np.cos(s * t), np.sin(s * t)
    return np.stack([np.stack([c, sn / s], axis=-1), np.stack([-s * sn, c], axis=-1)], axis=-2)


def test_sturm_liouville_fundamental_matches_closed_form(sl_solver):
    lam = 4 + 1j
    fund = sl_solver.fundamental(lam)
    np.testing.assert_allclose(fund.values, sl_closed_form(fund.grid, lam), atol=1e-8)
    np.testing.assert_allclose(fund.at(0.37), sl_closed_form(np.array(0.37), lam), atol=1e-8)
    assert min_abs_det(fund) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("lam", [1j, 5 + 5j, -3 + 2j, 10.0, -6j])
def test_symplectic_identity(sl_solver, free3_solver, lam):
    assert solver_symplectic_residual(sl_solver, lam) <= 1e-8
    assert solver_symplectic_residual(free3_solver, lam) <= 1e-8


def test_symplectic_residual_flags_a_corrupted_solution(sl_solver):
    fund, conj = sl_solver.fundamental(1j), sl_solver.fundamental(-1j)
    j = sl_solver.system.J
    assert symplectic_residual(fund, j, conj) <= 1e-8
    values = fund.values.copy()
    values[400, 0, 1] += 1e-3
    assert symplectic_residual(replace(fund, values=values), j, conj) >= 1e-4


def test_solutions_are_memoized(sl_solver):
    first = sl_solver.fundamental(3j)
    assert sl_solver.fundamental(3j) is first
    assert 3j in sl_solver.cached()


def test_inverse_uses_symplectic_identity(free3_solver):
    lam, k = 1 + 2j, 300
    y = free3_solver.fundamental(lam).values[k]
    np.testing.assert_allclose(free3_solver.inverse_at(lam, k) @ y, np.eye(3), atol=1e-8)


def test_propagate_rejects_wrong_shapes(sl_solver):
    fund = sl_solver.fundamental(1j)
    assert propagate(fund, np.array([1.0, 0.0])).columns == 1
    with pytest.raises(CoefficientError):
        propagate(fund, np.ones((3, 1)))


def test_inhomogeneous_solution_satisfies_the_equation(sl_solver, rng):
    space = sl_solver.space
    lam = 2 - 1j
    f = space.function(lambda t: [np.sin(np.pi * t) + 1j * t, 0.0])
    y_a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    y = solve_inhomogeneous(sl_solver, lam, f, y_a)
    np.testing.assert_allclose(y.at_a, y_a, atol=1e-14)
    assert ode_residual(space, lam, y, f) <= 1e-6
    # a homogeneous solution misses the inhomogeneous equation
    assert ode_residual(space, lam, solve_inhomogeneous(sl_solver, lam, space.zero(), y_a), f) > 1e-2


def test_inhomogeneous_solution_is_linear(sl_solver, rng):
    space = sl_solver.space
    lam = 1 + 2j
    f1, f2 = random_rhs(space, rng), random_rhs(space, rng)
    a1, a2 = (rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(2))
    whole = solve_inhomogeneous(sl_solver, lam, f1 + f2, a1 + a2)
    parts = solve_inhomogeneous(sl_solver, lam, f1, a1) + solve_inhomogeneous(sl_solver, lam, f2, a2)
    np.testing.assert_allclose(whole.values, parts.values, atol=1e-12)
    scaled = solve_inhomogeneous(sl_solver, lam, f1.scale(2 - 1j), (2 - 1j) * a1)
    np.testing.assert_allclose(scaled.values, (2 - 1j) * solve_inhomogeneous(sl_solver, lam, f1, a1).values,
                               atol=1e-12)


def test_cumulative_adjoint_checks_shape(sl_solver):
    other = WeightedSpace.uniform(builtin_system("sl-dirichlet"), 101)
    with pytest.raises(MeshMismatchError):
        cumulative_adjoint(sl_solver, 1j, other.zero())


def test_free_system_fundamental_is_exponential(free3_solver):
    # B = 0, Δ = I: Y₀(t) = exp(−λJt)
    from scipy.linalg import expm

    lam = 0.5 + 1j
    fund = free3_solver.fundamental(lam)
    j = free3_solver.system.J
    np.testing.assert_allclose(fund.monodromy, expm(-lam * j), atol=1e-8)


def test_solver_is_shared_safely_across_threads(sl_solver):
    from concurrent.futures import ThreadPoolExecutor

    lams = [0.25j * k for k in range(1, 9)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda lam: sl_solver.fundamental(lam).monodromy, lams))
    fresh = FundamentalSolver(sl_solver.space)
    for lam, w in zip(lams, parallel):
        np.testing.assert_array_equal(w, fresh.fundamental(lam).monodromy)
