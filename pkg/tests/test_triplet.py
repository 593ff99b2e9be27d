from itertools import combinations, product

import numpy as np
import pytest

from modules.ode.fundamental import FundamentalSolver
from modules.spaces.weighted import WeightedFunction, WeightedSpace
from modules.systems.builtins import builtin_system
from modules.triplet.boundary_maps import (
    RegularBoundaryMap,
    TmaxPair,
    boundary_form_residual,
    green_identity_residual,
    lagrange_residual,
    random_tmax_pair,
    triplet_maps,
)
from modules.triplet.weyl import (
    WeylBlocks,
    WeylFunction,
    defining_residual,
    gamma_field,
    nevanlinna_report,
    solve_u,
    solve_v0,
    weyl_identity_residual,
)
from modules.utils.errors import CoefficientError, SpectralCollisionError, TmaxMembershipError
from modules.utils.tolerances import DEFAULT_TOLERANCES

from conftest import LAMS

ORACLE_LAMS = [complex(x, y) for x in (-20.0, -3.0, 0.0, 5.0, 40.0) for y in (-2.0, -0.5, 0.5, 3.0)]
POLAR_LAMS = [r * np.exp(1j * theta)
              for r in (0.5, 1.5, 3.0, 4.5, 6.0, 7.5, 9.0)
              for theta in (np.pi / 4, np.pi / 2, 3 * np.pi / 4)]


def sl_weyl_oracle(lam: complex) -> np.ndarray:
    """−u'' = λu on [0, 1]: m₀ = tan s/s, M₂ = M₃ = sec s, M₄ = s tan s with s² = λ."""
    s = np.sqrt(complex(lam))
    return np.array([[np.tan(s) / s, 1 / np.cos(s)], [1 / np.cos(s), s * np.tan(s)]])


@pytest.mark.parametrize("lam", ORACLE_LAMS + POLAR_LAMS)
def test_sturm_liouville_weyl_function(sl_wf, lam):
    expected = sl_weyl_oracle(lam)
    data = sl_wf.data(lam)
    assert np.linalg.norm(data.M - expected, 2) <= 1e-8 * np.linalg.norm(expected, 2)
    assert data.condition_residual <= DEFAULT_TOLERANCES.weyl


@pytest.mark.parametrize("lam", LAMS)
def test_weyl_function_is_nevanlinna(sl_wf, free3_wf, lam):
    for wf in (sl_wf, free3_wf):
        rep = nevanlinna_report(wf(lam), wf(np.conj(lam)), lam)
        assert rep.symmetry_defect <= 1e-9
        assert rep.min_imag_eig >= -1e-8


@pytest.mark.parametrize("lam, mu", list(product(LAMS, LAMS)))
def test_weyl_identity(sl_wf, free3_wf, lam, mu):
    assert weyl_identity_residual(sl_wf, lam, mu) <= 1e-7
    assert weyl_identity_residual(free3_wf, lam, mu) <= 1e-7


def test_weyl_blocks_with_middle_space(free3_wf):
    data = free3_wf.data(1j)
    assert data.m0.shape == (2, 2)
    assert data.M2.shape == (2, 1)
    assert data.M.shape == (3, 3)
    assert np.all(np.diag(data.M).imag > 0)
    bl = data.blocks()
    assert bl.equal_index
    np.testing.assert_array_equal(bl.M, data.M)


def test_weyl_solutions_meet_their_defining_conditions(free3_solver, free3_wf):
    lam = 1 - 2j
    bmap = RegularBoundaryMap(free3_solver.system.decomposition)
    v0, u = solve_v0(free3_solver, bmap, lam), solve_u(free3_solver, bmap, lam)
    assert defining_residual(bmap.decomposition, v0.at_a, v0.at_b, u.at_a, u.at_b) <= 1e-9
    z = gamma_field(free3_solver, bmap, lam)
    assert z.columns == v0.columns + u.columns
    np.testing.assert_allclose(z.values, free3_wf.gamma_field(lam).values, atol=1e-12)


def test_weyl_data_is_memoized(sl_wf):
    assert sl_wf.data(0.5j) is sl_wf.data(0.5j)


def test_weyl_blocks_shapes():
    with pytest.raises(CoefficientError):
        WeylBlocks(1j, 1, 0, 2, 1, np.zeros((3, 2)))
    with pytest.raises(CoefficientError):
        WeylBlocks(1j, 1, 0, 1, 2, np.zeros((2, 2)))
    bl = WeylBlocks(1j, 1, 0, 1, 2, np.zeros((2, 3)))
    p1, p2 = bl.projections()
    np.testing.assert_allclose(p1 + p2, np.eye(3))
    assert bl.padded().shape == (3, 3)


def test_weyl_raises_on_spectral_collision():
    space = WeightedSpace.uniform(builtin_system("sl-dirichlet"))
    solver = FundamentalSolver(space, DEFAULT_TOLERANCES.with_overrides(["cond=1e-8"]))
    with pytest.raises(SpectralCollisionError):
        WeylFunction(solver)((np.pi / 2) ** 2)


@pytest.mark.slow
def test_truncated_half_line_weyl_function():
    space = WeightedSpace.uniform(builtin_system("halfline-30"), 6001)
    wf = WeylFunction(FundamentalSolver(space))
    assert abs(wf.data(1j).m0[0, 0] - np.sqrt(1j)) <= 1e-8


# -----------------------------------------------------------------------------
# Boundary form, Lagrange and Green identities
# -----------------------------------------------------------------------------

def test_boundary_form_matches_J_bracket(free3_solver, rng):
    bmap = RegularBoundaryMap(free3_solver.system.decomposition)
    j = free3_solver.system.J
    for _ in range(20):
        y, z = (rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(2))
        assert boundary_form_residual(bmap, j, y, z) <= 1e-12


@pytest.mark.parametrize("fixture", ["sl_solver", "free3_solver"])
def test_lagrange_and_green_identities(request, fixture, rng):
    solver = request.getfixturevalue(fixture)
    space = solver.space
    bmap = RegularBoundaryMap(solver.system.decomposition)
    pairs = [random_tmax_pair(solver, rng) for _ in range(50)]
    for first, second in combinations(pairs, 2):
        assert lagrange_residual(space, first, second) <= 1e-8
        assert green_identity_residual(space, bmap, first, second) <= 1e-8


def test_triplet_maps_reject_pairs_outside_tmax(sl_solver, rng):
    space = sl_solver.space
    bmap = RegularBoundaryMap(sl_solver.system.decomposition)
    good = random_tmax_pair(sl_solver, rng)
    values = triplet_maps(space, bmap, good)
    assert values.gamma0.shape == values.gamma1.shape == (2,)
    bad = TmaxPair(good.y, WeightedFunction(good.f.grid, good.f.values + 1.0))
    with pytest.raises(TmaxMembershipError):
        triplet_maps(space, bmap, bad)


def test_triplet_maps_of_a_sine_on_sturm_liouville(sl_solver):
    # y = (sin πt, π cos πt) solves Jy' − By = Δ(π² sin πt, 0)
    space = sl_solver.space
    y = space.function(lambda t: [np.sin(np.pi * t), np.pi * np.cos(np.pi * t)])
    f = space.function(lambda t: [np.pi ** 2 * np.sin(np.pi * t), 0.0])
    values = triplet_maps(space, RegularBoundaryMap(sl_solver.system.decomposition), TmaxPair(y, f))
    np.testing.assert_allclose(values.gamma0, [-np.pi, 0.0], atol=1e-12)
    np.testing.assert_allclose(values.gamma1, [0.0, np.pi], atol=1e-12)
