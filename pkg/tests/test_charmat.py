from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np
import pytest

from modules.charmat.characteristic import omega0, omega_tau, omega_tau_at, omega_tau_krein, s_factors, t_tau
from modules.charmat.grid import OmegaRoute, characteristic_matrix, omega_routes
from modules.charmat.omega_tilde import compress, compression_X, omega_tilde
from modules.charmat.synthetic import (
    embedded_weyl_data,
    random_model_weyl_data,
    synthetic_identity_residual,
    synthetic_imag_bound,
)
from modules.charmat.z_tau import (
    imag_bound_check,
    omega_from_z,
    selfadjoint_identity_residual,
    uniqueness_check,
    z_tau,
)
from modules.parameters.boundary_parameter import (
    make_constant_pair,
    make_constant_selfadjoint,
    make_rational_nevanlinna,
    pad_to_rectangular,
    random_selfadjoint,
)
from modules.utils.errors import AdmissibilityError, CoefficientError, OperatorFormError
from modules.utils.linalg import spectral_norm

from conftest import LAMS

ALL_LAMS = [*LAMS, *(np.conj(lam) for lam in LAMS)]


@pytest.fixture(scope="module")
def free3_taus():
    rng = np.random.default_rng(7)
    eye, zero = np.eye(3), np.zeros((3, 3))
    return (
        random_selfadjoint(rng, 3),
        make_constant_selfadjoint(eye, zero, label="A0"),
        make_constant_selfadjoint(zero, eye, label="zero"),
        make_rational_nevanlinna(zero, eye, label="lambda-I"),
        make_constant_pair(eye, 1j * eye, label="dissipative"),
    )


def test_multivalued_parameter_gives_omega0(sl_wf, free3_wf, neumann_dirichlet):
    for wf, tau in ((sl_wf, neumann_dirichlet), (free3_wf, make_constant_selfadjoint(np.eye(3), np.zeros((3, 3))))):
        for lam in LAMS:
            bl = wf.blocks(lam)
            np.testing.assert_allclose(t_tau(tau, bl), 0.0, atol=1e-15)
            np.testing.assert_allclose(omega_tau(tau, bl), omega0(bl), atol=1e-15)


def test_omega0_of_sturm_liouville(sl_wf):
    lam = 2j
    s = np.sqrt(lam)
    expected = np.array([[np.tan(s) / s, -0.5], [-0.5, 0.0]])
    np.testing.assert_allclose(omega0(sl_wf.blocks(lam)), expected, atol=1e-8)


@pytest.mark.parametrize("fixture", ["sl_wf", "free3_wf"])
def test_first_s_factor_is_gamma_field_at_a(request, fixture):
    wf = request.getfixturevalue(fixture)
    for lam in LAMS:
        s1, _ = s_factors(wf.blocks(lam))
        np.testing.assert_allclose(s1, wf.gamma_field(lam).at_a, atol=1e-10)


def test_s_factors_are_adjoint_for_equal_index(free3_wf):
    lam = 1 + 1j
    s1, _ = s_factors(free3_wf.blocks(lam))
    _, s2_conj = s_factors(free3_wf.blocks(np.conj(lam)))
    np.testing.assert_allclose(s2_conj, s1.conj().T, atol=1e-8)


@pytest.mark.parametrize("lam", ALL_LAMS)
def test_routes_agree_on_sturm_liouville(sl_wf, sl_taus, lam):
    for tau in (*sl_taus, make_constant_pair(np.eye(2), 1j * np.eye(2), label="dissipative")):
        point = omega_routes(tau, sl_wf, lam)
        assert point.route_spread() <= 1e-7, tau.label
        assert OmegaRoute.z_boundary in point.values


@pytest.mark.parametrize("lam", ALL_LAMS)
def test_routes_agree_on_free_system(free3_wf, free3_taus, lam):
    for tau in free3_taus:
        assert omega_routes(tau, free3_wf, lam).route_spread() <= 1e-7, tau.label


def test_krein_route_needs_operator_form(sl_wf, dirichlet, zero_operator, lambda_identity):
    point = omega_routes(dirichlet, sl_wf, 1j)
    assert OmegaRoute.krein in point.skipped
    for tau in (zero_operator, lambda_identity):
        np.testing.assert_allclose(omega_tau_krein(tau, sl_wf, 1j), omega_tau_at(tau, sl_wf, 1j), atol=1e-8)
    with pytest.raises(OperatorFormError):
        omega_tau_krein(dirichlet, sl_wf, 1j)


@pytest.mark.parametrize("lam", LAMS)
def test_z_tau_meets_its_boundary_condition(sl_wf, free3_wf, sl_taus, free3_taus, lam):
    for wf, taus in ((sl_wf, sl_taus), (free3_wf, free3_taus)):
        j = wf.solver.system.J
        for tau in taus:
            zt = z_tau(tau, wf, lam)
            assert zt.bc_residual <= 1e-8
            assert spectral_norm(omega_from_z(zt, j) - omega_tau_at(tau, wf, lam)) <= 1e-8


@pytest.mark.parametrize("lam", LAMS)
def test_characteristic_matrix_is_nevanlinna(sl_wf, sl_taus, lam):
    for tau in sl_taus:
        value = omega_tau_at(tau, sl_wf, lam)
        assert spectral_norm(omega_tau_at(tau, sl_wf, np.conj(lam)) - value.conj().T) <= 1e-8
        assert imag_bound_check(tau, sl_wf, lam).passed


def test_imag_bound_is_an_equality_for_selfadjoint_parameters(sl_wf, dirichlet, zero_operator, lambda_identity):
    for tau in (dirichlet, zero_operator):
        assert imag_bound_check(tau, sl_wf, 1 + 1j).gap_norm <= 1e-7
    strict = imag_bound_check(lambda_identity, sl_wf, 1 + 1j)
    assert strict.min_eig >= -1e-8
    assert strict.gap_norm > 1e-3
    with pytest.raises(AdmissibilityError):
        imag_bound_check(dirichlet, sl_wf, 2.0)


@pytest.mark.parametrize("lam, mu", list(product(LAMS, LAMS)))
def test_selfadjoint_identity(sl_wf, dirichlet, zero_operator, lam, mu):
    for tau in (dirichlet, zero_operator):
        assert selfadjoint_identity_residual(tau, sl_wf, lam, mu) <= 1e-7


def test_selfadjoint_identity_is_not_claimed_for_generalized_resolvents(sl_wf, lambda_identity):
    with pytest.raises(AdmissibilityError):
        selfadjoint_identity_residual(lambda_identity, sl_wf, 1j, 2j)


def test_homogeneous_problem_is_uniquely_solvable_off_the_spectrum(sl_wf, dirichlet):
    assert uniqueness_check(dirichlet, sl_wf, 1j).cond < 1e3
    assert uniqueness_check(dirichlet, sl_wf, np.pi ** 2).cond >= 1e8


def test_characteristic_matrix_grid_is_independent_of_workers(sl_wf, dirichlet):
    lams = [0.5j, 1 + 2j, -1 + 0.5j, 3j]
    serial = characteristic_matrix(dirichlet, sl_wf, lams)
    with ThreadPoolExecutor(max_workers=3) as pool:
        threaded = characteristic_matrix(dirichlet, sl_wf, lams, mapper=pool.map)
    assert serial.lams == threaded.lams == lams
    for lam in lams:
        np.testing.assert_array_equal(serial.value(lam), threaded.value(lam))
    with pytest.raises(KeyError):
        serial.value(5j)


# -----------------------------------------------------------------------------
# Ω̃ and rectangular data
# -----------------------------------------------------------------------------

def test_omega_tilde_assemblies_agree(sl_wf, free3_wf):
    rng = np.random.default_rng(11)
    for k in range(20):
        wf, n = (sl_wf, 2) if k % 2 else (free3_wf, 3)
        tau = random_selfadjoint(rng, n)
        bl = wf.blocks(complex(rng.uniform(-3, 3), rng.uniform(0.2, 3)))
        ot = omega_tilde(tau, bl)
        assert ot.display_residual <= 1e-10 * max(1.0, spectral_norm(ot.value))
        x1, x2 = compression_X(bl)
        np.testing.assert_allclose(compress(ot.value, x1, x2), omega_tau(tau, bl), atol=1e-10)


def test_compress_checks_shapes(sl_wf):
    bl = sl_wf.blocks(1j)
    x1, x2 = compression_X(bl)
    with pytest.raises(CoefficientError):
        compress(np.zeros((3, 3)), x1, x2)


@pytest.mark.parametrize("dims", [(1, 0, 1, 2), (1, 1, 1, 3), (2, 0, 1, 2)])
def test_random_model_weyl_identity(dims):
    syn = random_model_weyl_data(np.random.default_rng(5), *dims)
    for lam, mu in product(LAMS, LAMS):
        assert synthetic_identity_residual(syn, lam, mu) <= 1e-9


def test_embedded_weyl_identity(sl_wf):
    syn = embedded_weyl_data(sl_wf, 1)
    for lam, mu in product(LAMS, LAMS):
        assert synthetic_identity_residual(syn, lam, mu) <= 1e-7


def test_rectangular_characteristic_matrix(dirichlet):
    syn = random_model_weyl_data(np.random.default_rng(9), 1, 0, 1, 2)
    tau = pad_to_rectangular(dirichlet, 1)
    for lam in LAMS:
        point = omega_routes(tau, syn, lam)
        assert set(point.values) == {OmegaRoute.correction, OmegaRoute.compression}
        assert point.route_spread() <= 1e-9
        assert point.display_residual <= 1e-10
        assert synthetic_imag_bound(tau, syn, lam, point.primary) >= -1e-8
        # ℂ₋ goes through Ω_τ(λ̄)*
        np.testing.assert_allclose(omega_tau_at(tau, syn, np.conj(lam)), point.primary.conj().T)


def test_parameter_must_fit_weyl_data(sl_wf, dirichlet):
    syn = random_model_weyl_data(np.random.default_rng(1), 1, 0, 1, 2)
    with pytest.raises(CoefficientError):
        omega_tau(dirichlet, syn.blocks(1j))
    with pytest.raises(CoefficientError):
        omega_tau(pad_to_rectangular(dirichlet, 1), sl_wf.blocks(1j))
