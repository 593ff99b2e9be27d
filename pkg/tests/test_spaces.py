import numpy as np
import pytest

from modules.spaces.weighted import (
    QuadratureMesh,
    WeightedFunction,
    WeightedSpace,
    delta_equivalent,
    delta_inner,
    delta_norm,
)
from modules.systems.builtins import builtin_system
from modules.utils.errors import MeshMismatchError


@pytest.fixture(scope="module")
def sl_space():
    return WeightedSpace.uniform(builtin_system("sl-dirichlet"), 201)


def test_uniform_mesh_rounds_to_odd_count():
    assert len(QuadratureMesh.uniform(0.0, 1.0, 800)) == 801
    assert len(QuadratureMesh.uniform(0.0, 1.0, 801)) == 801
    assert len(QuadratureMesh.uniform(0.0, 1.0, 1)) == 3


def test_simpson_is_exact_for_cubics():
    mesh = QuadratureMesh.uniform(0.0, 2.0, 11)
    t = mesh.nodes
    assert mesh.integrate(t ** 3 - t) == pytest.approx(2.0, abs=1e-13)
    np.testing.assert_allclose(mesh.cumulative(3 * t ** 2), t ** 3, atol=1e-12)


def test_uneven_nodes_integrate_smooth_functions():
    nodes = np.sort(np.concatenate([[0.0, 1.0], np.random.default_rng(3).uniform(0, 1, 400)]))
    mesh = QuadratureMesh.from_nodes(nodes)
    assert mesh.integrate(np.cos(nodes)) == pytest.approx(np.sin(1.0), rel=1e-6)


def test_mesh_rejects_unsorted_nodes():
    with pytest.raises(MeshMismatchError):
        QuadratureMesh.from_nodes(np.array([0.0, 0.5, 0.4, 1.0]))


def test_delta_inner_product(sl_space):
    f = sl_space.function(lambda t: [np.sin(np.pi * t), 5.0])
    g = sl_space.function(lambda t: [1j * np.sin(np.pi * t), -3.0])
    # Δ = diag(1, 0): the second component is invisible
    assert delta_inner(sl_space, f, f) == pytest.approx(0.5, rel=1e-8)
    assert delta_inner(sl_space, f, g) == pytest.approx(-0.5j, rel=1e-8)
    assert delta_inner(sl_space, g, f) == pytest.approx(np.conj(delta_inner(sl_space, f, g)))
    assert delta_norm(sl_space, f) == pytest.approx(np.sqrt(0.5), rel=1e-8)


def test_delta_equivalence_ignores_null_directions(sl_space):
    f = sl_space.function(lambda t: [t, 0.0])
    g = sl_space.function(lambda t: [t, np.exp(t)])
    assert delta_equivalent(sl_space, f, g, 1e-14)
    assert not delta_equivalent(sl_space, f, sl_space.zero(), 1e-3)


def test_functions_on_different_meshes_do_not_mix(sl_space):
    other = WeightedSpace.uniform(builtin_system("sl-dirichlet"), 101)
    f = sl_space.function(lambda t: [t, 0.0])
    g = other.function(lambda t: [t, 0.0])
    with pytest.raises(MeshMismatchError):
        _ = f + g
    with pytest.raises(MeshMismatchError):
        delta_inner(sl_space, f, g)


def test_space_mesh_must_span_interval():
    sys = builtin_system("sl-dirichlet")
    with pytest.raises(MeshMismatchError):
        WeightedSpace(sys, QuadratureMesh.uniform(0.0, 0.5, 11))


def test_function_values_are_vectors(sl_space):
    f = sl_space.function(lambda t: [t, 2 * t])
    assert f.values.shape == (201, 2)
    assert isinstance(f.scale(2j), WeightedFunction)
    np.testing.assert_allclose(f.at_b, [1.0, 2.0])


def test_cumulative_keeps_imaginary_parts():
    mesh = QuadratureMesh.uniform(0.5, 2.0, 31)
    t = mesh.nodes
    np.testing.assert_allclose(mesh.cumulative(1j * np.ones_like(t)), 1j * (t - 0.5), atol=1e-14)
    values = np.stack([3j * t ** 2, (1 + 2j) * t], axis=1)
    expected = np.stack([1j * (t ** 3 - 0.125), (1 + 2j) * (t ** 2 - 0.25) / 2], axis=1)
    np.testing.assert_allclose(mesh.cumulative(values), expected, atol=1e-12)


def test_simpson_refinement_order():
    exact = np.real((np.exp(1 + 2j) - 1) / (1 + 2j))
    errors = []
    for n in (11, 21, 41, 81):
        mesh = QuadratureMesh.uniform(0.0, 1.0, n)
        t = mesh.nodes
        errors.append(abs(mesh.integrate(np.exp(t) * np.cos(2 * t)) - exact))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(orders >= 3.5)
