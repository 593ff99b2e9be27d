"""The semi-Hilbert space L²_Δ on a fixed quadrature mesh.

Functions are stored by their samples on the mesh. All integrals are
weighted sums with composite-Simpson weights; cumulative integrals use
``scipy.integrate.cumulative_simpson`` on the same nodes.

The quotient modulo Δ-null functions is not materialized; ``delta_equivalent``
tells whether two representatives coincide in L²_Δ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from modules.systems.symmetric_system import SymmetricSystem
from modules.utils.errors import MeshMismatchError


@dataclass(frozen=True, slots=True)
class QuadratureMesh:
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def uniform(cls, a: float, b: float, n: int = 801) -> "QuadratureMesh":
        """Uniform composite-Simpson mesh; ``n`` is rounded up to an odd count ≥ 3."""
        n = max(3, int(n) | 1)
        nodes = np.linspace(a, b, n)
        return cls.from_nodes(nodes)

    @classmethod
    def from_nodes(cls, nodes: np.ndarray) -> "QuadratureMesh":
        """Simpson weights for arbitrary increasing nodes (scipy handles uneven panels)."""
        x = np.asarray(nodes, dtype=float)
        if x.ndim != 1 or len(x) < 3 or np.any(np.diff(x) <= 0):
            raise MeshMismatchError("mesh needs ≥ 3 strictly increasing nodes")
        # simpson is linear in the samples, so integrating the unit vectors yields the weights
        weights = simpson(np.eye(len(x)), x=x, axis=1)
        x.setflags(write=False)
        weights.setflags(write=False)
        return cls(x, weights)

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """∫ values dt along axis 0."""
        return np.tensordot(self.weights, values, axes=(0, 0))

    def cumulative(self, values: np.ndarray) -> np.ndarray:
        """t_k ↦ ∫_a^{t_k} values dt along axis 0 (zero at a)."""
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            return cumulative_simpson(values, x=self.nodes, axis=0, initial=0)
        # cumulative_simpson writes into a real buffer on some scipy releases
        re = cumulative_simpson(values.real, x=self.nodes, axis=0, initial=0)
        im = cumulative_simpson(values.imag, x=self.nodes, axis=0, initial=0)
        return re + 1j * im


class Sampled(Protocol):
    """Anything with a grid and per-node values (vectors or matrices)."""

    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True, slots=True)
class WeightedFunction:
    """Samples of f: [a, b] → 𝐇; ``values`` has shape (N, dim)."""

    grid: np.ndarray
    values: np.ndarray

    def __add__(self, other: "WeightedFunction") -> "WeightedFunction":
        _same_grid(self, other)
        return WeightedFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "WeightedFunction") -> "WeightedFunction":
        _same_grid(self, other)
        return WeightedFunction(self.grid, self.values - other.values)

    def scale(self, c: complex) -> "WeightedFunction":
        return WeightedFunction(self.grid, c * self.values)

    @property
    def at_a(self) -> np.ndarray:
        return self.values[0]

    @property
    def at_b(self) -> np.ndarray:
        return self.values[-1]


@dataclass(frozen=True, slots=True)
class WeightedSpace:
    """A system together with its quadrature mesh and Δ sampled on it."""

    system: SymmetricSystem
    mesh: QuadratureMesh
    delta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        nodes = self.mesh.nodes
        if abs(nodes[0] - self.system.a) > 1e-12 or abs(nodes[-1] - self.system.b) > 1e-12:
            raise MeshMismatchError("mesh must span the system interval exactly")
        d = self.system.Delta.sample(nodes)
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)

    @classmethod
    def uniform(cls, system: SymmetricSystem, n: int = 801) -> "WeightedSpace":
        return cls(system, QuadratureMesh.uniform(system.a, system.b, n))

    @property
    def grid(self) -> np.ndarray:
        return self.mesh.nodes

    def function(self, fn) -> WeightedFunction:
        """Sample a callable t ↦ vector on the mesh."""
        vals = np.array([np.asarray(fn(float(t)), dtype=complex) for t in self.grid])
        return WeightedFunction(self.grid, vals.reshape(len(self.grid), -1))

    def zero(self) -> WeightedFunction:
        return WeightedFunction(self.grid, np.zeros((len(self.grid), self.system.dim), dtype=complex))


def _same_grid(x: Sampled, y: Sampled) -> None:
    if x.grid is y.grid:
        return
    if x.grid.shape != y.grid.shape or not np.allclose(x.grid, y.grid, rtol=0, atol=1e-13):
        raise MeshMismatchError("objects are sampled on different meshes")


def _on_mesh(space: WeightedSpace, *objs: Sampled) -> None:
    nodes = space.mesh.nodes
    for obj in objs:
        g = obj.grid
        if g is nodes:
            continue
        if g.shape != nodes.shape or not np.allclose(g, nodes, rtol=0, atol=1e-13):
            raise MeshMismatchError("object is not sampled on the space's quadrature mesh")


def delta_inner(space: WeightedSpace, f: WeightedFunction, g: WeightedFunction) -> complex:
    """(f, g)_Δ = ∫ (Δ(t) f(t), g(t)) dt = ∫ g(t)* Δ(t) f(t) dt."""
    _on_mesh(space, f, g)
    return complex(np.einsum("k,ki,kij,kj->", space.mesh.weights, g.values.conj(), space.delta, f.values))


def delta_norm(space: WeightedSpace, f: WeightedFunction) -> float:
    return float(np.sqrt(max(delta_inner(space, f, f).real, 0.0)))


def delta_equivalent(space: WeightedSpace, f: WeightedFunction, g: WeightedFunction, tol: float) -> bool:
    """True when f and g represent the same element of L²_Δ (‖f − g‖_Δ ≤ tol)."""
    return delta_norm(space, f - g) <= tol


def adjoint_apply(space: WeightedSpace, y: Sampled, f: WeightedFunction) -> np.ndarray:
    """∫ Y*(t) Δ(t) f(t) dt for a k-column solution matrix Y."""
    _on_mesh(space, y, f)
    return np.einsum("k,kji,kjl,kl->i", space.mesh.weights, y.values.conj(), space.delta, f.values)


def solution_gram(space: WeightedSpace, y: Sampled, z: Sampled) -> np.ndarray:
    """∫ Y*(t) Δ(t) Z(t) dt; entry (j, k) = ∫ (Δ Z_k, Y_j) dt."""
    _on_mesh(space, y, z)
    return np.einsum("k,kji,kjl,klm->im", space.mesh.weights, y.values.conj(), space.delta, z.values)
