"""Matrix-valued coefficient maps t ↦ B(t), t ↦ Δ(t).

Built-in constructors cover constant matrices, matrix polynomials,
tabulated samples with piecewise-linear interpolation and diagonal
matrices assembled from scalar functions (Sturm–Liouville reductions).
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.interpolate import make_interp_spline

from modules.utils.errors import CoefficientError


class CoefficientKind(str, Enum):
    hermitian = "hermitian-B"
    weight = "psd-weight-Δ"

    @classmethod
    def coerce(cls, value: "CoefficientKind | str") -> "CoefficientKind":
        if isinstance(value, cls):
            return value
        raw = str(value).strip().lower()
        aliases = {
            "b": cls.hermitian,
            "hermitian": cls.hermitian,
            "hermitian-b": cls.hermitian,
            "delta": cls.weight,
            "weight": cls.weight,
            "psd-weight-δ": cls.weight,
        }
        try:
            return aliases[raw]
        except KeyError as exc:
            raise ValueError(f"Invalid CoefficientKind {value!r}. Valid: {sorted(aliases)}") from exc


@dataclass(frozen=True, slots=True)
class CoefficientMap:
    """A pure map from t to a dim × dim complex matrix."""

    evaluate: Callable[[float], np.ndarray]
    kind: CoefficientKind
    dim: int
    label: str = ""

    def __call__(self, t: float) -> np.ndarray:
        return self.evaluate(t)

    def sample(self, ts: np.ndarray) -> np.ndarray:
        """Stack the values at ``ts`` into an array of shape (len(ts), dim, dim)."""
        out = np.empty((len(ts), self.dim, self.dim), dtype=complex)
        for k, t in enumerate(ts):
            out[k] = self.evaluate(float(t))
        return out


def _square(matrix: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise CoefficientError(f"{what} must be a square matrix, got shape {a.shape}")
    return a


def constant(matrix: np.ndarray, kind: CoefficientKind | str, label: str = "constant") -> CoefficientMap:
    a = _square(matrix, "constant coefficient")
    a.setflags(write=False)
    return CoefficientMap(lambda _t: a.copy(), CoefficientKind.coerce(kind), a.shape[0], label)


def polynomial(coeffs: Sequence[np.ndarray], kind: CoefficientKind | str, label: str = "polynomial") -> CoefficientMap:
    """Σ_k coeffs[k] · t^k."""
    if not coeffs:
        raise CoefficientError("polynomial coefficient needs at least one matrix")
    stack = np.stack([_square(c, "polynomial coefficient") for c in coeffs])

    def _eval(t: float) -> np.ndarray:
        powers = t ** np.arange(len(stack))
        return np.tensordot(powers, stack, axes=1)

    return CoefficientMap(_eval, CoefficientKind.coerce(kind), stack.shape[1], label)


def tabulated(ts: Sequence[float], values: Sequence[np.ndarray], kind: CoefficientKind | str,
              label: str = "tabulated") -> CoefficientMap:
    """Piecewise-linear interpolation of matrix samples; constant extrapolation outside the table."""
    t = np.asarray(ts, dtype=float)
    v = np.stack([_square(m, "tabulated coefficient") for m in values])
    if len(t) != len(v) or len(t) < 2 or np.any(np.diff(t) <= 0):
        raise CoefficientError("tabulated coefficient needs ≥ 2 strictly increasing nodes, one matrix each")
    spline = make_interp_spline(t, v, k=1, axis=0)

    def _eval(s: float) -> np.ndarray:
        return np.asarray(spline(min(max(s, t[0]), t[-1])), dtype=complex)

    return CoefficientMap(_eval, CoefficientKind.coerce(kind), v.shape[1], label)


def diagonal(scalars: Sequence[Callable[[float], complex]], kind: CoefficientKind | str,
             label: str = "diagonal") -> CoefficientMap:
    fns = tuple(scalars)

    def _eval(t: float) -> np.ndarray:
        return np.diag([complex(f(t)) for f in fns])

    return CoefficientMap(_eval, CoefficientKind.coerce(kind), len(fns), label)


def scalar_polynomial(coeffs: Sequence[float]) -> Callable[[float], float]:
    """Return t ↦ Σ coeffs[k] t^k (coefficients in increasing degree)."""
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    return lambda t: float(poly(t))
