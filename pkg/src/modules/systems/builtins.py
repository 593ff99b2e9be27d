"""Construct systems from plain descriptions and from the built-in catalog.

A description is a mapping with a ``kind``:

- ``"sturm-liouville"``: ``p``, ``q``, ``w`` polynomial coefficients (increasing degree), ``interval``.
- ``"free"``: ``dim_h``, ``dim_hhat``, ``interval``; B = 0, Δ = I.
- ``"matrix"``: ``dim_h``, ``dim_hhat``, ``interval`` and coefficient specs ``B``, ``Delta`` each
  ``{"kind": "constant", "value": M}``, ``{"kind": "polynomial", "coeffs": [M0, M1, ...]}``
  or ``{"kind": "tabulated", "t": [...], "values": [M, ...]}`` (matrices as JSON rows, entries [re, im]).
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Any

import numpy as np

from modules.systems.coefficients import (
    CoefficientKind,
    CoefficientMap,
    constant,
    polynomial,
    scalar_polynomial,
    tabulated,
)
from modules.systems.structure import SpaceDecomposition
from modules.systems.symmetric_system import SymmetricSystem, from_sturm_liouville
from modules.utils.complex_json import decode_matrix
from modules.utils.errors import CoefficientError
from modules.utils.resource_loader import get_resource, get_resources


def free_system(dec: SpaceDecomposition, interval: tuple[float, float], name: str = "free") -> SymmetricSystem:
    n = dec.dim_total
    return SymmetricSystem(
        dec,
        interval,
        constant(np.zeros((n, n)), CoefficientKind.hermitian, "zero"),
        constant(np.eye(n), CoefficientKind.weight, "identity"),
        name=name,
    )


def _coefficient(entry: Mapping[str, Any], kind: CoefficientKind) -> CoefficientMap:
    try:
        match entry["kind"]:
            case "constant":
                return constant(decode_matrix(entry["value"]), kind)
            case "polynomial":
                return polynomial([decode_matrix(c) for c in entry["coeffs"]], kind)
            case "tabulated":
                return tabulated(entry["t"], [decode_matrix(v) for v in entry["values"]], kind)
            case other:
                raise CoefficientError(f"unknown coefficient kind {other!r}")
    except (KeyError, ValueError) as exc:
        raise CoefficientError(f"malformed coefficient entry: {exc}") from exc


def system_from_description(desc: Mapping[str, Any], name: str = "system") -> SymmetricSystem:
    """Build a ``SymmetricSystem`` from a description mapping (see module docstring).

    Raises:
        CoefficientError: On unknown kinds or malformed coefficient data.
    """
    interval = tuple(float(x) for x in desc.get("interval", (0.0, 1.0)))
    if len(interval) != 2:
        raise CoefficientError("interval must have two endpoints")
    kind = desc.get("kind")
    if kind == "sturm-liouville":
        return from_sturm_liouville(
            scalar_polynomial(desc.get("p", [1.0])),
            scalar_polynomial(desc.get("q", [0.0])),
            scalar_polynomial(desc.get("w", [1.0])),
            interval,
            name=name,
        )
    dec = SpaceDecomposition(int(desc.get("dim_h", 1)), int(desc.get("dim_hhat", 0)))
    if kind == "free":
        return free_system(dec, interval, name=name)
    if kind == "matrix":
        return SymmetricSystem(
            dec,
            interval,
            _coefficient(desc["B"], CoefficientKind.hermitian),
            _coefficient(desc["Delta"], CoefficientKind.weight),
            name=name,
        )
    raise CoefficientError(f"unknown system kind {kind!r}")


def builtin_names() -> list[str]:
    return sorted(name for name, res in get_resources().items() if "system" in res)


def builtin_resource(name: str) -> dict[str, Any]:
    """The catalog entry (system description, default τ, λ-grid) for a built-in problem."""
    try:
        res = get_resource(name)
    except KeyError as exc:
        raise CoefficientError(str(exc)) from exc
    if "system" not in res:
        raise CoefficientError(f"resource {name!r} does not describe a system")
    return res


def builtin_system(name: str) -> SymmetricSystem:
    return system_from_description(builtin_resource(name)["system"], name=name)
