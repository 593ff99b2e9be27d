"""JSON encoding of complex scalars and matrices.

Complex numbers travel as ``[re, im]`` pairs; plain numbers are accepted on
input as real values. A matrix is always a list of rows, so ``[[1, 0], [0, 1]]``
is the real 2x2 identity and ``[[[0, 1]]]`` is the 1x1 matrix ``i``.
"""

from __future__ import annotations

from typing import Any

import numpy as np


def decode_scalar(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex entries must be [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(float(value))


def decode_vector(data: Any) -> np.ndarray:
    return np.array([decode_scalar(v) for v in data], dtype=complex)


def decode_matrix(data: Any) -> np.ndarray:
    """Decode a list of rows into a 2-D complex array.

    Raises:
        ValueError: On ragged rows or malformed entries.
    """
    if not isinstance(data, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in data):
        raise ValueError("a matrix must be a list of rows")
    rows = [decode_vector(row) for row in data]
    if len({len(r) for r in rows}) > 1:
        raise ValueError("matrix rows have inconsistent lengths")
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    return np.vstack(rows)


def encode_scalar(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(a: np.ndarray) -> list[list[list[float]]]:
    return [[encode_scalar(v) for v in row] for row in np.atleast_2d(a)]
