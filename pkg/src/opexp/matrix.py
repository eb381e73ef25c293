"""Dense complex square matrices: arithmetic, adjoints, norms, commutators.

A :class:`ComplexMatrix` is an immutable wrapper around a read-only
``complex128`` array. Every operation returns a new matrix.
"""
from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, MatrixFormatError


class ComplexMatrix:
    """An n x n complex matrix with finite entries, n >= 1."""

    __slots__ = ("_data",)

    def __init__(self, data: Any):
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MatrixFormatError(f"expected a square 2-d array, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise MatrixFormatError("dimension must be at least 1")
        if not np.all(np.isfinite(arr)):
            raise MatrixFormatError("matrix entries must be finite")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "ComplexMatrix":
        # Trusted fast path for arrays produced internally; still rejects inf/nan.
        if not np.all(np.isfinite(arr)):
            raise MatrixFormatError("operation produced non-finite entries")
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @property
    def data(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def to_numpy(self) -> np.ndarray:
        """Writable copy of the entries."""
        return self._data.copy()

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls._wrap(np.eye(n, dtype=np.complex128))

    @classmethod
    def zeros(cls, n: int) -> "ComplexMatrix":
        return cls._wrap(np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def diag(cls, values: Iterable[complex]) -> "ComplexMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=np.complex128)))

    # operator sugar; the named functions below are the primary API
    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return add(self, other)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return sub(self, other)

    def __neg__(self) -> "ComplexMatrix":
        return ComplexMatrix._wrap(-self._data)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return mul(self, other)

    def __mul__(self, scalar: complex) -> "ComplexMatrix":
        if isinstance(scalar, ComplexMatrix):
            return NotImplemented
        return ComplexMatrix._wrap(self._data * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "ComplexMatrix":
        return ComplexMatrix._wrap(self._data / complex(scalar))

    @property
    def H(self) -> "ComplexMatrix":
        return adjoint(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(
            np.array_equal(self._data, other._data)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ComplexMatrix(dim={self.dim}, {np.array2string(self._data, precision=4)})"

    def to_json_obj(self) -> dict:
        return matrix_to_json_obj(self)


def _check_dims(a: ComplexMatrix, b: ComplexMatrix, op: str) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(a.dim, b.dim, op)


def add(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, "add")
    return ComplexMatrix._wrap(a.data + b.data)


def sub(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, "sub")
    return ComplexMatrix._wrap(a.data - b.data)


def mul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, "mul")
    return ComplexMatrix._wrap(a.data @ b.data)


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return ComplexMatrix._wrap(a.data.conj().T)


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """``a @ b - b @ a``."""
    _check_dims(a, b, "commutator")
    return ComplexMatrix._wrap(a.data @ b.data - b.data @ a.data)


def frobenius_norm(a: ComplexMatrix | np.ndarray) -> float:
    arr = a.data if isinstance(a, ComplexMatrix) else np.asarray(a)
    return float(np.linalg.norm(arr, "fro"))


def comm_residual(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Scale-free commutation defect ``||ab - ba||_F / max(1, ||a||_F ||b||_F)``."""
    _check_dims(a, b, "comm_residual")
    c = a.data @ b.data - b.data @ a.data
    scale = max(1.0, frobenius_norm(a) * frobenius_norm(b))
    return float(np.linalg.norm(c, "fro")) / scale


def relative_distance(a: ComplexMatrix, b: ComplexMatrix, ref: ComplexMatrix | None = None) -> float:
    """``||a - b||_F / max(1, ||ref||_F)``; ``ref`` defaults to ``a``."""
    _check_dims(a, b, "relative_distance")
    ref = a if ref is None else ref
    return float(np.linalg.norm(a.data - b.data, "fro")) / max(1.0, frobenius_norm(ref))


def selfadjoint_residual(a: ComplexMatrix) -> float:
    """``||a - a*||_F / max(1, ||a||_F)``."""
    return float(np.linalg.norm(a.data - a.data.conj().T, "fro")) / max(1.0, frobenius_norm(a))


def normality_residual(a: ComplexMatrix) -> float:
    """``comm_residual(a, a*)``."""
    return comm_residual(a, adjoint(a))


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(a.data))


def det(a: ComplexMatrix) -> complex:
    # LAPACK getrf: LU with partial pivoting.
    return complex(np.linalg.det(a.data))


def power(a: ComplexMatrix, k: int) -> ComplexMatrix:
    return ComplexMatrix._wrap(np.linalg.matrix_power(a.data, k))


# ---------------------------------------------------------------------------
# JSON interchange: {"dim": n, "entries": [[re, im], ...]} row-major


def matrix_to_json_obj(m: ComplexMatrix) -> dict:
    flat = m.data.reshape(-1)
    return {
        "dim": m.dim,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def _reject_constant(token: str) -> float:
    raise MatrixFormatError(f"non-finite value {token!r} in matrix JSON")


def matrix_from_json_obj(obj: Any) -> ComplexMatrix:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise MatrixFormatError('matrix JSON must be an object with "dim" and "entries"')
    dim = obj["dim"]
    entries = obj["entries"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise MatrixFormatError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise MatrixFormatError(f"expected {dim * dim} entries, got {got}")
    values = np.empty(dim * dim, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise MatrixFormatError(f"entry {k} must be a [re, im] pair of numbers")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError(f"entry {k} is not finite")
        values[k] = complex(re, im)
    return ComplexMatrix(values.reshape(dim, dim))


def dumps_matrix(m: ComplexMatrix, **extra: Any) -> str:
    obj = matrix_to_json_obj(m)
    obj.update(extra)
    return json.dumps(obj, allow_nan=False)


def loads_matrix(text: str) -> ComplexMatrix:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from exc
    return matrix_from_json_obj(obj)


def as_matrix(x: ComplexMatrix | Sequence | np.ndarray) -> ComplexMatrix:
    return x if isinstance(x, ComplexMatrix) else ComplexMatrix(x)
