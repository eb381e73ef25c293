"""Matrix exponential by two independent routes.

``expm`` is scaling and squaring with diagonal Pade approximants (degree
selection from the 1-norm, Higham 2005). ``expm_normal`` goes through the
spectral decomposition of a normal matrix. They are meant to check each
other, so ``expm`` never looks at normality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ExpOverflowError
from .matrix import ComplexMatrix, adjoint, frobenius_norm
from .spectral import eig_normal

UNIT_ROUNDOFF = 2.0**-53

# Largest 1-norm for which the degree-m approximant has backward error <= u.
PADE_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0,
    ),
    13: (
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ),
}

# 2**s with s beyond this overflows any nonzero double anyway
MAX_SQUARINGS = 1100


class ExpMethod(str, Enum):
    SCALING_SQUARING = "scaling_squaring"
    SPECTRAL_PATH = "spectral_path"


@dataclass(frozen=True)
class ExpResult:
    value: ComplexMatrix
    method: ExpMethod
    est_error: float


def onenorm(a: np.ndarray) -> float:
    """Exact 1-norm (largest absolute column sum)."""
    return float(np.max(np.sum(np.abs(a), axis=0)))


def _pade_uv(a: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    b = PADE_COEFFS[m]
    n = a.shape[0]
    ident = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    if m == 13:
        a4 = a2 @ a2
        a6 = a4 @ a2
        u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
                 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
        v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
             + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
        return u, v
    powers = [ident, a2]
    for _ in range((m - 1) // 2 - 1):
        powers.append(powers[-1] @ a2)
    u_inner = sum(b[2 * k + 1] * powers[k] for k in range(len(powers)))
    v = sum(b[2 * k] * powers[k] for k in range(len(powers)))
    return a @ u_inner, v


def _expm_array(a: np.ndarray) -> tuple[np.ndarray, float]:
    norm1 = onenorm(a)
    est = UNIT_ROUNDOFF * norm1
    for m in (3, 5, 7, 9):
        if norm1 <= PADE_THETA[m]:
            u, v = _pade_uv(a, m)
            return np.linalg.solve(v - u, v + u), est
    s = 0
    if norm1 > PADE_THETA[13]:
        s = int(math.ceil(math.log2(norm1 / PADE_THETA[13])))
    if s > MAX_SQUARINGS:
        raise ExpOverflowError(f"1-norm {norm1:.3e} too large for scaling and squaring")
    u, v = _pade_uv(a / 2.0**s, 13)
    r = np.linalg.solve(v - u, v + u)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            r = r @ r
            if not np.all(np.isfinite(r)):
                raise ExpOverflowError("entries left the double range during squaring")
    return r, est


def expm(t: ComplexMatrix) -> ExpResult:
    """``e^t`` by scaling and squaring.

    ``est_error`` is the a priori absolute backward-error bound
    ``u * ||t||_1`` that the degree/scaling choice guarantees.
    """
    try:
        value, est = _expm_array(t.data)
    except np.linalg.LinAlgError as exc:
        raise ExpOverflowError(f"Pade denominator is singular: {exc}") from exc
    if not np.all(np.isfinite(value)):
        raise ExpOverflowError("matrix exponential is not representable")
    return ExpResult(ComplexMatrix._wrap(value), ExpMethod.SCALING_SQUARING, est)


def expm_normal(n: ComplexMatrix) -> ExpResult:
    """``U diag(e^lambda) U*`` from the normal eigendecomposition."""
    dec = eig_normal(n)
    with np.errstate(over="raise"):
        try:
            value = dec.apply(np.exp)
        except FloatingPointError as exc:
            raise ExpOverflowError("scalar exponential overflowed") from exc
    # unitary basis error times the largest eigenvalue magnitude
    u = dec.basis.data
    basis_err = float(np.linalg.norm(u @ u.conj().T - np.eye(n.dim), "fro"))
    scale = float(np.max(np.abs(np.exp(dec.eigenvalues))))
    est = (basis_err + UNIT_ROUNDOFF * n.dim) * scale
    return ExpResult(value, ExpMethod.SPECTRAL_PATH, est)


def exp_adjoint_check(t: ComplexMatrix) -> float:
    """``||e^{t*} - (e^t)*||_F / max(1, ||e^t||_F)``."""
    et = expm(t).value
    ets = expm(adjoint(t)).value
    return frobenius_norm(ets.data - et.data.conj().T) / max(1.0, frobenius_norm(et))


def exp(t: ComplexMatrix) -> ComplexMatrix:
    """Shorthand for ``expm(t).value``."""
    return expm(t).value
