"""Cartesian decomposition, eigendecompositions and interval certificates.

Hermitian matrices are diagonalized by cyclic complex Jacobi rotations.
Normal matrices are diagonalized through their commuting cartesian parts:
first the real part, then the imaginary part compressed onto each
eigenspace (cluster) of the real part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotHermitianError, NotNormalError
from .matrix import ComplexMatrix, frobenius_norm, normality_residual

JACOBI_MAX_SWEEPS = 30
JACOBI_REL_TOL = 1e-14
HERMITIAN_INPUT_TOL = 1e-12
NORMAL_INPUT_TOL = 1e-10
CLUSTER_GAP_REL = 1e-8
CERTIFICATE_MARGIN_REL = 1e-8


@dataclass(frozen=True)
class CartesianPair:
    real_part: ComplexMatrix
    imag_part: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        return ComplexMatrix._wrap(self.real_part.data + 1j * self.imag_part.data)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Unitary eigenbasis (columns) and matching eigenvalues.

    Inside a degenerate cluster only the spanned invariant subspace is
    meaningful; the individual columns depend on rounding.
    """

    basis: ComplexMatrix
    eigenvalues: np.ndarray  # complex128, read-only

    def reconstruct(self) -> ComplexMatrix:
        u = self.basis.data
        return ComplexMatrix._wrap((u * self.eigenvalues) @ u.conj().T)

    def apply(self, f) -> ComplexMatrix:
        """``U diag(f(lambda)) U*`` for a vectorized scalar function ``f``."""
        u = self.basis.data
        return ComplexMatrix._wrap((u * f(self.eigenvalues)) @ u.conj().T)


@dataclass(frozen=True)
class IntervalCertificate:
    lo: float
    hi: float
    min_eig: float
    max_eig: float
    margin: float
    holds: bool

    def to_json_obj(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "margin": self.margin,
            "holds": self.holds,
        }


def cartesian(t: ComplexMatrix) -> CartesianPair:
    """``Re T = (T + T*)/2`` and ``Im T = (T - T*)/(2i)``."""
    a = t.data
    ah = a.conj().T
    # multiplying by -0.5j (not dividing by 2j) keeps Im T exactly Hermitian
    return CartesianPair(
        ComplexMatrix._wrap((a + ah) * 0.5),
        ComplexMatrix._wrap((a - ah) * -0.5j),
    )


def is_normal(t: ComplexMatrix, tol: float = NORMAL_INPUT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return normality_residual(t) <= tol


def _off_norm(a: np.ndarray) -> float:
    # direct sum over off-diagonal entries; total - diagonal cancels badly
    return float(np.linalg.norm(a[~np.eye(a.shape[0], dtype=bool)]))


def _jacobi_hermitian(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi on a Hermitian array. Returns (real eigenvalues, V) unsorted."""
    n = h.shape[0]
    a = np.array((h + h.conj().T) * 0.5, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a, "fro"))
    if n == 1 or scale == 0.0:
        return np.real(np.diagonal(a)).copy(), v
    target = JACOBI_REL_TOL * scale
    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = _off_norm(a)
        if off <= target:
            return np.real(np.diagonal(a)).copy(), v
        if sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceError(off, JACOBI_MAX_SWEEPS)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                # smaller of the two rotation angles
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                pc = phase.conjugate()
                g = np.array([[c, s], [-s * pc, c * pc]], dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    raise AssertionError("unreachable")


def eig_hermitian(h: ComplexMatrix) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending and real."""
    arr = h.data
    scale = float(np.linalg.norm(arr, "fro"))
    asym = float(np.linalg.norm(arr - arr.conj().T, "fro"))
    if asym > HERMITIAN_INPUT_TOL * max(scale, np.finfo(float).tiny):
        raise NotHermitianError(asym, HERMITIAN_INPUT_TOL * scale)
    w, v = _jacobi_hermitian(arr)
    order = np.argsort(w, kind="stable")
    w = w[order].astype(np.complex128)
    w.flags.writeable = False
    return SpectralDecomposition(ComplexMatrix._wrap(v[:, order]), w)


def _clusters(values: np.ndarray, gap: float) -> list[slice]:
    """Split ascending ``values`` wherever consecutive entries differ by more than ``gap``."""
    out = []
    start = 0
    for k in range(1, len(values)):
        if values[k] - values[k - 1] > gap:
            out.append(slice(start, k))
            start = k
    out.append(slice(start, len(values)))
    return out


def eig_normal(n: ComplexMatrix, tol: float = NORMAL_INPUT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a normal matrix via its commuting cartesian parts.

    Eigenvalues come back sorted lexicographically by (re, im).
    """
    res = normality_residual(n)
    if res > tol:
        raise NotNormalError(res, tol)
    parts = cartesian(n)
    re_dec = eig_hermitian(parts.real_part)
    alphas = re_dec.eigenvalues.real
    u = re_dec.basis.to_numpy()
    im = parts.imag_part.data
    # Threshold is taken relative to ||N||_F, not ||Re N||_F: for (nearly)
    # skew-Hermitian N the real part is pure rounding noise and would split.
    gap = CLUSTER_GAP_REL * frobenius_norm(n)
    for cl in _clusters(alphas, gap):
        uc = u[:, cl]
        block = uc.conj().T @ im @ uc
        block = (block + block.conj().T) * 0.5
        _, w = _jacobi_hermitian(block)
        u[:, cl] = uc @ w
    # Rayleigh quotients give lambda_k = alpha_k + i beta_k in the joint basis
    lam = np.einsum("ij,ik,kj->j", u.conj(), n.data, u)
    order = np.lexsort((lam.imag, lam.real))  # stable: ties keep column order
    lam = lam[order].copy()
    lam.flags.writeable = False
    return SpectralDecomposition(ComplexMatrix._wrap(u[:, order]), lam)


def spectrum(t: ComplexMatrix) -> np.ndarray:
    """Eigenvalues of a normal matrix (Hermitian input goes through the Jacobi path)."""
    if float(np.linalg.norm(t.data - t.data.conj().T, "fro")) <= HERMITIAN_INPUT_TOL * max(
        frobenius_norm(t), np.finfo(float).tiny
    ):
        return eig_hermitian(t).eigenvalues
    return eig_normal(t).eigenvalues


def spectral_radius(t: ComplexMatrix) -> float:
    """``max |lambda|``; normal input only."""
    return float(np.max(np.abs(eig_normal(t).eigenvalues)))


def default_margin(h: ComplexMatrix) -> float:
    return CERTIFICATE_MARGIN_REL * max(1.0, frobenius_norm(h))


def certify_interval(
    h: ComplexMatrix, lo: float, hi: float, margin: float | None = None
) -> IntervalCertificate:
    """Certify that the spectrum of Hermitian ``h`` lies strictly inside ``(lo, hi)``."""
    if margin is None:
        margin = default_margin(h)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    w = eig_hermitian(h).eigenvalues.real
    mn, mx = float(w[0]), float(w[-1])
    holds = mn >= lo + margin and mx <= hi - margin
    return IntervalCertificate(float(lo), float(hi), mn, mx, float(margin), bool(holds))


def certify_imag_part(
    t: ComplexMatrix, lo: float = 0.0, hi: float = math.pi, margin: float | None = None
) -> IntervalCertificate:
    """Interval certificate for ``sigma(Im t)``."""
    return certify_interval(cartesian(t).imag_part, lo, hi, margin)


__all__ = [
    "CartesianPair",
    "SpectralDecomposition",
    "IntervalCertificate",
    "cartesian",
    "is_normal",
    "eig_hermitian",
    "eig_normal",
    "spectrum",
    "spectral_radius",
    "certify_interval",
    "certify_imag_part",
    "default_margin",
]
