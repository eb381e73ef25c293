"""Seeded construction of structured test instances.

Randomness comes from numpy's PCG64 bit generator. Each public generator
draws from its own stream, keyed by ``(seed, crc32(stream name))`` through
``numpy.random.SeedSequence``; the same :class:`GeneratorConfig` therefore
always produces bitwise-identical matrices, and two different generators fed
the same config do not share random numbers.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .errors import GeneratorError
from .matrix import ComplexMatrix

UNITARY_RETRIES = 3
LATTICE_RESAMPLES = 10
LATTICE_MAX_COND = 100.0
TWO_PI = 2.0 * math.pi

Box = tuple[float, float, float, float]


@dataclass(frozen=True)
class GeneratorConfig:
    """Seed, dimension and spectral constraints for one random instance.

    ``spectrum_box`` is ``(re_lo, re_hi, im_lo, im_hi)``. Degenerate ranges
    (``lo == hi``) are allowed and pin that coordinate. ``norm_cap`` bounds
    the Frobenius norm of draws that have no box.
    """

    seed: int = 0
    dim: int = 4
    spectrum_box: Box | None = None
    norm_cap: float = 4.0

    def __post_init__(self):
        if isinstance(self.seed, bool) or not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if int(self.dim) < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim!r}")
        if not self.norm_cap > 0:
            raise ValueError("norm_cap must be positive")
        if self.spectrum_box is not None:
            box = tuple(float(x) for x in self.spectrum_box)
            if len(box) != 4 or not all(math.isfinite(x) for x in box):
                raise ValueError("spectrum_box must be four finite reals")
            if box[0] > box[1] or box[2] > box[3]:
                raise ValueError(f"spectrum_box ranges must satisfy lo <= hi, got {box}")
            object.__setattr__(self, "spectrum_box", box)

    def with_(self, **changes: Any) -> "GeneratorConfig":
        return replace(self, **changes)

    def to_json_obj(self) -> dict:
        return {
            "seed": int(self.seed),
            "dim": int(self.dim),
            "spectrum_box": None if self.spectrum_box is None else list(self.spectrum_box),
            "norm_cap": float(self.norm_cap),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GeneratorConfig":
        box = obj.get("spectrum_box")
        return cls(
            seed=int(obj["seed"]),
            dim=int(obj["dim"]),
            spectrum_box=None if box is None else tuple(box),
            norm_cap=float(obj.get("norm_cap", 4.0)),
        )


def rng_for(cfg: GeneratorConfig, stream: str) -> np.random.Generator:
    """Independent PCG64 stream for ``(cfg.seed, stream)``."""
    key = zlib.crc32(stream.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(cfg.seed), spawn_key=(key,))))


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic child seed, e.g. the seed of trial ``k`` of a suite."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    # QR of a Ginibre matrix with the R-diagonal phases folded back in (Haar measure)
    for _ in range(UNITARY_RETRIES):
        z = _complex_gaussian(rng, (n, n))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        if np.min(np.abs(d)) < 1e-10 * max(1.0, float(np.max(np.abs(d)))):
            continue
        return q * (d / np.abs(d))
    raise GeneratorError(f"could not orthonormalize a {n}x{n} Gaussian matrix")


def _conjugate(u: np.ndarray, diag: np.ndarray) -> np.ndarray:
    return (u * diag) @ u.conj().T


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) * 0.5


def _uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    if lo == hi:
        return np.full(size, lo)
    return rng.uniform(lo, hi, size)


def _box_eigenvalues(rng: np.random.Generator, box: Box, n: int) -> np.ndarray:
    re = _uniform(rng, box[0], box[1], n)
    im = _uniform(rng, box[2], box[3], n)
    return re + 1j * im


def _capped_eigenvalues(rng: np.random.Generator, n: int, cap: float, real: bool) -> np.ndarray:
    """Eigenvalues whose Euclidean norm is a uniform fraction in [0.1, 1] of ``cap``."""
    lam = rng.standard_normal(n) if real else _complex_gaussian(rng, n)
    nrm = float(np.linalg.norm(lam))
    target = cap * rng.uniform(0.1, 1.0)
    return lam * (target / nrm) if nrm > 0 else lam


def random_unitary(cfg: GeneratorConfig) -> ComplexMatrix:
    return ComplexMatrix(_unitary(rng_for(cfg, "random_unitary"), cfg.dim))


def random_hermitian(cfg: GeneratorConfig) -> ComplexMatrix:
    """``U diag(w) U*``; ``w`` uniform on ``[re_lo, re_hi]`` when a box is given."""
    rng = rng_for(cfg, "random_hermitian")
    u = _unitary(rng, cfg.dim)
    if cfg.spectrum_box is None:
        w = _capped_eigenvalues(rng, cfg.dim, cfg.norm_cap, real=True)
    else:
        w = _uniform(rng, cfg.spectrum_box[0], cfg.spectrum_box[1], cfg.dim)
    return ComplexMatrix(_hermitize(_conjugate(u, w.astype(np.complex128))))


def random_normal(cfg: GeneratorConfig) -> ComplexMatrix:
    """Normal matrix with eigenvalues from the box, or norm-capped Gaussian ones."""
    rng = rng_for(cfg, "random_normal")
    u = _unitary(rng, cfg.dim)
    if cfg.spectrum_box is None:
        lam = _capped_eigenvalues(rng, cfg.dim, cfg.norm_cap, real=False)
    else:
        lam = _box_eigenvalues(rng, cfg.spectrum_box, cfg.dim)
    return ComplexMatrix(_conjugate(u, lam))


def _constrained_parts(cfg: GeneratorConfig, stream: str) -> tuple[np.ndarray, np.ndarray]:
    if cfg.spectrum_box is None:
        raise ValueError("a spectrum_box is required for constrained normal matrices")
    rng = rng_for(cfg, stream)
    u = _unitary(rng, cfg.dim)
    return u, _box_eigenvalues(rng, cfg.spectrum_box, cfg.dim)


def random_normal_constrained(cfg: GeneratorConfig) -> ComplexMatrix:
    """``N = U diag(alpha + i beta) U*`` so that ``sigma(Im N) = {beta_k}`` lies in the box."""
    u, lam = _constrained_parts(cfg, "random_normal_constrained")
    return ComplexMatrix(_conjugate(u, lam))


def random_matrix(cfg: GeneratorConfig) -> ComplexMatrix:
    """Complex Gaussian matrix (generically non-normal) scaled to ``norm_cap``."""
    rng = rng_for(cfg, "random_matrix")
    z = _complex_gaussian(rng, (cfg.dim, cfg.dim))
    return ComplexMatrix(z * (cfg.norm_cap * rng.uniform(0.1, 1.0) / np.linalg.norm(z)))


def commuting_pair(
    cfg: GeneratorConfig, non_normal: bool = False
) -> tuple[ComplexMatrix, ComplexMatrix]:
    """``(A, N)`` diagonal in one random unitary basis, so they commute exactly
    up to rounding. ``N`` is normal; its eigenvalues come from the box when
    one is given.

    With ``non_normal=True`` (dim >= 2) ``N`` gets a doubled eigenvalue and
    ``A`` an upper-triangular 2x2 block on that eigenspace, making ``A``
    non-normal while still commuting with ``N``.
    """
    rng = rng_for(cfg, "commuting_pair")
    n = cfg.dim
    u = _unitary(rng, n)
    if cfg.spectrum_box is None:
        b = _capped_eigenvalues(rng, n, cfg.norm_cap, real=False)
    else:
        b = _box_eigenvalues(rng, cfg.spectrum_box, n)
    a = _capped_eigenvalues(rng, n, cfg.norm_cap, real=False)
    core = np.diag(a)
    if non_normal and n >= 2:
        b[1] = b[0]
        core[0, 1] = _complex_gaussian(rng, 1)[0] * cfg.norm_cap / math.sqrt(n)
    am = u @ core @ u.conj().T
    return ComplexMatrix(am), ComplexMatrix(_conjugate(u, b))


def equal_exp_pair(
    cfg: GeneratorConfig, projection: Sequence[int] | None = None
) -> tuple[ComplexMatrix, ComplexMatrix]:
    """``(A, B)`` with ``B = A + 2 pi i P``, ``P`` a spectral projection of ``A``.

    ``e^A = e^B`` and ``AB = BA`` hold exactly in exact arithmetic. By default
    ``P`` is random and nontrivial (neither 0 nor I), which needs dim >= 2;
    an explicit 0/1 ``projection`` overrides it.
    """
    u, lam = _constrained_parts(cfg, "equal_exp_pair")
    box = cfg.spectrum_box
    if not (0.0 < box[2] and box[3] < math.pi):
        raise ValueError("equal_exp_pair needs the imaginary range of the box inside (0, pi)")
    if projection is None:
        if cfg.dim < 2:
            raise GeneratorError("no nontrivial projection exists in dimension 1")
        rng = rng_for(cfg, "equal_exp_pair.projection")
        p = rng.integers(0, 2, cfg.dim)
        while p.min() == p.max():
            p = rng.integers(0, 2, cfg.dim)
    else:
        p = np.asarray(projection, dtype=int)
        if p.shape != (cfg.dim,) or not np.all((p == 0) | (p == 1)):
            raise ValueError("projection must be a 0/1 vector of length dim")
    a = _conjugate(u, lam)
    b = _conjugate(u, lam + 2j * math.pi * p)
    return ComplexMatrix(a), ComplexMatrix(b)


def canonical_pair() -> tuple[ComplexMatrix, ComplexMatrix]:
    """The 2x2 pair with ``e^A = e^B = -I`` and ``AB != BA``.

    ``A = [[0, pi], [-pi, 0]]``, ``B = [[pi, -2pi], [pi, -pi]]``, with ``pi``
    the nearest double.
    """
    pi = math.pi
    return (
        ComplexMatrix([[0.0, pi], [-pi, 0.0]]),
        ComplexMatrix([[pi, -2.0 * pi], [pi, -pi]]),
    )


def condition_number(s: np.ndarray) -> float:
    """Ratio of extreme singular values, via the Hermitian eigensolver on ``S* S``."""
    from .spectral import eig_hermitian

    w = eig_hermitian(ComplexMatrix(_hermitize(s.conj().T @ s))).eigenvalues.real
    if w[0] <= 0:
        return math.inf
    return math.sqrt(w[-1] / w[0])


def lattice_from_basis(s: ComplexMatrix | np.ndarray) -> ComplexMatrix:
    """``S diag(i pi, -i pi) S^{-1}``: any such matrix exponentiates to ``-I``."""
    s = s.data if isinstance(s, ComplexMatrix) else np.asarray(s, dtype=np.complex128)
    if s.shape != (2, 2):
        raise ValueError("lattice construction is defined for 2x2 bases")
    d = np.array([1j * math.pi, -1j * math.pi])
    return ComplexMatrix((s * d) @ np.linalg.inv(s))


def lattice_counterexample(cfg: GeneratorConfig) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Canonical ``A`` with a random ``B`` sharing ``e^B = -I``; generically ``AB != BA``."""
    if cfg.dim != 2:
        raise ValueError("lattice_counterexample is defined for dim = 2")
    rng = rng_for(cfg, "lattice_counterexample")
    a, _ = canonical_pair()
    for _ in range(LATTICE_RESAMPLES):
        s = _complex_gaussian(rng, (2, 2))
        if condition_number(s) <= LATTICE_MAX_COND:
            return a, lattice_from_basis(s)
    raise GeneratorError(
        f"no basis with condition number <= {LATTICE_MAX_COND} in {LATTICE_RESAMPLES} draws"
    )
