"""Seeded batch runs of the theorem checks over generated instances.

Trial ``k`` of a suite uses the config ``cfg.with_(seed=derive_seed(cfg.seed, k))``
(possibly with its dimension or box adjusted by the instance family), and
that effective config is stored in the report so any single trial can be
replayed with :func:`build_instance`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import generators as gen
from .checks import CHECKS, TOL_COMMUTE, TOL_REFUTE, CheckReport, HALF_PI_INTERVAL, commutant_basis
from .expfun import exp
from .generators import GeneratorConfig, derive_seed
from .matrix import ComplexMatrix

# Default boxes when the caller's config carries none.
CONSTRAINED_BOX = (-1.0, 1.0, 0.1, math.pi - 0.1)
HERMITIAN_BOX = (-2.0, 2.0, 0.0, 0.0)
REMARK_BOX = (-1.0, 1.0, -math.pi / 4, math.pi / 4)

Instance = tuple[GeneratorConfig, tuple, dict]
Builder = Callable[[GeneratorConfig], Instance]


def _box(cfg: GeneratorConfig, default) -> GeneratorConfig:
    return cfg if cfg.spectrum_box is not None else cfg.with_(spectrum_box=default)


def _sub(cfg: GeneratorConfig, k: int, **changes) -> GeneratorConfig:
    """Config for the k-th auxiliary matrix of an instance."""
    return cfg.with_(seed=derive_seed(cfg.seed, 1_000_003, k), **changes)


def _shared_basis(cfg: GeneratorConfig, *eigenvalue_sets: np.ndarray) -> list[ComplexMatrix]:
    u = gen.random_unitary(cfg).data
    return [ComplexMatrix((u * lam) @ u.conj().T) for lam in eigenvalue_sets]


def _draw(cfg: GeneratorConfig, stream: str, lo: float, hi: float, size: int | None = None) -> np.ndarray:
    return gen.rng_for(cfg, stream).uniform(lo, hi, cfg.dim if size is None else size)


def _hermitian_pair_shared(cfg: GeneratorConfig) -> tuple[ComplexMatrix, ComplexMatrix]:
    box = cfg.spectrum_box or HERMITIAN_BOX
    w = gen.rng_for(cfg, "suite.shared_hermitian").uniform(box[0], box[1], (2, cfg.dim))
    a, b = _shared_basis(cfg, w[0].astype(complex), w[1].astype(complex))
    return _sym(a), _sym(b)


def _sym(m: ComplexMatrix) -> ComplexMatrix:
    return ComplexMatrix((m.data + m.data.conj().T) * 0.5)


def _projection(cfg: GeneratorConfig, stream: str, nonzero: bool = True) -> np.ndarray:
    rng = gen.rng_for(cfg, stream)
    p = rng.integers(0, 2, cfg.dim)
    if nonzero and not p.any():
        p[rng.integers(0, cfg.dim)] = 1
    return p


# --- instance families -------------------------------------------------------

def _exp_identity_zero(cfg):
    return cfg, (ComplexMatrix.zeros(cfg.dim),), {}


def _exp_identity_hermitian(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (gen.random_hermitian(cfg),), {}


def _exp_identity_periodic(cfg):
    # 2 pi i P with P a nonzero projection: e^T = I but T is not self-adjoint
    p = _projection(cfg, "suite.periodic")
    (t,) = _shared_basis(cfg, 2j * math.pi * p)
    return cfg, (t,), {}


def _fuglede_commuting(cfg):
    return cfg, gen.commuting_pair(cfg), {}


def _fuglede_commuting_non_normal(cfg):
    return cfg, gen.commuting_pair(cfg, non_normal=True), {}


def _canonical_b_a(cfg):
    a, b = gen.canonical_pair()
    return cfg.with_(dim=2), (b, a), {}


def _canonical_a_b(cfg):
    return cfg.with_(dim=2), gen.canonical_pair(), {}


def _wermuth_commuting(cfg):
    return cfg, _hermitian_pair_shared(cfg), {}


def _wermuth_independent(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (gen.random_hermitian(cfg), gen.random_hermitian(_sub(cfg, 1))), {}


def _san_commuting(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    box = cfg.spectrum_box
    rng = gen.rng_for(cfg, "suite.san_commuting")
    s_w = rng.uniform(HERMITIAN_BOX[0], HERMITIAN_BOX[1], cfg.dim)
    lam = rng.uniform(box[0], box[1], cfg.dim) + 1j * rng.uniform(box[2], box[3], cfg.dim)
    s, n = _shared_basis(cfg, s_w.astype(complex), lam)
    return cfg, (_sym(s), n), {}


def _san_independent(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    s = gen.random_hermitian(_sub(cfg, 1, spectrum_box=HERMITIAN_BOX))
    return cfg, (s, gen.random_normal_constrained(cfg)), {}


def _san_hermitian_n(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    s = gen.random_hermitian(_sub(cfg, 1))
    lo, hi = HALF_PI_INTERVAL
    return cfg, (s, gen.random_hermitian(cfg)), {"lo": lo, "hi": hi}


def _san_remark_box(cfg):
    # Im-spectrum inside (-pi/4, pi/4), checked against (-pi/2, pi/2)
    cfg = _box(cfg, REMARK_BOX)
    s = gen.random_hermitian(_sub(cfg, 1, spectrum_box=HERMITIAN_BOX))
    lo, hi = HALF_PI_INTERVAL
    return cfg, (s, gen.random_normal_constrained(cfg)), {"lo": lo, "hi": hi}


def _san_canonical(cfg):
    a, _ = gen.canonical_pair()
    cfg = cfg.with_(dim=2, spectrum_box=HERMITIAN_BOX)
    return cfg, (gen.random_hermitian(cfg), a), {}


def _two_normals_shared(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    box = cfg.spectrum_box
    rng = gen.rng_for(cfg, "suite.two_normals_shared")
    lams = [
        rng.uniform(box[0], box[1], cfg.dim) + 1j * rng.uniform(box[2], box[3], cfg.dim)
        for _ in range(2)
    ]
    return cfg, tuple(_shared_basis(cfg, *lams)), {}


def _two_normals_independent(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    return cfg, (gen.random_normal_constrained(cfg), gen.random_normal_constrained(_sub(cfg, 1))), {}


def _main_exp_commutant(cfg):
    """``a`` drawn from the numerically computed commutant of ``e^n``."""
    cfg = _box(cfg, CONSTRAINED_BOX)
    n = gen.random_normal_constrained(cfg)
    basis = commutant_basis(exp(n))
    rng = gen.rng_for(cfg, "suite.exp_commutant")
    coeffs = (rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1]))
    vec = basis @ coeffs
    vec *= cfg.norm_cap / np.linalg.norm(vec)
    return cfg, (ComplexMatrix(vec.reshape(cfg.dim, cfg.dim)), n), {}


def _main_commuting(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    return cfg, gen.commuting_pair(cfg), {}


def _main_commuting_non_normal(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    return cfg, gen.commuting_pair(cfg, non_normal=True), {}


def _main_independent(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    return cfg, (gen.random_matrix(_sub(cfg, 1)), gen.random_normal_constrained(cfg)), {}


def _sum_commuting(cfg):
    # a, b diagonal in one basis with Im(a + b) inside the box's imaginary range
    cfg = _box(cfg, CONSTRAINED_BOX)
    box = cfg.spectrum_box
    rng = gen.rng_for(cfg, "suite.sum_commuting")
    total = rng.uniform(box[0], box[1], cfg.dim) + 1j * rng.uniform(box[2], box[3], cfg.dim)
    part = rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)
    return cfg, tuple(_shared_basis(cfg, part, total - part)), {}


def _sum_zero(cfg):
    a = gen.random_normal(cfg)
    return cfg, (a, -a), {}


def _sum_random(cfg):
    return cfg, (gen.random_matrix(cfg), gen.random_matrix(_sub(cfg, 1))), {}


def _nve_hermitian(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (gen.random_hermitian(cfg),), {}


def _nve_normal(cfg):
    return cfg, (gen.random_normal(cfg),), {}


def _nve_non_normal(cfg):
    return cfg, (gen.random_matrix(cfg),), {}


def _nve_nilpotent(cfg):
    rng = gen.rng_for(cfg, "suite.nilpotent")
    z = np.triu(rng.standard_normal((cfg.dim, cfg.dim)) + 1j * rng.standard_normal((cfg.dim, cfg.dim)), 1)
    if cfg.dim > 1:
        z *= cfg.norm_cap * rng.uniform(0.1, 1.0) / np.linalg.norm(z)
    u = gen.random_unitary(cfg).data
    return cfg, (ComplexMatrix(u @ z @ u.conj().T),), {}


def _identical_constrained(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    a = gen.random_normal_constrained(cfg)
    return cfg, (a, a), {}


def _equal_exp(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    if cfg.dim < 2:
        cfg = cfg.with_(dim=2)
    return cfg, gen.equal_exp_pair(cfg), {}


def _lattice(cfg):
    cfg = cfg.with_(dim=2)
    return cfg, gen.lattice_counterexample(cfg), {}


def _inj_identical(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    a = gen.random_hermitian(cfg)
    return cfg, (a, a), {}


def _inj_perturbed(cfg):
    # b = a + 0.5 E with ||E||_F = 1, so ||a - b||_F = 0.5
    cfg = _box(cfg, HERMITIAN_BOX)
    a = gen.random_hermitian(cfg)
    e = gen.random_hermitian(_sub(cfg, 1, spectrum_box=(-1.0, 1.0, 0.0, 0.0))).data
    nrm = np.linalg.norm(e)
    if nrm == 0:
        e = np.eye(cfg.dim)
        nrm = math.sqrt(cfg.dim)
    e = e / nrm
    return cfg, (a, ComplexMatrix(a.data + 0.5 * e)), {}


def _unitary_hermitian(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (gen.random_hermitian(cfg),), {}


def _unitary_skew(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (1j * gen.random_hermitian(cfg),), {}


def _unitary_normal(cfg):
    cfg = _box(cfg, CONSTRAINED_BOX)
    return cfg, (gen.random_normal_constrained(cfg),), {}


def _skew_identity(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    a = gen.random_hermitian(cfg)
    return cfg, (a, 1j * a), {}


def _skew_shifted(cfg):
    # b = i(a + 2 pi P) with P a spectral projection of a
    cfg = _box(cfg, HERMITIAN_BOX)
    box = cfg.spectrum_box
    w = _draw(cfg, "suite.skew_shifted", box[0], box[1])
    p = _projection(cfg, "suite.skew_projection")
    a, b = _shared_basis(cfg, w.astype(complex), 1j * (w + 2 * math.pi * p))
    return cfg, (_sym(a), b), {}


def _skew_hermitian_b(cfg):
    cfg = _box(cfg, HERMITIAN_BOX)
    return cfg, (ComplexMatrix.zeros(cfg.dim), gen.random_hermitian(cfg)), {}


@dataclass(frozen=True)
class Suite:
    families: dict[str, Builder]
    default: Sequence[str]  # cycled by trial index


SUITES: dict[str, Suite] = {
    "exp_identity_selfadjoint": Suite(
        {"zero": _exp_identity_zero, "hermitian": _exp_identity_hermitian, "periodic": _exp_identity_periodic},
        ("zero", "hermitian", "periodic"),
    ),
    "fuglede": Suite(
        {
            "commuting": _fuglede_commuting,
            "commuting_non_normal": _fuglede_commuting_non_normal,
            "canonical": _canonical_b_a,
        },
        ("commuting", "commuting_non_normal"),
    ),
    "wermuth": Suite(
        {"commuting": _wermuth_commuting, "independent": _wermuth_independent},
        ("commuting", "independent"),
    ),
    "selfadjoint_vs_normal": Suite(
        {
            "commuting": _san_commuting,
            "independent": _san_independent,
            "hermitian_n": _san_hermitian_n,
            "remark_box": _san_remark_box,
            "canonical": _san_canonical,
        },
        ("commuting", "independent", "hermitian_n", "remark_box"),
    ),
    "two_normals": Suite(
        {"shared_basis": _two_normals_shared, "independent": _two_normals_independent},
        ("shared_basis", "independent"),
    ),
    "main_transfer": Suite(
        {
            "exp_commutant": _main_exp_commutant,
            "commuting": _main_commuting,
            "commuting_non_normal": _main_commuting_non_normal,
            "independent": _main_independent,
            "canonical": _canonical_b_a,
        },
        ("exp_commutant", "commuting", "commuting_non_normal"),
    ),
    "sum_normal": Suite(
        {"commuting": _sum_commuting, "zero_sum": _sum_zero, "random": _sum_random},
        ("commuting", "zero_sum", "random"),
    ),
    "normality_via_exp": Suite(
        {
            "hermitian": _nve_hermitian,
            "normal": _nve_normal,
            "non_normal": _nve_non_normal,
            "nilpotent": _nve_nilpotent,
        },
        ("hermitian", "normal", "non_normal", "nilpotent"),
    ),
    "square_commute": Suite(
        {"identical": _identical_constrained, "equal_exp_pair": _equal_exp, "canonical": _canonical_a_b},
        ("identical", "equal_exp_pair"),
    ),
    "equal_exp_commute": Suite(
        {
            "equal_exp_pair": _equal_exp,
            "identical": _identical_constrained,
            "lattice_counterexample": _lattice,
            "canonical": _canonical_a_b,
        },
        ("equal_exp_pair",),
    ),
    "selfadjoint_injectivity": Suite(
        {"identical": _inj_identical, "perturbed": _inj_perturbed},
        ("identical", "perturbed"),
    ),
    "unitary_criterion": Suite(
        {"hermitian": _unitary_hermitian, "skew": _unitary_skew, "normal": _unitary_normal},
        ("hermitian", "skew", "normal"),
    ),
    "skew_conclusion": Suite(
        {"identity": _skew_identity, "shifted": _skew_shifted, "hermitian_b": _skew_hermitian_b},
        ("identity", "shifted", "hermitian_b"),
    ),
}

assert set(SUITES) == set(CHECKS)


def _suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}") from None


def families(name: str) -> list[str]:
    return list(_suite(name).families)


def build_instance(name: str, family: str, cfg: GeneratorConfig) -> Instance:
    """Matrices (and extra keyword arguments) for one trial of ``name``."""
    suite = _suite(name)
    try:
        builder = suite.families[family]
    except KeyError:
        raise ValueError(f"suite {name!r} has no family {family!r}; expected one of {sorted(suite.families)}") from None
    return builder(cfg)


def run_suite(
    name: str,
    cfg: GeneratorConfig,
    trials: int,
    family: str | None = None,
    tol_commute: float = TOL_COMMUTE,
    tol_refute: float = TOL_REFUTE,
) -> list[CheckReport]:
    """Run ``trials`` seeded instances of check ``name``; report ``k`` is trial ``k``.

    ``family`` selects one instance family; by default the suite's default
    families are cycled by trial index.
    """
    suite = _suite(name)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    check = CHECKS[name]
    order = [family] if family is not None else list(suite.default)
    reports = []
    for k in range(trials):
        fam = order[k % len(order)]
        trial_cfg = cfg.with_(seed=derive_seed(cfg.seed, k))
        eff_cfg, args, kwargs = build_instance(name, fam, trial_cfg)
        report = check(*args, **kwargs, tol_commute=tol_commute, tol_refute=tol_refute)
        report.instance_seed = eff_cfg
        report.family = fam
        reports.append(report)
    return reports
