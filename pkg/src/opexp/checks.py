"""Executable checks of commutation theorems for exponentials of normal matrices.

Every check measures its hypotheses and its conclusion as nonnegative
residuals and classifies the instance with a two-threshold rule:

* a residual ``<= tol_commute`` counts as zero,
* a residual ``>= tol_refute`` counts as nonzero,
* anything strictly in between makes the report ``indeterminate``.

Equivalence statements (``P <=> Q``) are reported through one conclusion
residual, the *iff gap* of the two predicate residuals (see
:func:`iff_gap`); the raw predicate residuals go into ``details``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .expfun import exp
from .generators import GeneratorConfig, canonical_pair
from .matrix import (
    ComplexMatrix,
    adjoint,
    comm_residual,
    frobenius_norm,
    normality_residual,
    relative_distance,
    selfadjoint_residual,
)
from .spectral import cartesian, certify_imag_part

TOL_COMMUTE = 1e-10
TOL_REFUTE = 1e-6

PI_INTERVAL = (0.0, math.pi)
HALF_PI_INTERVAL = (-math.pi / 2, math.pi / 2)


class Verdict(str, Enum):
    CONFIRMED = "confirmed"
    REFUTED = "refuted"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"
    INDETERMINATE = "indeterminate"


@dataclass
class CheckReport:
    check_name: str
    dim: int
    hypothesis_residuals: dict[str, float]
    conclusion_residuals: dict[str, float]
    verdict: Verdict
    tol_commute: float = TOL_COMMUTE
    tol_refute: float = TOL_REFUTE
    instance_seed: GeneratorConfig | None = None
    family: str | None = None
    details: dict[str, float] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        config = None
        if self.instance_seed is not None:
            config = self.instance_seed.to_json_obj()
            config["family"] = self.family
        return {
            "check": self.check_name,
            "dim": self.dim,
            "config": config,
            "hypotheses": dict(self.hypothesis_residuals),
            "conclusions": dict(self.conclusion_residuals),
            "verdict": self.verdict.value,
            "tolerances": {"commute": self.tol_commute, "refute": self.tol_refute},
            "details": dict(self.details),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CheckReport":
        cfg = obj.get("config")
        family = None
        seed = None
        if cfg is not None:
            cfg = dict(cfg)
            family = cfg.pop("family", None)
            seed = GeneratorConfig.from_json_obj(cfg)
        return cls(
            check_name=obj["check"],
            dim=int(obj["dim"]),
            hypothesis_residuals={k: float(v) for k, v in obj["hypotheses"].items()},
            conclusion_residuals={k: float(v) for k, v in obj["conclusions"].items()},
            verdict=Verdict(obj["verdict"]),
            tol_commute=float(obj["tolerances"]["commute"]),
            tol_refute=float(obj["tolerances"]["refute"]),
            instance_seed=seed,
            family=family,
            details={k: float(v) for k, v in obj.get("details", {}).items()},
        )

    def is_consistent(self) -> bool:
        """True when ``verdict`` is what :func:`classify` gives for the stored residuals."""
        return self.verdict is classify(
            self.hypothesis_residuals, self.conclusion_residuals, self.tol_commute, self.tol_refute
        )


def classify(
    hypotheses: Mapping[str, float],
    conclusions: Mapping[str, float],
    tol_commute: float = TOL_COMMUTE,
    tol_refute: float = TOL_REFUTE,
) -> Verdict:
    if not 0 < tol_commute < tol_refute:
        raise ValueError("tolerances must satisfy 0 < tol_commute < tol_refute")
    values = list(hypotheses.values()) + list(conclusions.values())
    if any(tol_commute < r < tol_refute for r in values):
        return Verdict.INDETERMINATE
    if any(r > tol_commute for r in hypotheses.values()):
        return Verdict.HYPOTHESIS_NOT_MET
    if any(r > tol_commute for r in conclusions.values()):
        return Verdict.REFUTED
    return Verdict.CONFIRMED


def iff_gap(r1: float, r2: float, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE) -> float:
    """Distance of two predicate residuals from agreeing.

    With ``g(r) = tol_commute * tol_refute / r``, which swaps "zero" and
    "nonzero" and maps the dead band onto itself, the gap is
    ``min(max(r1, r2), max(g(r1), g(r2)))``. It is ``<= tol_commute`` when
    both residuals are zero or both nonzero, ``>= tol_refute`` when exactly
    one is zero and the other nonzero, and inside the band when either
    residual is.
    """

    def flip(r: float) -> float:
        return math.inf if r == 0 else tol_commute * tol_refute / r

    return float(min(max(r1, r2), max(flip(r1), flip(r2))))


def _report(name, dim, hyps, concls, tol_commute, tol_refute, details=None) -> CheckReport:
    hyps = {k: float(v) for k, v in hyps.items()}
    concls = {k: float(v) for k, v in concls.items()}
    return CheckReport(
        check_name=name,
        dim=dim,
        hypothesis_residuals=hyps,
        conclusion_residuals=concls,
        verdict=classify(hyps, concls, tol_commute, tol_refute),
        tol_commute=tol_commute,
        tol_refute=tol_refute,
        details={k: float(v) for k, v in (details or {}).items()},
    )


def _interval_hypothesis(t: ComplexMatrix, lo: float, hi: float, prefix: str, details: dict) -> float:
    """0.0 if ``sigma(Im t)`` is certified inside ``(lo, hi)``, else 1.0.

    The certificate margin already absorbs rounding, so this hypothesis is
    an indicator rather than a distance (a spectrum sitting on the boundary,
    such as {0} for (0, pi), must read as unmet).
    """
    cert = certify_imag_part(t, lo, hi)
    details[f"{prefix}_min"] = cert.min_eig
    details[f"{prefix}_max"] = cert.max_eig
    details[f"{prefix}_margin"] = cert.margin
    return 0.0 if cert.holds else 1.0


def _exp_distance(ea: ComplexMatrix, eb: ComplexMatrix) -> float:
    return relative_distance(ea, eb, ref=ea)


def _iff(details: dict, name1: str, r1: float, name2: str, r2: float, tc: float, tr: float) -> float:
    details[name1] = r1
    details[name2] = r2
    return iff_gap(r1, r2, tc, tr)


def check_exp_identity_selfadjoint(
    t: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """Self-adjoint T with e^T = I must vanish."""
    et = exp(t)
    hyps = {
        "selfadjoint_t": selfadjoint_residual(t),
        "exp_minus_identity": frobenius_norm(et.data - np.eye(t.dim)),
    }
    concls = {"norm_t": frobenius_norm(t)}
    return _report("exp_identity_selfadjoint", t.dim, hyps, concls, tol_commute, tol_refute)


def check_fuglede(
    a: ComplexMatrix, n: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """N normal and AN = NA imply AN* = N*A."""
    hyps = {"normal_n": normality_residual(n), "commute_a_n": comm_residual(a, n)}
    concls = {"commute_a_nstar": comm_residual(a, adjoint(n))}
    return _report("fuglede", n.dim, hyps, concls, tol_commute, tol_refute)


def check_wermuth(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """For self-adjoint A, B: e^A e^B = e^B e^A iff AB = BA."""
    details: dict[str, float] = {}
    hyps = {"selfadjoint_a": selfadjoint_residual(a), "selfadjoint_b": selfadjoint_residual(b)}
    gap = _iff(
        details,
        "commute_exp_a_exp_b", comm_residual(exp(a), exp(b)),
        "commute_a_b", comm_residual(a, b),
        tol_commute, tol_refute,
    )
    return _report("wermuth", a.dim, hyps, {"exp_commute_iff_commute": gap}, tol_commute, tol_refute, details)


def _check_interval_args(lo: float, hi: float) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid interval ({lo}, {hi})")
    if hi - lo > math.pi * (1 + 1e-15):
        raise ValueError(f"interval ({lo}, {hi}) is longer than pi; the statement does not apply")


def check_selfadjoint_vs_normal(
    s: ComplexMatrix,
    n: ComplexMatrix,
    lo: float = PI_INTERVAL[0],
    hi: float = PI_INTERVAL[1],
    tol_commute: float = TOL_COMMUTE,
    tol_refute: float = TOL_REFUTE,
) -> CheckReport:
    """S self-adjoint, N normal with sigma(Im N) in (lo, hi): e^S e^N = e^N e^S iff SN = NS.

    Only (0, pi) and (-pi/2, pi/2) are established intervals; any open
    interval of length at most pi is accepted for exploration.
    """
    _check_interval_args(lo, hi)
    details: dict[str, float] = {"interval_lo": lo, "interval_hi": hi}
    hyps = {
        "selfadjoint_s": selfadjoint_residual(s),
        "normal_n": normality_residual(n),
        "interval_im_n": _interval_hypothesis(n, lo, hi, "im_n", details),
    }
    gap = _iff(
        details,
        "commute_exp_s_exp_n", comm_residual(exp(s), exp(n)),
        "commute_s_n", comm_residual(s, n),
        tol_commute, tol_refute,
    )
    return _report(
        "selfadjoint_vs_normal", n.dim, hyps, {"exp_commute_iff_commute": gap},
        tol_commute, tol_refute, details,
    )


def check_two_normals(
    m: ComplexMatrix, n: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """M, N normal with Im-spectra in (0, pi): e^M e^N = e^N e^M iff MN = NM."""
    details: dict[str, float] = {}
    hyps = {
        "normal_m": normality_residual(m),
        "normal_n": normality_residual(n),
        "interval_im_m": _interval_hypothesis(m, *PI_INTERVAL, "im_m", details),
        "interval_im_n": _interval_hypothesis(n, *PI_INTERVAL, "im_n", details),
    }
    gap = _iff(
        details,
        "commute_exp_m_exp_n", comm_residual(exp(m), exp(n)),
        "commute_m_n", comm_residual(m, n),
        tol_commute, tol_refute,
    )
    return _report("two_normals", n.dim, hyps, {"exp_commute_iff_commute": gap}, tol_commute, tol_refute, details)


def check_main_transfer(
    a: ComplexMatrix,
    n: ComplexMatrix,
    tol_commute: float = TOL_COMMUTE,
    tol_refute: float = TOL_REFUTE,
    diagnostics: bool = False,
) -> CheckReport:
    """N normal with sigma(Im N) in (0, pi), A arbitrary: A e^N = e^N A iff AN = NA.

    With ``diagnostics=True`` the intermediate commutations of the standard
    argument (A* with e^N, the cartesian parts of A with e^N and with N) are
    added to ``details`` under ``step_*`` keys.
    """
    details: dict[str, float] = {}
    en = exp(n)
    hyps = {
        "normal_n": normality_residual(n),
        "interval_im_n": _interval_hypothesis(n, *PI_INTERVAL, "im_n", details),
    }
    gap = _iff(
        details,
        "commute_a_exp_n", comm_residual(a, en),
        "commute_a_n", comm_residual(a, n),
        tol_commute, tol_refute,
    )
    if diagnostics:
        parts = cartesian(a)
        details["step_commute_astar_exp_n"] = comm_residual(adjoint(a), en)
        details["step_commute_re_a_exp_n"] = comm_residual(parts.real_part, en)
        details["step_commute_im_a_exp_n"] = comm_residual(parts.imag_part, en)
        details["step_commute_exp_re_a_exp_n"] = comm_residual(exp(parts.real_part), en)
        details["step_commute_re_a_n"] = comm_residual(parts.real_part, n)
        details["step_commute_im_a_n"] = comm_residual(parts.imag_part, n)
    return _report("main_transfer", n.dim, hyps, {"commute_exp_iff_commute": gap}, tol_commute, tol_refute, details)


def check_sum_normal(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """A + B normal with sigma(Im(A+B)) in (0, pi) and e^A e^B = e^B e^A = e^{A+B} imply AB = BA."""
    details: dict[str, float] = {}
    s = a + b
    ea, eb, es = exp(a), exp(b), exp(s)
    hyps = {
        "normal_sum": normality_residual(s),
        "interval_im_sum": _interval_hypothesis(s, *PI_INTERVAL, "im_sum", details),
        "exp_commute": comm_residual(ea, eb),
        "exp_product_is_exp_sum": _exp_distance(es, ea @ eb),
    }
    concls = {"commute_a_b": comm_residual(a, b)}
    return _report("sum_normal", a.dim, hyps, concls, tol_commute, tol_refute, details)


def check_normality_via_exp(
    a: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """e^A e^{A*} = e^{A*} e^A = e^{A+A*} iff A is normal."""
    details: dict[str, float] = {}
    astar = adjoint(a)
    ea, eas, esum = exp(a), exp(astar), exp(a + astar)
    details["commute_exp_a_exp_astar"] = comm_residual(ea, eas)
    details["exp_product_is_exp_sum"] = _exp_distance(esum, ea @ eas)
    r_exp = max(details["commute_exp_a_exp_astar"], details["exp_product_is_exp_sum"])
    gap = _iff(details, "exp_identity", r_exp, "normal_a", normality_residual(a), tol_commute, tol_refute)
    return _report("normality_via_exp", a.dim, {}, {"exp_identity_iff_normal": gap}, tol_commute, tol_refute, details)


def _equal_exp_hypotheses(a: ComplexMatrix, b: ComplexMatrix, details: dict) -> dict:
    return {
        "normal_a": normality_residual(a),
        "interval_im_a": _interval_hypothesis(a, *PI_INTERVAL, "im_a", details),
        "exp_equal": _exp_distance(exp(a), exp(b)),
    }


def check_square_commute(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """A normal with sigma(Im A) in (0, pi) and e^A = e^B imply A^2 B = B A^2."""
    details: dict[str, float] = {}
    hyps = _equal_exp_hypotheses(a, b, details)
    details["commute_a_b"] = comm_residual(a, b)
    concls = {"commute_a2_b": comm_residual(a @ a, b)}
    return _report("square_commute", a.dim, hyps, concls, tol_commute, tol_refute, details)


def check_equal_exp_commute(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """A normal with sigma(Im A) in (0, pi) and e^A = e^B imply AB = BA."""
    details: dict[str, float] = {}
    hyps = _equal_exp_hypotheses(a, b, details)
    concls = {"commute_a_b": comm_residual(a, b)}
    return _report("equal_exp_commute", a.dim, hyps, concls, tol_commute, tol_refute, details)


def check_selfadjoint_injectivity(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """For self-adjoint A, B: e^A = e^B iff A = B."""
    details: dict[str, float] = {}
    hyps = {"selfadjoint_a": selfadjoint_residual(a), "selfadjoint_b": selfadjoint_residual(b)}
    gap = _iff(
        details,
        "exp_distance", _exp_distance(exp(a), exp(b)),
        "distance", relative_distance(a, b),
        tol_commute, tol_refute,
    )
    return _report(
        "selfadjoint_injectivity", a.dim, hyps, {"exp_equal_iff_equal": gap}, tol_commute, tol_refute, details
    )


def check_unitary_criterion(
    a: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """For normal A: A self-adjoint iff e^{iA} unitary."""
    details: dict[str, float] = {}
    u = exp(1j * a).data
    ident = np.eye(a.dim)
    unitary_defect = max(
        frobenius_norm(u @ u.conj().T - ident), frobenius_norm(u.conj().T @ u - ident)
    )
    gap = _iff(
        details,
        "selfadjoint_a", selfadjoint_residual(a),
        "unitary_exp_ia", unitary_defect,
        tol_commute, tol_refute,
    )
    hyps = {"normal_a": normality_residual(a)}
    return _report(
        "unitary_criterion", a.dim, hyps, {"selfadjoint_iff_unitary": gap}, tol_commute, tol_refute, details
    )


def check_skew_conclusion(
    a: ComplexMatrix, b: ComplexMatrix, tol_commute: float = TOL_COMMUTE, tol_refute: float = TOL_REFUTE
) -> CheckReport:
    """A self-adjoint, B normal and e^{iA} = e^B imply B* = -B."""
    hyps = {
        "selfadjoint_a": selfadjoint_residual(a),
        "normal_b": normality_residual(b),
        "exp_equal": _exp_distance(exp(1j * a), exp(b)),
    }
    concls = {"skew_b": frobenius_norm(b.data + b.data.conj().T) / max(1.0, frobenius_norm(b))}
    return _report("skew_conclusion", a.dim, hyps, concls, tol_commute, tol_refute)


def canonical_counterexample() -> tuple[ComplexMatrix, ComplexMatrix]:
    """``A = [[0, pi], [-pi, 0]]`` and ``B = [[pi, -2pi], [pi, -pi]]``: equal exponentials, no commutation."""
    return canonical_pair()


def commutant_basis(m: ComplexMatrix, rel_tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (columns, row-major vec) of ``{X : XM = MX}``.

    Solved directly as the null space of ``I (x) M^T - M (x) I`` by SVD.
    """
    n = m.dim
    ident = np.eye(n)
    k = np.kron(ident, m.data.T) - np.kron(m.data, ident)
    _, sv, vh = np.linalg.svd(k)
    cutoff = rel_tol * max(1.0, float(sv[0]))
    rank = int(np.sum(sv > cutoff))
    return vh[rank:].conj().T


CHECKS = {
    "exp_identity_selfadjoint": check_exp_identity_selfadjoint,
    "fuglede": check_fuglede,
    "wermuth": check_wermuth,
    "selfadjoint_vs_normal": check_selfadjoint_vs_normal,
    "two_normals": check_two_normals,
    "main_transfer": check_main_transfer,
    "sum_normal": check_sum_normal,
    "normality_via_exp": check_normality_via_exp,
    "square_commute": check_square_commute,
    "equal_exp_commute": check_equal_exp_commute,
    "selfadjoint_injectivity": check_selfadjoint_injectivity,
    "unitary_criterion": check_unitary_criterion,
    "skew_conclusion": check_skew_conclusion,
}

# number of matrix arguments each check takes
CHECK_ARITY = {
    "exp_identity_selfadjoint": 1,
    "normality_via_exp": 1,
    "unitary_criterion": 1,
}
