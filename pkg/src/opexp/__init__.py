"""opexp: finite-dimensional operator exponentials and executable commutation theorems."""

__version__ = "0.1.0"

from .matrix import (  # noqa: E402
    ComplexMatrix,
    add,
    adjoint,
    comm_residual,
    commutator,
    frobenius_norm,
    mul,
)
from .spectral import (  # noqa: E402
    CartesianPair,
    IntervalCertificate,
    SpectralDecomposition,
    cartesian,
    certify_interval,
    eig_hermitian,
    eig_normal,
    is_normal,
    spectral_radius,
)
from .expfun import ExpResult, exp_adjoint_check, expm, expm_normal  # noqa: E402
from .generators import GeneratorConfig  # noqa: E402
from .checks import CheckReport, Verdict, canonical_counterexample  # noqa: E402
from .suites import run_suite  # noqa: E402

__all__ = [
    "ComplexMatrix",
    "add",
    "adjoint",
    "comm_residual",
    "commutator",
    "frobenius_norm",
    "mul",
    "CartesianPair",
    "IntervalCertificate",
    "SpectralDecomposition",
    "cartesian",
    "certify_interval",
    "eig_hermitian",
    "eig_normal",
    "is_normal",
    "spectral_radius",
    "ExpResult",
    "exp_adjoint_check",
    "expm",
    "expm_normal",
    "GeneratorConfig",
    "CheckReport",
    "Verdict",
    "canonical_counterexample",
    "run_suite",
]
