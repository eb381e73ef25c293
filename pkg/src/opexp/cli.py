"""Command-line interface: ``opexp <expm|spectrum|check|paper-example> [flags]``.

Exit codes: 0 success, 1 refuted verdict or failed example, 2 bad input or
flags, 3 exponential overflow, 4 non-normal (or non-Hermitian) input where
a normal (Hermitian) one is required.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import shlex
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .checks import (
    CHECK_ARITY,
    CHECKS,
    Verdict,
    canonical_counterexample,
    check_equal_exp_commute,
    check_main_transfer,
)
from .errors import (
    ExpOverflowError,
    MatrixFormatError,
    NotHermitianError,
    NotNormalError,
    OpexpError,
)
from .expfun import expm, expm_normal
from .generators import GeneratorConfig
from .matrix import (
    ComplexMatrix,
    comm_residual,
    commutator,
    dumps_matrix,
    frobenius_norm,
    loads_matrix,
    matrix_to_json_obj,
)
from .report import RunManifest
from .spectral import (
    HERMITIAN_INPUT_TOL,
    cartesian,
    certify_interval,
    eig_hermitian,
    eig_normal,
)
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_NOT_NORMAL = 4

SEED_ENV = "OPEXP_DEFAULT_SEED"

_REAL = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<coef>\d+(\.\d*)?([eE][+-]?\d+)?)?\s*\*?\s*(?P<pi>pi|π)?\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$"
)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def parse_real(text: str) -> float:
    """Parse a float, also accepting multiples of pi: ``pi``, ``-pi/2``, ``3pi/4``, ``2*π``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _REAL.match(text)
    if not m or (m.group("coef") is None and m.group("pi") is None):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    value = float(m.group("coef")) if m.group("coef") else 1.0
    if m.group("pi"):
        value *= math.pi
    if m.group("den"):
        value /= float(m.group("den"))
    if m.group("sign") == "-":
        value = -value
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def read_matrix(path: str) -> ComplexMatrix:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    try:
        return loads_matrix(text)
    except MatrixFormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1.0, z.imag) < 0) else "+"
    return f"{z.real!r} {sign} {abs(z.imag)!r}i"


def _command_line(argv: Sequence[str]) -> str:
    return shlex.join(["opexp", *argv])


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return _u64(raw.strip())
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise CliError(f"{SEED_ENV}={raw!r} is not an unsigned 64-bit integer") from exc


# --- expm ---------------------------------------------------------------------

def cmd_expm(args: argparse.Namespace) -> int:
    t = read_matrix(args.input)
    try:
        res = expm(t)
    except ExpOverflowError as exc:
        raise CliError(str(exc), EXIT_OVERFLOW) from exc
    if not args.oracle:
        _emit(dumps_matrix(res.value) + "\n", args.out)
        return EXIT_OK
    try:
        spectral = expm_normal(t)
    except NotNormalError as exc:
        raise CliError(f"--oracle needs a normal matrix: {exc}", EXIT_NOT_NORMAL) from exc
    except ExpOverflowError as exc:
        raise CliError(str(exc), EXIT_OVERFLOW) from exc
    disagreement = frobenius_norm(res.value.data - spectral.value.data) / max(1.0, frobenius_norm(res.value))
    text = dumps_matrix(
        res.value,
        method=res.method.value,
        est_error=res.est_error,
        spectral_path=matrix_to_json_obj(spectral.value),
        disagreement=disagreement,
    )
    _emit(text + "\n", args.out)
    return EXIT_OK


# --- spectrum -----------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace) -> int:
    t = read_matrix(args.input)
    hermitian = False
    if args.imag_part:
        target = cartesian(t).imag_part
        hermitian = True
    else:
        target = t
        asym = frobenius_norm(t.data - t.data.conj().T)
        hermitian = asym <= HERMITIAN_INPUT_TOL * frobenius_norm(t)
    try:
        dec = eig_hermitian(target) if hermitian else eig_normal(target)
    except NotNormalError as exc:
        raise CliError(f"{exc} (use --imag-part for the spectrum of Im T)", EXIT_NOT_NORMAL) from exc
    cert = None
    if args.interval is not None:
        if not hermitian:
            raise CliError("--interval needs a Hermitian matrix (or --imag-part)", EXIT_NOT_NORMAL)
        lo, hi = args.interval
        try:
            cert = certify_interval(target, lo, hi)
        except NotHermitianError as exc:
            raise CliError(str(exc), EXIT_NOT_NORMAL) from exc
    obj = {
        "eigenvalues": [[float(z.real), float(z.imag)] for z in dec.eigenvalues],
        "certificate": None if cert is None else cert.to_json_obj(),
    }
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if args.out:
        _emit(text, args.out)
    if args.json:
        sys.stdout.write(text)
        return EXIT_OK
    label = "sigma(Im T)" if args.imag_part else "sigma(T)"
    print(f"{label}:")
    for z in dec.eigenvalues:
        print(f"  {float(z.real)!r}" if hermitian else f"  {_fmt_complex(z)}")
    if cert is not None:
        print(
            f"interval ({cert.lo!r}, {cert.hi!r}) margin {cert.margin:.3g}: "
            f"min {cert.min_eig!r}, max {cert.max_eig!r} -> holds = {str(cert.holds).lower()}"
        )
    return EXIT_OK


# --- check --------------------------------------------------------------------

def _print_summary(manifest: RunManifest, name: str) -> None:
    s = manifest.summary
    print(f"{name}: {len(manifest.reports)} report(s)")
    for key in (v.value for v in Verdict):
        print(f"  {key:20s} {s[key]}")


def _generate_overrides(tokens: list[str]) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in {"seed", "dim", "trials", "family"}:
            raise CliError(f"--generate expects key=value with key in seed/dim/trials/family, got {tok!r}")
        out[key] = val
    return out


def cmd_check(args: argparse.Namespace, argv: Sequence[str]) -> int:
    name = args.name
    if name not in CHECKS:
        raise CliError(f"unknown check {name!r}; expected one of {', '.join(sorted(CHECKS))}")
    if args.tol_commute <= 0 or args.tol_refute <= args.tol_commute:
        raise CliError("tolerances must satisfy 0 < --tol-commute < --tol-refute")
    tols = {"tol_commute": args.tol_commute, "tol_refute": args.tol_refute}
    manifest = RunManifest.start(_command_line(argv), timestamp=not args.no_timestamp)
    if args.generate is not None:
        if args.matrices:
            raise CliError("give either matrix files or --generate, not both")
        over = _generate_overrides(args.generate)
        try:
            seed = _u64(over["seed"]) if "seed" in over else args.seed
            dim = int(over.get("dim", args.dim))
            trials = int(over.get("trials", args.trials))
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise CliError(f"bad --generate value: {exc}") from exc
        family = over.get("family", args.family)
        if seed is None:
            seed = _default_seed()
        if trials < 0:
            raise CliError("--trials must be nonnegative")
        if family is not None and family not in SUITES[name].families:
            raise CliError(f"unknown family {family!r} for {name}; expected one of {sorted(SUITES[name].families)}")
        try:
            cfg = GeneratorConfig(seed=seed, dim=dim, spectrum_box=args.box, norm_cap=args.norm_cap)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        manifest.reports = run_suite(name, cfg, trials, family=family, **tols)
    else:
        arity = CHECK_ARITY.get(name, 2)
        if len(args.matrices) != arity:
            raise CliError(f"check {name} takes {arity} matrix file(s), got {len(args.matrices)}")
        mats = [read_matrix(p) for p in args.matrices]
        if len({m.dim for m in mats}) != 1:
            raise CliError("matrix files have different dimensions")
        kwargs = dict(tols)
        if name == "selfadjoint_vs_normal" and args.interval is not None:
            kwargs["lo"], kwargs["hi"] = args.interval
        if name == "main_transfer" and args.diagnostics:
            kwargs["diagnostics"] = True
        try:
            manifest.reports = [CHECKS[name](*mats, **kwargs)]
        except ExpOverflowError as exc:
            raise CliError(str(exc), EXIT_OVERFLOW) from exc
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    text = manifest.dumps()
    if args.out:
        _emit(text, args.out)
    if args.json:
        sys.stdout.write(text)
    else:
        _print_summary(manifest, name)
    return manifest.exit_code()


# --- paper-example ------------------------------------------------------------

EXAMPLE_EXP_TOL = 1e-12
EXAMPLE_SPECTRUM_TOL = 1e-12
EXAMPLE_COMMUTATOR_TOL = 1e-9
NECESSITY_EXP_TOL = 1e-10
NECESSITY_COMM_MIN = 0.1


def run_paper_example() -> tuple[RunManifest, list[tuple[str, bool]], list[str]]:
    """Evaluate the canonical pair end to end.

    Returns the (timestamp-free) manifest, the list of (fact, holds) pairs
    and the narrative lines.
    """
    a, b = canonical_counterexample()
    ident = np.eye(2)
    ea, eb = expm(a).value, expm(b).value
    lines: list[str] = []
    facts: list[tuple[str, bool]] = []

    def fact(label: str, value: float, ok: bool) -> None:
        facts.append((label, ok))
        lines.append(f"  [{'ok' if ok else 'FAIL'}] {label}: {value!r}")

    lines.append("A = [[0, pi], [-pi, 0]],  B = [[pi, -2pi], [pi, -pi]]")
    r_a = frobenius_norm(ea.data + ident)
    r_b = frobenius_norm(eb.data + ident)
    fact("||e^A + I||_F", r_a, r_a <= EXAMPLE_EXP_TOL)
    fact("||e^B + I||_F", r_b, r_b <= EXAMPLE_EXP_TOL)

    im_a = cartesian(a).imag_part
    sig = [float(x) for x in eig_hermitian(im_a).eigenvalues.real]
    dev = max(abs(sig[0] + math.pi), abs(sig[1] - math.pi))
    fact("max deviation of sigma(Im A) from {-pi, pi}", dev, dev <= EXAMPLE_SPECTRUM_TOL)
    cert = certify_interval(im_a, 0.0, math.pi)
    lines.append(
        f"  sigma(Im A) = {{{sig[0]!r}, {sig[1]!r}}}; certificate on (0, pi): holds = {str(cert.holds).lower()}"
    )
    facts.append(("certificate on (0, pi) fails", not cert.holds))

    cnorm = frobenius_norm(commutator(a, b))
    expected = math.sqrt(10.0) * math.pi**2
    fact("||AB - BA||_F - sqrt(10) pi^2", abs(cnorm - expected), abs(cnorm - expected) <= EXAMPLE_COMMUTATOR_TOL)

    # necessity: B commutes with e^A (= -I) but not with A
    r_exp = comm_residual(b, ea)
    r_comm = comm_residual(b, a)
    fact("comm_residual(B, e^A)", r_exp, r_exp <= NECESSITY_EXP_TOL)
    fact("comm_residual(B, A)", r_comm, r_comm >= NECESSITY_COMM_MIN)

    reports = [check_main_transfer(b, a), check_equal_exp_commute(a, b)]
    for r in reports:
        ok = r.verdict is Verdict.HYPOTHESIS_NOT_MET
        facts.append((f"{r.check_name} verdict is hypothesis_not_met", ok))
        lines.append(f"  [{'ok' if ok else 'FAIL'}] {r.check_name}: {r.verdict.value}")
    manifest = RunManifest(command_line="", reports=reports)
    return manifest, facts, lines


def cmd_paper_example(args: argparse.Namespace, argv: Sequence[str]) -> int:
    manifest, facts, lines = run_paper_example()
    stamped = RunManifest.start(_command_line(argv), timestamp=not args.no_timestamp)
    stamped.reports = manifest.reports
    text = stamped.dumps()
    if args.out:
        _emit(text, args.out)
    if args.json:
        sys.stdout.write(text)
    else:
        print("\n".join(lines))
        held = sum(ok for _, ok in facts)
        print(f"{held}/{len(facts)} expected facts hold")
    if not all(ok for _, ok in facts) or stamped.exit_code():
        return EXIT_REFUTED
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write JSON output to PATH")
    common.add_argument("--json", action="store_true", help="print JSON to stdout instead of text")

    parser = argparse.ArgumentParser(prog="opexp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expm", parents=[common], help="matrix exponential of a matrix file")
    p.add_argument("input", help="matrix JSON file ('-' for stdin)")
    p.add_argument("--oracle", action="store_true", help="also compute the spectral-path exponential and their disagreement")

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues and interval certificates")
    p.add_argument("input", help="matrix JSON file ('-' for stdin)")
    p.add_argument("--imag-part", action="store_true", help="use Im T = (T - T*)/(2i)")
    p.add_argument("--interval", nargs=2, type=parse_real, metavar=("LO", "HI"))

    p = sub.add_parser("check", parents=[common], help="run a theorem check on files or generated instances")
    p.add_argument("name", help=f"one of: {', '.join(CHECKS)}")
    p.add_argument("matrices", nargs="*", help="matrix JSON files")
    p.add_argument("--generate", nargs="*", metavar="KEY=VALUE", help="generate seeded instances (optionally seed=, dim=, trials=, family=)")
    p.add_argument("--seed", type=_u64, default=None, help=f"generator seed (default ${SEED_ENV} or 0)")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--family", default=None, help="instance family of the suite")
    p.add_argument("--box", nargs=4, type=parse_real, metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"))
    p.add_argument("--norm-cap", type=float, default=4.0)
    p.add_argument("--tol-commute", type=float, default=1e-10)
    p.add_argument("--tol-refute", type=float, default=1e-6)
    p.add_argument("--interval", nargs=2, type=parse_real, metavar=("LO", "HI"))
    p.add_argument("--diagnostics", action="store_true", help="main_transfer: record intermediate proof-step residuals")
    p.add_argument("--no-timestamp", action="store_true", help="omit started_at for byte-reproducible manifests")

    p = sub.add_parser("paper-example", parents=[common], help="reproduce the canonical counterexample")
    p.add_argument("--no-timestamp", action="store_true")
    return parser


def _shield_negative_reals(argv: list[str]) -> list[str]:
    # argparse only treats plain negative numbers as values; "-pi/2" would be
    # taken for a flag, so a leading space hides the dash (parse_real strips it)
    out = []
    for tok in argv:
        if tok.startswith("-") and ("pi" in tok or "π" in tok) and _REAL.match(tok):
            tok = " " + tok
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_shield_negative_reals(argv))
    try:
        if args.command == "expm":
            return cmd_expm(args)
        if args.command == "spectrum":
            return cmd_spectrum(args)
        if args.command == "check":
            return cmd_check(args, argv)
        return cmd_paper_example(args, argv)
    except CliError as exc:
        print(f"opexp: error: {exc}", file=sys.stderr)
        return exc.code
    except OpexpError as exc:
        print(f"opexp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
