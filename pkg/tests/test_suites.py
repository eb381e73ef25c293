import pytest

from opexp.checks import Verdict
from opexp.generators import GeneratorConfig, derive_seed
from opexp.report import ManifestError, RunManifest, tally, validate_manifest_obj
from opexp.suites import SUITES, build_instance, families, run_suite

ALL_FAMILIES = [(name, fam) for name, suite in SUITES.items() for fam in suite.families]


def test_zero_trials_gives_empty_list():
    assert run_suite("main_transfer", GeneratorConfig(seed=1), 0) == []


def test_unknown_names_are_rejected():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("no_such_check", GeneratorConfig(), 1)
    with pytest.raises(ValueError, match="no family"):
        run_suite("fuglede", GeneratorConfig(), 1, family="nope")
    with pytest.raises(ValueError):
        run_suite("fuglede", GeneratorConfig(), -1)


def test_families_listing():
    assert "lattice_counterexample" in families("equal_exp_commute")
    for name, suite in SUITES.items():
        assert set(suite.default) <= set(suite.families)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_runs_are_deterministic(name):
    cfg = GeneratorConfig(seed=123, dim=3)
    first = [r.to_json_obj() for r in run_suite(name, cfg, 6)]
    second = [r.to_json_obj() for r in run_suite(name, cfg, 6)]
    assert first == second


def test_trial_k_uses_derived_seed():
    cfg = GeneratorConfig(seed=5, dim=3)
    reports = run_suite("fuglede", cfg, 4)
    for k, r in enumerate(reports):
        assert r.instance_seed.seed == derive_seed(5, k)
        assert r.family == SUITES["fuglede"].default[k % 2]
    # a prefix of a longer run is the shorter run
    assert [r.to_json_obj() for r in run_suite("fuglede", cfg, 2)] == [r.to_json_obj() for r in reports[:2]]


def test_effective_config_rebuilds_the_instance():
    cfg = GeneratorConfig(seed=8, dim=3)
    r = run_suite("main_transfer", cfg, 1, family="commuting")[0]
    _, args, _ = build_instance("main_transfer", "commuting", r.instance_seed)
    _, args0, _ = build_instance("main_transfer", "commuting", cfg.with_(seed=derive_seed(8, 0)))
    assert args == args0


@pytest.mark.parametrize("dim", [1, 2, 4])
@pytest.mark.parametrize("name,family", ALL_FAMILIES)
def test_no_family_refutes_a_theorem(name, family, dim):
    reports = run_suite(name, GeneratorConfig(seed=2024 + dim, dim=dim), 8, family=family)
    counts = tally(reports)
    assert counts[Verdict.REFUTED.value] == 0
    assert counts[Verdict.INDETERMINATE.value] == 0
    assert all(r.is_consistent() for r in reports)


@pytest.mark.parametrize(
    "name,family,expected",
    [
        ("equal_exp_commute", "lattice_counterexample", Verdict.HYPOTHESIS_NOT_MET),
        ("equal_exp_commute", "canonical", Verdict.HYPOTHESIS_NOT_MET),
        ("equal_exp_commute", "equal_exp_pair", Verdict.CONFIRMED),
        ("main_transfer", "canonical", Verdict.HYPOTHESIS_NOT_MET),
        ("fuglede", "commuting", Verdict.CONFIRMED),
        ("selfadjoint_vs_normal", "remark_box", Verdict.CONFIRMED),
    ],
)
def test_family_verdicts(name, family, expected):
    reports = run_suite(name, GeneratorConfig(seed=77, dim=2), 10, family=family)
    assert {r.verdict for r in reports} == {expected}


def test_custom_tolerances_are_recorded():
    r = run_suite("fuglede", GeneratorConfig(seed=1, dim=2), 1, tol_commute=1e-9, tol_refute=1e-5)[0]
    assert (r.tol_commute, r.tol_refute) == (1e-9, 1e-5)


def test_manifest_validation():
    reports = run_suite("wermuth", GeneratorConfig(seed=3, dim=3), 4)
    m = RunManifest.start("opexp check wermuth", timestamp=False)
    m.reports = reports
    obj = m.to_json_obj()
    assert obj["summary"]["confirmed"] == 4
    assert m.exit_code() == 0
    assert m.dumps().endswith("}\n")
    obj["summary"]["confirmed"] = 3
    with pytest.raises(ManifestError):
        validate_manifest_obj(obj)
    obj = m.to_json_obj()
    obj["reports"][0]["verdict"] = "refuted"
    with pytest.raises(ManifestError):
        validate_manifest_obj(obj)
