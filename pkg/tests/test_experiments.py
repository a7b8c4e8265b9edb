import pytest

from ergolab.experiments import (
    EXPERIMENT_NAMES,
    ConfigError,
    default_config,
    resolve_config,
    run_experiment,
)


def _shrunk(name, **params):
    cfg = default_config(name)
    cfg["params"].update(params)
    return cfg


def test_catalogue_is_the_documented_eight():
    assert EXPERIMENT_NAMES == [
        "ledrapier",
        "theorem1",
        "theorem6",
        "eq1-sweep",
        "wh-gaussian",
        "wh-poisson",
        "rigidity-scan",
        "triple-mixing",
    ]


def test_every_default_config_round_trips_the_schema():
    for name in EXPERIMENT_NAMES + ["build", "correlate", "gauss", "poisson"]:
        resolved = resolve_config(default_config(name))
        assert resolved["experiment"] == name
        assert resolved["seed"] == 0


def test_config_rejection_paths():
    with pytest.raises(ConfigError):
        resolve_config(default_config("nope"))
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "bogus": 1})
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "params": {"bogus": 1}})
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "params": {"k_max": "ten"}})
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "seed": -1})
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "seed": True})
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "params": []})
    with pytest.raises(ConfigError):
        resolve_config([])


def test_threshold_and_depth_overrides_land_in_params():
    cfg = {"experiment": "rigidity-scan", "threshold": 0.1, "depth": 9}
    resolved = resolve_config(cfg)
    assert resolved["params"]["theta"] == 0.1
    assert resolved["params"]["depth"] == 9
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "ledrapier", "depth": 5})


def test_ledrapier_experiment_is_exact_and_green():
    report = run_experiment(default_config("ledrapier"))
    assert report.all_passed
    assert len(report.rows) == 31
    assert all(r["provenance"] == "exact" for r in report.rows)
    triples = [r["triple"] for r in report.rows if r.get("item") == "dyadic"]
    assert triples == ["0"] * 10


def test_rigidity_scan_finds_the_odometer_lattice():
    report = run_experiment(default_config("rigidity-scan"))
    assert report.all_passed
    rigid = [r["n"] for r in report.rows if r["kind"] == "rigid"]
    assert rigid == [8, 16, 24, 32, 40, 48, 56, 64]


def test_rigidity_scan_staircase_variant_sees_no_rigidity():
    cfg = _shrunk(
        "rigidity-scan",
        construction="staircase",
        a_stage=3,
        a_levels=[0],
        n_max=50,
        depth=6,
        expect_rigid=None,
        expect_all_none=True,
    )
    report = run_experiment(cfg)
    assert report.all_passed
    assert all(r["kind"] == "none" for r in report.rows)


def test_theorem6_certifies_both_roles():
    report = run_experiment(default_config("theorem6"))
    assert report.all_passed
    sides = [r["rigid_side"] for r in report.rows]
    assert sides == ["t", "s"] * 6
    late = [r for r in report.rows if r["stage"] >= 8]
    assert all(r["rel_symdiff_float"] < 0.05 for r in late)
    assert all(r["rel_corr_float"] < 0.05 for r in late)


def test_theorem1_reports_the_certified_layer():
    report = run_experiment(default_config("theorem1"))
    assert report.all_passed
    assert any("Certified layer" in note for note in report.notes)
    wh = [r for r in report.rows if r.get("item") == "wh-defect"]
    assert [r["n_terms"] for r in wh] == [50, 100, 200]
    assert all(r["defect_float"] <= 0.1 for r in wh)


def test_eq1_sweep_keeps_the_calibrated_majorant():
    report = run_experiment(default_config("eq1-sweep"))
    assert report.all_passed
    for row in report.rows:
        assert row["majorant2"] == pytest.approx(0.04, abs=1e-10)
        assert row["defect"] <= row["majorant1"] + 1e-9
        assert row["majorant1"] <= row["majorant2"] + 1e-9


def test_wh_gaussian_experiment_shrunk():
    report = run_experiment(_shrunk("wh-gaussian", samples=10**4))
    assert report.all_passed
    assert {r["degree"] for r in report.rows} == {1, 2}
    assert all(r["provenance"] == "monte-carlo" for r in report.rows)


def test_wh_poisson_experiment_shrunk():
    report = run_experiment(_shrunk("wh-poisson", samples=10**4))
    assert report.all_passed
    assert all(r["lost_mass"] == "0" for r in report.rows)


def test_triple_mixing_experiment_shrunk():
    cfg = _shrunk(
        "triple-mixing", count=40, samples=10**4, threshold=0.02, min_usable=5
    )
    report = run_experiment(cfg)
    assert report.all_passed
    met = [r for r in report.rows if r["condition_met"]]
    assert len(met) >= 5
    assert all(r["within"] for r in met)


def test_gauss_and_poisson_adhoc_runners_shrunk():
    assert run_experiment(_shrunk("gauss", samples=10**4)).all_passed
    assert run_experiment(_shrunk("poisson", samples=10**4)).all_passed


def test_result_bytes_are_seed_deterministic_and_jobs_invariant():
    cfg = _shrunk("wh-poisson", samples=10**4)
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a.results_bytes() == b.results_bytes()
    parallel = run_experiment(cfg, jobs=3)
    assert parallel.results_bytes() == a.results_bytes()
    cfg2 = _shrunk("wh-poisson", samples=10**4)
    cfg2["seed"] = 9
    assert run_experiment(cfg2).results_bytes() != a.results_bytes()


def test_report_config_echo_is_re_runnable():
    report = run_experiment(_shrunk("gauss", samples=10**4))
    again = run_experiment(report.config)
    assert again.results_bytes() == report.results_bytes()
