"""Behavior of the claim checks and the suite runner."""

import json

import pytest

from bibasis import SuiteConfig, list_checks, run_check, run_suite
from bibasis.checks import (
    DEFAULT_PLAN,
    check_bgd_khintchine_report,
    check_discretized_rademacher,
    check_haar_l1_failure,
    check_rademacher,
    haar_level_breakpoints,
    is_full_level_blocking,
)


def _strip(outcome):
    d = outcome.to_dict()
    d.pop("runtime_ms")
    return d


def test_registry_lists_every_planned_check():
    ids = list_checks()
    assert len(ids) == len(set(ids))
    assert {cid for cid, _ in DEFAULT_PLAN} <= set(ids)


def test_every_check_passes_at_plan_parameters():
    for cid, params in DEFAULT_PLAN:
        out = run_check(cid, seed=0, **params)
        assert out.passed, f"{cid}: {out.measured}"
        assert out.id == cid
        assert out.runtime_ms >= 0.0


def test_outcomes_are_deterministic_apart_from_runtime():
    for cid, params in (("diff-basis", {"m": 6}), ("walsh", {"n": 4}),
                        ("lemma-2unc", {"trials": 50})):
        a = run_check(cid, seed=3, **params)
        b = run_check(cid, seed=3, **params)
        assert _strip(a) == _strip(b)


def test_outcomes_serialize_to_json():
    out = run_check("diff-basis", m=4)
    encoded = json.dumps(out.to_dict(), allow_nan=False)
    assert json.loads(encoded)["id"] == "diff-basis"


def test_tolerance_override_can_force_failure():
    assert run_check("walsh", n=4).passed
    assert not run_check("walsh", n=4, tol=1e-30).passed


def test_unknown_check_id_raises():
    with pytest.raises(ValueError):
        run_check("nosuch-check")


def test_suite_select_none_runs_the_full_plan():
    outs = run_suite(SuiteConfig(seed=0, select=("diff-basis", "walsh")))
    assert [o.id for o in outs] == ["diff-basis", "walsh"]
    assert all(o.passed for o in outs)


def test_suite_select_empty_runs_nothing():
    assert run_suite(SuiteConfig(seed=0, select=())) == []


def test_suite_rejects_unknown_selection():
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(seed=0, select=("diff-basis", "bogus")))


def test_suite_overrides_reach_the_check():
    cfg = SuiteConfig(seed=0, select=("diff-basis",), overrides={"diff-basis": {"m": 5}})
    (out,) = run_suite(cfg)
    assert out.measured["m"] == 5.0


def test_level_breakpoints_and_full_level_blocking_filter():
    assert haar_level_breakpoints(3) == (1, 2, 4, 8)
    assert is_full_level_blocking((1, 2, 4, 8), 3)
    assert not is_full_level_blocking((1, 2, 8), 3)
    # singleton-only blocking carries no aggregation and is excluded
    assert not is_full_level_blocking(tuple(range(1, 9)), 3)


def test_check_parameter_validation():
    with pytest.raises(ValueError):
        check_haar_l1_failure(level_max=1)
    with pytest.raises(ValueError):
        check_discretized_rademacher(p=2.0)
    with pytest.raises(ValueError):
        check_rademacher(m=7)
    with pytest.raises(ValueError):
        run_check("diff-basis", m=1)


def test_bgd_khintchine_report_is_stable_across_seeds():
    out = check_bgd_khintchine_report(seed=4)
    assert out.passed
    assert out.measured["maximal_square_min_a"] > 0.0
    assert out.measured["khintchine_max_a"] < 1.0 + 1e-9


def test_rademacher_even_grid_values_are_exact_fractions():
    out = check_rademacher(p=1.0, m=8, budget=6600, seed=0)
    assert out.measured["a_ratio_m2"] == pytest.approx(2.0, abs=1e-12)
    assert out.measured["a_ratio_m4"] == pytest.approx(8.0 / 3.0, abs=1e-12)
    assert out.measured["a_ratio_m6"] == pytest.approx(16.0 / 5.0, abs=1e-12)
    assert out.measured["a_ratio_m8"] == pytest.approx(128.0 / 35.0, abs=1e-12)
    assert out.measured["max_perm_spread"] == 0.0
