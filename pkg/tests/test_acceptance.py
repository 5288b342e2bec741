"""Acceptance gate: eleven quantitative claims at fixed tolerances.

Each test is one claim; `pytest -v` prints one pass/fail line per claim.
Oracles are computed independently inside the test, before and apart from
the library calls they vet: the planar maximum is re-derived from a raw
10^6-point unit-circle sweep, the Rademacher absolute means from exhaustive
sign enumeration, and the sign-cube identities from direct matrix algebra.
"""

import itertools
import math
import time

import numpy as np
import pytest

from bibasis import (
    absolute_matrix_example,
    block_system,
    difference_basis,
    discretized_rademacher,
    estimate_constant,
    haar,
    rademacher,
    ratio,
    walsh,
)
from bibasis.checks import (
    check_absolute_matrix,
    check_blocks,
    check_haar_doob,
    check_haar_l1_failure,
    check_lemma_2unc,
    check_perturbation,
    check_rademacher,
    check_walsh,
)


class _Clock:
    def __init__(self, limit_s):
        self.limit = limit_s
        self.t0 = time.monotonic()

    def check(self):
        elapsed = time.monotonic() - self.t0
        assert elapsed < self.limit, f"exceeded {self.limit}s ({elapsed:.1f}s)"


def test_criterion_01_haar_doob_bounds():
    clock = _Clock(30.0)
    for p in (2.0, 3.0, 4.0):
        out = check_haar_doob(p=p, level=4, budget=10_000, seed=0)
        q = p / (p - 1.0)
        gkp = (1.0 + 1.0 / (2.0**p - 2.0)) ** (1.0 / p)
        assert out.passed
        assert out.measured["max_sampled_ratio"] <= q + 1e-9
        assert out.measured["optimized_lower"] >= gkp - 1e-6
        assert out.measured["evaluations"] <= 10_000
    clock.check()


def test_criterion_02_difference_basis_envelope_exact():
    clock = _Clock(1.0)
    for m in range(2, 13):
        s = difference_basis(m)
        assert ratio(s, np.ones(m), "M") == pytest.approx(m, abs=1e-12)
    clock.check()


def test_criterion_03_planar_haar_maximum_matches_sweep_oracle():
    clock = _Clock(5.0)
    # oracle first: raw coordinate sweep of the level-1 envelope ratio over
    # 10^6 unit-circle directions, no package code involved
    theta = np.linspace(0.0, 2.0 * np.pi, 1_000_000, endpoint=False)
    a, b = np.cos(theta), np.sin(theta)
    env1 = np.maximum(np.abs(a), np.abs(a + b))
    env2 = np.maximum(np.abs(a), np.abs(a - b))
    sweep = float(np.max(np.sqrt(0.5 * (env1**2 + env2**2))))
    golden = math.sqrt((3.0 + math.sqrt(5.0)) / 4.0)
    assert sweep == pytest.approx(golden, abs=1e-9)

    est = estimate_constant(haar(2.0, 1), "M", "grid_sphere", 10_000, 0)
    assert est.lower == pytest.approx(sweep, abs=1e-6)
    clock.check()


def test_criterion_04_perturbation_stability_bound():
    clock = _Clock(60.0)
    out = check_perturbation(
        p=2.0, level=3, perturbation_scale=0.05, trials=100, seed=0
    )
    assert out.passed
    assert out.measured["trials"] == 100.0
    assert out.measured["max_theta"] < 1.0
    # every perturbed lower bound stayed under (2 + theta)/(1 - theta)
    assert out.measured["max_slack"] <= 1e-6
    clock.check()


def test_criterion_05_blocking_never_inflates_the_envelope():
    clock = _Clock(10.0)
    out = check_blocks(p=2.0, level=3, trials=50, seed=0)
    assert out.passed
    assert out.measured["trials"] == 50.0
    assert out.measured["max_coord_violation"] <= 1e-10
    clock.check()


def test_criterion_06_sign_supremum_identities_exact():
    clock = _Clock(5.0)
    out = check_lemma_2unc(trials=1000, seed=0)
    assert out.passed
    assert out.measured["max_sign_identity_error"] <= 1e-12
    assert out.measured["max_modulus_identity_error"] <= 1e-12
    assert out.measured["max_subset_violation"] <= 1e-12
    clock.check()


def test_criterion_07_walsh_norms_factorization_invariance():
    clock = _Clock(10.0)
    out = check_walsh(n=10, seed=0)
    assert out.passed
    assert out.measured["max_sqrt_norm_error"] <= 1e-12
    assert out.measured["max_abs_norm_error"] <= 1e-12
    assert out.measured["factorization_exact"] == 1.0
    assert out.measured["max_invariance_rel_error"] <= 1e-12
    clock.check()


def test_criterion_08_absolute_matrix_concentrates_the_absolute_sum():
    clock = _Clock(10.0)
    for m in range(2, 11):
        out = check_absolute_matrix(m=m, trials=1000 if m == 10 else 100, seed=0)
        assert out.passed
        assert out.measured["max_identity_rel_error"] <= 1e-12
        assert out.measured["max_moduli_error"] <= 1e-12
    clock.check()


def test_criterion_09_rademacher_absolute_ratio_and_plateau():
    clock = _Clock(30.0)
    # oracle first: exhaustive enumeration of |sum of m signs| in L1
    mean_abs = {}
    for m in (2, 4, 6, 8):
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=m)))
        mean_abs[m] = float(np.abs(signs.sum(axis=1)).mean())
    assert mean_abs[8] == 2.1875  # 35/16, exactly representable

    out = check_rademacher(p=1.0, m=8, budget=6600, seed=0)
    assert out.passed
    prev = None
    for m in (2, 4, 6, 8):
        got = out.measured[f"a_ratio_m{m}"]
        assert got == pytest.approx(m / mean_abs[m], abs=1e-12)
        direct = ratio(rademacher(1.0, m), np.ones(m), "A")
        assert direct == pytest.approx(got, abs=1e-12)
        if prev is not None:
            assert got > prev
        prev = got
    assert out.measured["a_ratio_m8"] > 2.0
    assert out.measured["plateau_ratio"] <= 1.05
    clock.check()


def test_criterion_10_l1_haar_lower_bounds_grow_by_level():
    clock = _Clock(60.0)
    out = check_haar_l1_failure(level_max=4, budget=12_000, seed=0)
    assert out.passed
    l2 = out.measured["lower_level_2"]
    l3 = out.measured["lower_level_3"]
    l4 = out.measured["lower_level_4"]
    assert l2 < l3 < l4
    clock.check()


_ROSTER = [
    # every suite system with at most ten vectors, named by its role there
    ("haar p=2 level 3", lambda: haar(2.0, 3)),
    ("haar p=3 level 3", lambda: haar(3.0, 3)),
    ("haar p=4 level 3", lambda: haar(4.0, 3)),
    ("haar p=1 level 2", lambda: haar(1.0, 2)),
    ("haar p=1 level 3", lambda: haar(1.0, 3)),
    ("rademacher p=1 m=8", lambda: rademacher(1.0, 8)),
    ("difference basis m=10", lambda: difference_basis(10)),
    ("absolute matrix m=10", lambda: absolute_matrix_example(10)),
    ("walsh p=2 n=3", lambda: walsh(2.0, 3)),
    ("discretized rademacher S=4", lambda: discretized_rademacher(4.0, 4)),
    (
        "blocked haar p=1 level 2",
        lambda: block_system(haar(1.0, 2), (1, 2, 4), np.ones(4)),
    ),
]


def test_criterion_11_multistart_dominates_exhaustive_signs():
    # budget 2 * 3^m lets the multistart scan the whole ternary cube, which
    # contains every sign pattern the exhaustive strategy enumerates
    for name, build in _ROSTER:
        s = build()
        assert s.m <= 10, name
        budget = max(12, 2 * 3**s.m)
        kinds = ["K", "M", "A"]
        if s.m <= 6:
            kinds += ["L", "Ku"]
        for kind in kinds:
            exh = estimate_constant(s, kind, "exhaustive_signs", budget, seed=0)
            ms = estimate_constant(s, kind, "multistart_ascent", budget, seed=0)
            assert ms.lower >= exh.lower - 1e-9, f"{name} / {kind}"
