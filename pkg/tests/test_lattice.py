"""Norms and lattice operations on weighted finite-dimensional spaces."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bibasis import (
    LVec,
    SpaceMismatchError,
    dyadic,
    lp_n,
    make_space,
    maximal_function,
    modulus,
    norm,
    partial_sum_envelope,
    pointwise_pow,
    square_function,
    sup,
)
from bibasis.lattice import weighted_norm

P_VALUES = (1.0, 1.5, 2.0, 3.0, math.inf)


def _vec(space, coords) -> LVec:
    return LVec(space, np.asarray(coords, dtype=np.float64))


def _nm(coords, weights, p) -> float:
    # independent reference norm, no calls into the package
    a = np.abs(np.asarray(coords, dtype=np.float64))
    if p == math.inf:
        return float(a.max())
    return float((weights * a**p).sum() ** (1.0 / p))


coords_st = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    min_size=1,
    max_size=12,
)


@settings(deadline=None)
@given(coords=coords_st, p=st.sampled_from(P_VALUES))
def test_norm_matches_reference_formula(coords, p):
    space = lp_n(p, len(coords))
    got = norm(_vec(space, coords))
    want = _nm(coords, space.weights, p)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(deadline=None)
@given(
    coords=coords_st,
    p=st.sampled_from(P_VALUES),
    scale=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
)
def test_norm_absolute_homogeneity(coords, p, scale):
    space = lp_n(p, len(coords))
    v = norm(_vec(space, coords))
    sv = norm(_vec(space, scale * np.asarray(coords)))
    assert sv == pytest.approx(abs(scale) * v, rel=1e-12, abs=1e-9)


@settings(deadline=None)
@given(coords=coords_st, other=coords_st, p=st.sampled_from(P_VALUES))
def test_norm_triangle_inequality(coords, other, p):
    n = min(len(coords), len(other))
    a = np.asarray(coords[:n])
    b = np.asarray(other[:n])
    space = lp_n(p, n)
    lhs = norm(_vec(space, a + b))
    rhs = norm(_vec(space, a)) + norm(_vec(space, b))
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@settings(deadline=None)
@given(coords=coords_st, p=st.sampled_from(P_VALUES))
def test_norm_is_lattice_monotone(coords, p):
    # |v| <= |w| coordinatewise forces norm(v) <= norm(w)
    space = lp_n(p, len(coords))
    v = np.asarray(coords)
    w = np.abs(v) + np.linspace(0.0, 1.0, len(coords))
    assert norm(_vec(space, v)) <= norm(_vec(space, w)) * (1 + 1e-12) + 1e-12


@pytest.mark.parametrize("p", P_VALUES)
def test_norm_zero_iff_zero_vector(p):
    space = lp_n(p, 4)
    assert norm(_vec(space, np.zeros(4))) == 0.0
    assert norm(_vec(space, [0.0, 0.0, 1e-6, 0.0])) > 0.0


@pytest.mark.parametrize("p", (1.0, 2.0, 3.0, math.inf))
@pytest.mark.parametrize("level", (1, 2, 4))
def test_dyadic_space_normalizes_constants(p, level):
    space = dyadic(p, level)
    assert space.dim == 2**level
    if p != math.inf:
        assert np.allclose(space.weights, 2.0**-level)
    assert norm(_vec(space, np.ones(space.dim))) == pytest.approx(1.0, abs=1e-12)


def test_sup_norm_ignores_weights():
    v = [0.25, -3.0, 1.0, 0.5]
    assert norm(_vec(dyadic(math.inf, 2), v)) == 3.0
    assert norm(_vec(lp_n(math.inf, 4), v)) == 3.0


def test_make_space_dispatches_by_kind():
    assert make_space("lp_n", 2.0, 5) == lp_n(2.0, 5)
    assert make_space("Lp_dyadic", 3.0, 2) == dyadic(3.0, 2)
    with pytest.raises(ValueError):
        make_space("nosuch", 2.0, 3)


@pytest.mark.parametrize("bad_p", (0.5, 0.0, -1.0))
def test_space_rejects_p_below_one(bad_p):
    with pytest.raises(ValueError):
        lp_n(bad_p, 3)


def test_weighted_norm_agrees_on_all_p_branches():
    rng = np.random.default_rng(7)
    coords = rng.standard_normal(9)
    weights = rng.random(9) + 0.1
    for p in (1.0, 2.0, 3.7, math.inf):
        assert weighted_norm(coords, weights, p) == pytest.approx(
            _nm(coords, weights, p), rel=1e-12
        )


def test_modulus_and_pointwise_pow():
    space = lp_n(2.0, 3)
    v = _vec(space, [-2.0, 0.0, 3.0])
    assert np.array_equal(modulus(v).coords, [2.0, 0.0, 3.0])
    assert np.allclose(pointwise_pow(modulus(v), 2.0).coords, [4.0, 0.0, 9.0])


def test_sup_is_coordinatewise_max():
    space = lp_n(1.0, 3)
    v = _vec(space, [1.0, -2.0, 0.0])
    w = _vec(space, [0.0, 5.0, -1.0])
    assert np.array_equal(sup(v, w).coords, [1.0, 5.0, 0.0])
    assert norm(sup(modulus(v), modulus(w))) >= max(norm(v), norm(w)) - 1e-12


def test_sup_rejects_mismatched_spaces():
    v = _vec(lp_n(2.0, 3), [1.0, 0.0, 0.0])
    w = _vec(lp_n(2.0, 4), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(SpaceMismatchError):
        sup(v, w)


def _random_family(rng, m, d):
    space = lp_n(float(rng.choice([1.0, 2.0, 3.0])), d)
    X = rng.standard_normal((m, d))
    alpha = rng.standard_normal(m)
    return space, X, alpha


def test_partial_sum_envelope_matches_loop_oracle():
    rng = np.random.default_rng(0)
    for _ in range(25):
        m, d = int(rng.integers(1, 8)), int(rng.integers(1, 9))
        space, X, alpha = _random_family(rng, m, d)
        vecs = [LVec(space, row) for row in X]
        env = partial_sum_envelope(vecs, alpha).coords
        s = np.zeros(d)
        best = np.zeros(d)
        for k in range(m):
            s = s + alpha[k] * X[k]
            best = np.maximum(best, np.abs(s))
        assert np.allclose(env, best, rtol=1e-13, atol=1e-13)
        # every partial sum is dominated coordinatewise
        assert np.all(np.abs(s) <= env + 1e-12)


def test_maximal_function_is_the_envelope():
    rng = np.random.default_rng(1)
    space, X, alpha = _random_family(rng, 5, 6)
    vecs = [LVec(space, row) for row in X]
    assert np.array_equal(
        maximal_function(vecs, alpha).coords, partial_sum_envelope(vecs, alpha).coords
    )


def test_square_function_matches_loop_oracle():
    rng = np.random.default_rng(2)
    for _ in range(25):
        m, d = int(rng.integers(1, 8)), int(rng.integers(1, 9))
        space, X, alpha = _random_family(rng, m, d)
        vecs = [LVec(space, row) for row in X]
        got = square_function(vecs, alpha).coords
        want = np.sqrt(np.sum((alpha[:, None] * X) ** 2, axis=0))
        assert np.allclose(got, want, rtol=1e-13, atol=1e-13)


def test_sup_norm_envelope_equals_max_partial_sup_norm():
    # in the sup norm, || or_n |s_n| || = max_n ||s_n||: the coordinatewise
    # and index maxima commute, so the envelope never inflates beyond the
    # largest partial sum there
    rng = np.random.default_rng(3)
    space = lp_n(math.inf, 7)
    for _ in range(20):
        X = rng.standard_normal((6, 7))
        alpha = rng.standard_normal(6)
        vecs = [LVec(space, row) for row in X]
        env_norm = norm(partial_sum_envelope(vecs, alpha))
        partials = np.cumsum(alpha[:, None] * X, axis=0)
        assert env_norm == pytest.approx(
            max(np.abs(s).max() for s in partials), rel=1e-13
        )
