"""Compiled and reference kernels agree on every norm regime."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from bibasis.kernels import _ref, backend_name

_fast = pytest.importorskip(
    "bibasis.kernels._fast", reason="compiled kernel extension not built"
)

P_VALUES = (1.0, 2.0, 2.7, math.inf)


def _cases(seed=0, trials=40):
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        m = int(rng.integers(1, 12))
        d = int(rng.integers(1, 16))
        X = rng.standard_normal((m, d))
        w = rng.random(d) + 0.05
        alpha = rng.standard_normal(m)
        alpha[rng.random(m) < 0.2] = 0.0  # exercise the sparse skip path
        p = float(rng.choice(P_VALUES))
        yield X, w, p, alpha


def _oracle(X, w, p, alpha):
    # definitionally direct numpy version, independent of both backends
    partials = np.cumsum(alpha[:, None] * X, axis=0)

    def wn(v):
        a = np.abs(v)
        if p == math.inf:
            return float(a.max())
        return float((w * a**p).sum() ** (1.0 / p))

    last = wn(partials[-1])
    env = wn(np.max(np.abs(partials), axis=0))
    maxpart = max(wn(s) for s in partials)
    abssum = wn(np.sum(np.abs(alpha[:, None] * X), axis=0))
    return np.array([last, env, maxpart, abssum])


def test_eval_terms_matches_oracle_on_both_backends():
    for X, w, p, alpha in _cases(seed=1):
        want = _oracle(X, w, p, alpha)
        assert np.allclose(_ref.eval_terms(X, w, p, alpha), want, rtol=1e-12)
        assert np.allclose(_fast.eval_terms(X, w, p, alpha), want, rtol=1e-12)


def test_backends_agree_pointwise():
    for X, w, p, alpha in _cases(seed=2):
        a = np.asarray(_ref.eval_terms(X, w, p, alpha))
        b = np.asarray(_fast.eval_terms(X, w, p, alpha))
        assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


def test_batch_agrees_with_single_rows():
    rng = np.random.default_rng(3)
    for p in P_VALUES:
        X = rng.standard_normal((6, 9))
        w = rng.random(9) + 0.1
        A = rng.standard_normal((17, 6))
        for impl in (_ref, _fast):
            got = np.asarray(impl.eval_terms_batch(X, w, p, A))
            assert got.shape == (17, 4)
            for i, alpha in enumerate(A):
                assert np.allclose(got[i], impl.eval_terms(X, w, p, alpha), rtol=1e-13)


def test_kernels_accept_read_only_inputs():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((4, 5))
    w = rng.random(5) + 0.1
    alpha = rng.standard_normal(4)
    A = rng.standard_normal((3, 4))
    for arr in (X, w, alpha, A):
        arr.setflags(write=False)
    for impl in (_ref, _fast):
        impl.eval_terms(X, w, 2.0, alpha)
        impl.eval_terms_batch(X, w, math.inf, A)


def test_all_zero_coefficients_yield_zero_terms():
    X = np.ones((3, 2))
    w = np.ones(2)
    for impl in (_ref, _fast):
        out = np.asarray(impl.eval_terms(X, w, 2.0, np.zeros(3)))
        assert np.array_equal(out, np.zeros(4))


def test_env_variable_forces_backend():
    code = "from bibasis.kernels import backend_name; print(backend_name)"
    for choice in ("ref", "fast"):
        got = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "BIBASIS_KERNEL": choice},
            capture_output=True,
            text=True,
            check=True,
        )
        assert got.stdout.strip() == choice


def test_default_backend_is_compiled_when_available():
    assert backend_name == "fast"
