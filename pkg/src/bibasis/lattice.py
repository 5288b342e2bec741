"""Finite-dimensional Banach lattice model.

A space is R^dim with strictly positive quadrature weights and an exponent
p in [1, inf].  The norm is (sum_i w_i |v_i|^p)^(1/p) for finite p and
max_i |v_i| for p = inf (weights ignored).  Two space kinds are supported:

* ``lp_n``      -- the sequence space with unit weights,
* ``Lp_dyadic`` -- the dyadic discretization of the function space on [0, 1]
                   at level l: dim = 2^l cells, every weight 2^-l.

Step functions that are constant on dyadic cells of level l are represented
exactly, so lattice operations (modulus, suprema, partial-sum envelopes) are
exact coordinatewise and norms are exact up to float64 rounding.

Everything here is immutable after construction and all operations are pure
functions; sharing values across threads is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Space",
    "LVec",
    "SpaceMismatchError",
    "make_space",
    "lp_n",
    "dyadic",
    "norm",
    "modulus",
    "sup",
    "pointwise_pow",
    "partial_sum_envelope",
    "maximal_function",
    "square_function",
]

CoeffVec = Union[np.ndarray, Sequence[float]]

SPACE_KINDS = ("lp_n", "Lp_dyadic")


class SpaceMismatchError(ValueError):
    """Operands live in different spaces."""


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Space:
    """A finite-dimensional Banach lattice R^dim with weights and exponent p.

    ``p == math.inf`` is a first-class variant of the norm (coordinatewise
    maximum), not a large-p approximation.  ``level`` is set for the dyadic
    kind only.
    """

    dim: int
    p: float
    weights: np.ndarray
    kind: str = "lp_n"
    level: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in SPACE_KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise ValueError("dim must be a positive integer")
        p = float(self.p)
        if not (p >= 1.0):
            raise ValueError("p must satisfy 1 <= p <= inf")
        object.__setattr__(self, "p", p)
        w = _frozen(np.asarray(self.weights, dtype=np.float64))
        if w.shape != (self.dim,):
            raise ValueError("weights must have shape (dim,)")
        if not np.all(w > 0.0):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "weights", w)
        if self.kind == "Lp_dyadic":
            if self.level is None or self.level < 0:
                raise ValueError("Lp_dyadic requires level >= 0")
            if self.dim != 2 ** self.level:
                raise ValueError("Lp_dyadic requires dim == 2^level")
            if not np.all(w == 2.0 ** -self.level):
                raise ValueError("Lp_dyadic requires every weight == 2^-level")
        elif self.level is not None:
            raise ValueError("level applies to Lp_dyadic only")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Space):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.dim == other.dim
            and self.p == other.p
            and self.level == other.level
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.dim, self.p, self.level))

    @property
    def size_param(self) -> int:
        """dim for lp_n, level for Lp_dyadic (the CSV header value)."""
        return self.dim if self.kind == "lp_n" else int(self.level)  # type: ignore[arg-type]

    def vec(self, coords: CoeffVec) -> "LVec":
        return LVec(self, np.asarray(coords, dtype=np.float64))


def make_space(kind: str, p: float, size_param: int) -> Space:
    """Build a space from its descriptor.

    ``size_param`` is the dimension for ``lp_n`` and the dyadic level for
    ``Lp_dyadic``.
    """
    if kind == "lp_n":
        return Space(dim=size_param, p=p, weights=np.ones(size_param), kind="lp_n")
    if kind == "Lp_dyadic":
        dim = 2 ** size_param
        w = np.full(dim, 2.0 ** -size_param)
        return Space(dim=dim, p=p, weights=w, kind="Lp_dyadic", level=size_param)
    raise ValueError(f"unknown space kind {kind!r}")


def lp_n(p: float, n: int) -> Space:
    return make_space("lp_n", p, n)


def dyadic(p: float, level: int) -> Space:
    return make_space("Lp_dyadic", p, level)


@dataclass(frozen=True)
class LVec:
    """An element of a Space; coordinates are read-only float64."""

    space: Space
    coords: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        c = _frozen(np.asarray(self.coords, dtype=np.float64))
        if c.shape != (self.space.dim,):
            raise ValueError("coords must have shape (dim,)")
        object.__setattr__(self, "coords", c)

    def _check(self, other: "LVec") -> None:
        if self.space != other.space:
            raise SpaceMismatchError("operands live in different spaces")

    def __add__(self, other: "LVec") -> "LVec":
        self._check(other)
        return LVec(self.space, self.coords + other.coords)

    def __sub__(self, other: "LVec") -> "LVec":
        self._check(other)
        return LVec(self.space, self.coords - other.coords)

    def __mul__(self, scalar: float) -> "LVec":
        return LVec(self.space, self.coords * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "LVec":
        return LVec(self.space, -self.coords)


def weighted_norm(coords: np.ndarray, weights: np.ndarray, p: float) -> float:
    """Weighted p-norm of a raw coordinate array (last axis)."""
    a = np.abs(coords)
    if p == math.inf:
        return float(a.max(axis=-1)) if a.ndim == 1 else a.max(axis=-1)
    if p == 1.0:
        s = a @ weights
    elif p == 2.0:
        s = (a * a) @ weights
        return float(np.sqrt(s)) if np.ndim(s) == 0 else np.sqrt(s)
    else:
        s = (a ** p) @ weights
    out = s if p == 1.0 else s ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out


def norm(v: LVec) -> float:
    """The lattice norm: (sum w_i |v_i|^p)^(1/p), or max |v_i| for p = inf."""
    return float(weighted_norm(v.coords, v.space.weights, v.space.p))


def modulus(v: LVec) -> LVec:
    """|v|, coordinatewise absolute value."""
    return LVec(v.space, np.abs(v.coords))


def sup(v: LVec, w: LVec) -> LVec:
    """v or w, the coordinatewise maximum (lattice supremum)."""
    v._check(w)
    return LVec(v.space, np.maximum(v.coords, w.coords))


def pointwise_pow(v: LVec, r: float) -> LVec:
    """Coordinatewise power of a nonnegative vector."""
    if np.any(v.coords < 0.0):
        raise ValueError("pointwise_pow requires a nonnegative vector")
    return LVec(v.space, v.coords ** float(r))


def _unpack(vectors, alpha: CoeffVec) -> tuple[Space, np.ndarray, np.ndarray]:
    """Accepts a System or a sequence of LVec; returns (space, matrix, alpha)."""
    vecs = getattr(vectors, "vectors", vectors)
    vecs = list(vecs)
    if not vecs:
        raise ValueError("need at least one vector")
    space = vecs[0].space
    for v in vecs[1:]:
        if v.space != space:
            raise SpaceMismatchError("vectors live in different spaces")
    a = np.asarray(alpha, dtype=np.float64)
    if a.shape != (len(vecs),):
        raise ValueError(f"expected {len(vecs)} coefficients, got shape {a.shape}")
    X = np.stack([v.coords for v in vecs])
    return space, X, a


def partial_sum_envelope(vectors, alpha: CoeffVec) -> LVec:
    """or_{n<=m} |sum_{k<=n} alpha_k x_k|, the running maximum of the moduli
    of the partial sums.

    This is the martingale maximal function f* of the partial-sum process
    when the vectors form a martingale difference sequence.
    """
    space, X, a = _unpack(vectors, alpha)
    s = np.cumsum(a[:, None] * X, axis=0)
    return LVec(space, np.max(np.abs(s), axis=0))


def maximal_function(vectors, alpha: CoeffVec) -> LVec:
    """Alias for partial_sum_envelope over the finite index range."""
    return partial_sum_envelope(vectors, alpha)


def square_function(vectors, alpha: CoeffVec) -> LVec:
    """S(f) = (sum_k |alpha_k x_k|^2)^(1/2), coordinatewise."""
    space, X, a = _unpack(vectors, alpha)
    sq = np.sum((a[:, None] * X) ** 2, axis=0)
    return LVec(space, np.sqrt(sq))
