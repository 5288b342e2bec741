"""Constructors for finite sections of classical systems.

Each constructor returns a System: an ordered finite family of vectors in a
common Space, stored as the rows of an (m, dim) matrix.  Step functions on
[0, 1] are represented exactly on the dyadic grid of the ambient space, so
every entry below is an exact float64 (signs, powers of two, dyadic nodes).

The ``monotone`` flag certifies that the family is a monotone basic sequence
(every partial sum norm bounded by the next one, so the basis constant is 1).
It is set only where that is a theorem for the construction.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .lattice import LVec, Space, dyadic, lp_n, make_space

__all__ = [
    "System",
    "SignMatrix",
    "unit_vectors",
    "summing_basis",
    "difference_basis",
    "haar",
    "rademacher",
    "hadamard",
    "walsh_matrix",
    "walsh",
    "discretized_rademacher",
    "absolute_matrix_example",
    "schauder_c01",
    "subsequence",
    "system_to_csv",
    "system_from_csv",
    "lvec_to_csv",
    "lvec_from_csv",
    "sign_matrix_to_csv",
]


def _frozen(a: np.ndarray, dtype=np.float64) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class System:
    """An ordered family of m vectors in a Space.

    ``blocks``, when set, lists disjoint coordinate ranges [start, stop) and
    every vector must be supported in exactly one of them (direct-sum
    constructions).  ``params`` records the construction parameters.
    """

    name: str
    space: Space
    matrix: np.ndarray = field(repr=False)
    blocks: tuple[tuple[int, int], ...] | None = None
    params: Mapping = field(default_factory=dict)
    monotone: bool = False

    def __post_init__(self) -> None:
        M = _frozen(np.asarray(self.matrix, dtype=np.float64))
        if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] != self.space.dim:
            raise ValueError("matrix must be (m, dim) with m >= 1")
        if not np.all(np.isfinite(M)):
            raise ValueError("matrix entries must be finite")
        if not np.all(np.any(M != 0.0, axis=1)):
            raise ValueError("zero vectors are not allowed")
        object.__setattr__(self, "matrix", M)
        if self.blocks is not None:
            bl = tuple((int(a), int(b)) for a, b in self.blocks)
            if any(not (0 <= a < b <= self.space.dim) for a, b in bl):
                raise ValueError("blocks must be ranges within [0, dim)")
            for (a1, b1), (a2, b2) in zip(bl, bl[1:]):
                if b1 > a2:
                    raise ValueError("blocks must be disjoint and ordered")
            for row in M:
                nz = np.nonzero(row)[0]
                homes = [i for i, (a, b) in enumerate(bl) if a <= nz[0] < b]
                if len(homes) != 1 or not np.all((nz >= bl[homes[0]][0]) & (nz < bl[homes[0]][1])):
                    raise ValueError("every vector must be supported in exactly one block")
            object.__setattr__(self, "blocks", bl)

    @property
    def m(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def vectors(self) -> list[LVec]:
        return [LVec(self.space, row) for row in self.matrix]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, System):
            return NotImplemented
        return (
            self.space == other.space
            and np.array_equal(self.matrix, other.matrix)
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.name, self.space, self.matrix.shape))


@dataclass(frozen=True)
class SignMatrix:
    """A 2^n x 2^n matrix with entries +-1, stored exactly as int8."""

    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        E = _frozen(np.asarray(self.entries), dtype=np.int8)
        size = 2 ** self.n
        if E.shape != (size, size):
            raise ValueError("entries must be (2^n, 2^n)")
        if not np.all(np.abs(E) == 1):
            raise ValueError("entries must be +-1")
        object.__setattr__(self, "entries", E)

    @property
    def size(self) -> int:
        return 2 ** self.n


def unit_vectors(p: float, n: int) -> System:
    """The unit vector basis of lp^n."""
    return System("unit_vectors", lp_n(p, n), np.eye(n), params={"p": p, "n": n},
                  monotone=True)


def summing_basis(n: int) -> System:
    """x_k = e_1 + ... + e_k in linf^n; every vector has sup norm 1.

    Not monotone: e.g. alpha = (2, -1) has ||s_1|| = 2 > 1 = ||s_2||.
    """
    return System("summing_basis", lp_n(math.inf, n), np.tril(np.ones((n, n))),
                  params={"n": n})


def difference_basis(n: int) -> System:
    """x_1 = e_1, x_k = -e_{k-1} + e_k in l1^n.

    Monotone (basis constant 1), yet the running maximum of the partial sums
    of the all-ones coefficients is the all-ones vector while the final sum
    is e_n, so the envelope-to-sum ratio equals n: basic but far from
    bibasic as n grows.
    """
    M = np.eye(n) - np.eye(n, k=-1)
    return System("difference_basis", lp_n(1.0, n), M, params={"n": n}, monotone=True)


def haar(p: float, level: int, normalized: bool = False) -> System:
    """The first 2^level Haar functions on the dyadic grid of that level.

    h_1 is the constant 1; for j < level and 0 <= i < 2^j the function
    h_{2^j + i + 1} is +1 on the left half and -1 on the right half of the
    i-th dyadic interval of length 2^-j.  Functions are +-1 valued on their
    support by default; normalized=True rescales each to Lp norm 1.

    Every partial sum in the natural order is a conditional expectation of
    the full sum on a coarser dyadic algebra, so the system is monotone.
    """
    d = 2 ** level
    rows = [np.ones(d)]
    for j in range(level):
        width = d >> j
        for i in range(2 ** j):
            v = np.zeros(d)
            start = i * width
            v[start : start + width // 2] = 1.0
            v[start + width // 2 : start + width] = -1.0
            if normalized and p != math.inf:
                v *= (2.0 ** j) ** (1.0 / p)  # ||h||_p = 2^(-j/p)
            rows.append(v)
    return System("haar", dyadic(p, level), np.array(rows),
                  params={"p": p, "level": level, "normalized": normalized,
                          "family": "haar"},
                  monotone=True)


def rademacher(p: float, m: int) -> System:
    """r_1, ..., r_m on the dyadic grid of level m.

    r_k alternates sign on consecutive runs of 2^(m-k) cells; it equals the
    sum of all Haar functions of level k-1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    d = 2 ** m
    idx = np.arange(d)
    rows = [np.where((idx >> (m - k)) & 1 == 0, 1.0, -1.0) for k in range(1, m + 1)]
    return System("rademacher", dyadic(p, m), np.array(rows),
                  params={"p": p, "m": m}, monotone=(p == 2.0))


def hadamard(n: int) -> SignMatrix:
    """H_0 = (1), H_{k+1} = [[H_k, H_k], [H_k, -H_k]]."""
    H = np.array([[1]], dtype=np.int8)
    for _ in range(n):
        H = np.block([[H, H], [H, -H]]).astype(np.int8)
    return SignMatrix(n, H)


def _sign_changes(col: np.ndarray) -> int:
    return int(np.count_nonzero(col[1:] != col[:-1]))


def walsh_matrix(n: int) -> tuple[SignMatrix, np.ndarray]:
    """W_n (columns of H_n sorted by ascending sign-change count) and the
    permutation ``order`` with W[:, j] = H[:, order[j]].

    The sign-change counts of the columns of H_n are exactly 0..2^n-1, so the
    order is unique.  As permutation matrices, P[i, order[i]] = 1 satisfies
    H_n = P^T W_n = W_n P (both matrices are symmetric).
    """
    H = hadamard(n).entries
    changes = np.array([_sign_changes(H[:, j]) for j in range(H.shape[1])])
    order = np.argsort(changes, kind="stable")
    W = H[:, order]
    order = _frozen(order, dtype=np.int64)
    return SignMatrix(n, W), order


def walsh(p: float, n: int) -> System:
    """The 2^n Walsh functions in sequency order as step functions of level n.

    w_0 = 1 first; w_k has exactly k sign changes.
    """
    W, _ = walsh_matrix(n)
    M = W.entries.T.astype(np.float64)  # vector k = column k of W
    return System("walsh", dyadic(p, n), M, params={"p": p, "n": n},
                  monotone=(p == 2.0))


def discretized_rademacher(p: float, S: int) -> System:
    """Blockwise discretized Rademacher functions in lp^(2^(S+1)-2), p < inf.

    Block s (1 <= s <= S) occupies 2^s coordinates and carries the first s
    Rademacher sign patterns scaled by 2^(-s/p), so each vector has norm 1.
    The vectors are listed block by block: z_1^(1); z_1^(2), z_2^(2); ...
    m = S(S+1)/2 in total.
    """
    if not (1 <= S):
        raise ValueError("S must be >= 1")
    if p == math.inf:
        raise ValueError("discretized_rademacher requires p < inf")
    dim = 2 ** (S + 1) - 2
    rows = []
    blocks = []
    off = 0
    for s in range(1, S + 1):
        width = 2 ** s
        idx = np.arange(width)
        scale = 2.0 ** (-s / p)
        for k in range(1, s + 1):
            v = np.zeros(dim)
            v[off : off + width] = np.where((idx >> (s - k)) & 1 == 0, scale, -scale)
            rows.append(v)
        blocks.append((off, off + width))
        off += width
    return System("discretized_rademacher", lp_n(p, dim), np.array(rows),
                  blocks=tuple(blocks), params={"p": p, "S": S},
                  monotone=(p == 2.0))


def absolute_matrix_example(m: int) -> System:
    """m rows in linf^(2^(m+1)-2) whose span is isometric to l1^m.

    The coordinates split into blocks of widths 2, 4, ..., 2^m.  Row k is
    zero on blocks 1..k-1 and carries the k-th Rademacher sign pattern on
    every block s >= k.  Block m realizes every sign pattern of (x_1..x_m)
    in some coordinate, whence ||sum alpha_k x_k||_inf = sum |alpha_k|.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    dim = 2 ** (m + 1) - 2
    M = np.zeros((m, dim))
    off = 0
    for s in range(1, m + 1):
        width = 2 ** s
        idx = np.arange(width)
        for k in range(1, s + 1):
            M[k - 1, off : off + width] = np.where((idx >> (s - k)) & 1 == 0, 1.0, -1.0)
        off += width
    return System("absolute_matrix", lp_n(math.inf, dim), M, params={"m": m},
                  monotone=True)


def schauder_c01(level: int) -> System:
    """The tent system on [0, 1] sampled at the 2^level + 1 dyadic nodes.

    x_1 = 1, x_2(t) = t, then for j < level and 0 <= i < 2^j the tent of
    height 1 centered at (2i+1)/2^(j+1) with support [i/2^j, (i+1)/2^j].
    Piecewise-linear functions with dyadic breakpoints attain their sup on
    the node grid, so the sampled sup norm is the true one and the system
    is monotone (each tent vanishes at all previously seen nodes).
    """
    nodes = np.linspace(0.0, 1.0, 2 ** level + 1)
    rows = [np.ones_like(nodes), nodes.copy()]
    for j in range(level):
        for i in range(2 ** j):
            center = (2 * i + 1) / 2 ** (j + 1)
            rows.append(np.maximum(0.0, 1.0 - 2.0 ** (j + 1) * np.abs(nodes - center)))
    return System("schauder_c01", lp_n(math.inf, len(nodes)), np.array(rows),
                  params={"level": level}, monotone=True)


def subsequence(system: System, indices: Sequence[int]) -> System:
    """The system (x_{k_1}, ..., x_{k_r}) for distinct indices, in the given
    order.  Monotonicity and construction-family metadata survive only for
    increasing selections (reordering breaks both)."""
    idx = [int(i) for i in indices]
    if len(idx) < 1 or len(set(idx)) != len(idx):
        raise ValueError("indices must be distinct and nonempty")
    if not all(0 <= i < system.m for i in idx):
        raise ValueError("index out of range")
    increasing = all(a < b for a, b in zip(idx, idx[1:]))
    params = dict(system.params)
    params["indices"] = tuple(idx)
    if not increasing:
        params.pop("family", None)
    return System(system.name + "[sub]", system.space, system.matrix[idx],
                  blocks=system.blocks, params=params,
                  monotone=system.monotone and increasing)


# -- CSV interchange ---------------------------------------------------------
#
# Header row is the space descriptor `kind,p,dim_or_level`; every following
# row is one vector's coordinates.  repr() of floats keeps the round trip
# exact and locale independent; p = inf is written as "inf".  System name,
# params, blocks and monotonicity are not part of the format.


def _space_header(space: Space) -> str:
    return f"{space.kind},{space.p!r},{space.size_param}"


def _rows_to_csv(space: Space, rows: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(_space_header(space) + "\n")
    for row in np.atleast_2d(rows):
        buf.write(",".join(repr(float(x)) for x in row) + "\n")
    return buf.getvalue()


def _parse(text: str) -> tuple[Space, np.ndarray]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty CSV")
    kind, p_str, size_str = (tok.strip() for tok in lines[0].split(","))
    space = make_space(kind, float(p_str), int(size_str))
    rows = np.array([[float(tok) for tok in ln.split(",")] for ln in lines[1:]])
    if rows.size == 0 or rows.shape[1] != space.dim:
        raise ValueError("vector rows must match the space dimension")
    return space, rows


def system_to_csv(system: System) -> str:
    return _rows_to_csv(system.space, system.matrix)


def system_from_csv(text: str) -> System:
    space, rows = _parse(text)
    return System("csv", space, rows)


def lvec_to_csv(v: LVec) -> str:
    return _rows_to_csv(v.space, v.coords)


def lvec_from_csv(text: str) -> LVec:
    space, rows = _parse(text)
    if rows.shape[0] != 1:
        raise ValueError("expected exactly one vector row")
    return LVec(space, rows[0])


def sign_matrix_to_csv(sm: SignMatrix) -> str:
    return "\n".join(",".join(str(int(x)) for x in row) for row in sm.entries) + "\n"
