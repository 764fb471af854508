"""Dense linear-algebra building blocks.

Structured builders (identity, ones, unit selectors, boundary, selector)
return integer arrays so identities between them can be asserted exactly.
Everything else works in float64.  Arrays handed out by builders are
marked read-only; operations always return fresh arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import CapacityError, DimensionError

#: Hard cap on the number of entries of any dense matrix we build.
MAX_ENTRIES = 4_000_000


@dataclass(frozen=True)
class Tolerance:
    """Zero test ``|x| <= abs_eps + rel_scale * scale``.

    ``scale`` is the largest absolute entry of whatever input the check
    was computed from (usually the payoffs).
    """

    abs_eps: float = 1e-9
    rel_scale: float = 1e-12

    def __post_init__(self):
        if not (self.abs_eps >= 0 and self.rel_scale >= 0):
            raise ValueError("tolerance components must be nonnegative")

    def threshold(self, scale: float = 0.0) -> float:
        return self.abs_eps + self.rel_scale * abs(float(scale))

    def threshold_for(self, *arrays) -> float:
        scale = max((float(np.max(np.abs(a))) for a in arrays if np.size(a)), default=0.0)
        return self.threshold(scale)


DEFAULT_TOL = Tolerance()


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def check_capacity(rows: int, cols: int) -> None:
    if rows * cols > MAX_ENTRIES:
        raise CapacityError(
            f"{rows}x{cols} matrix has {rows * cols} entries, cap is {MAX_ENTRIES}"
        )


def identity(m: int) -> np.ndarray:
    check_capacity(m, m)
    return _frozen(np.eye(m, dtype=np.int64))


def ones(m: int) -> np.ndarray:
    """Column vector of ones, shape (m, 1)."""
    return _frozen(np.ones((m, 1), dtype=np.int64))


def unit(i: int, m: int) -> np.ndarray:
    """Logical column vector: the i-th column of I_m (1-based)."""
    if not 1 <= i <= m:
        raise DimensionError(f"unit index {i} outside 1..{m}")
    e = np.zeros((m, 1), dtype=np.int64)
    e[i - 1, 0] = 1
    return _frozen(e)


def last_unit(m: int) -> np.ndarray:
    return unit(m, m)


def boundary_matrix(k: int) -> np.ndarray:
    """``[I_{k-1}, -1_{k-1}]``, shape (k-1, k); its kernel is span(1_k)."""
    if k < 2:
        raise DimensionError(f"boundary matrix needs k >= 2, got {k}")
    check_capacity(k - 1, k)
    b = np.zeros((k - 1, k), dtype=np.int64)
    b[:, : k - 1] = np.eye(k - 1, dtype=np.int64)
    b[:, k - 1] = -1
    return _frozen(b)


def selector_matrix(k: int) -> np.ndarray:
    """``[I_{k-1}, 0]``, shape (k-1, k)."""
    if k < 2:
        raise DimensionError(f"selector matrix needs k >= 2, got {k}")
    check_capacity(k - 1, k)
    d = np.zeros((k - 1, k), dtype=np.int64)
    d[:, : k - 1] = np.eye(k - 1, dtype=np.int64)
    return _frozen(d)


def centering_matrix(k: int) -> np.ndarray:
    """``I_k - (1/k) 1 1^T``: the orthogonal projector removing the mean."""
    if k < 1:
        raise DimensionError(f"centering matrix needs k >= 1, got {k}")
    check_capacity(k, k)
    return _frozen(np.eye(k) - np.full((k, k), 1.0 / k))


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not factors:
        raise DimensionError("kron needs at least one factor")
    mats = [np.atleast_2d(np.asarray(f)) for f in factors]
    rows = int(np.prod([m.shape[0] for m in mats]))
    cols = int(np.prod([m.shape[1] for m in mats]))
    check_capacity(rows, cols)
    return reduce(np.kron, mats)


def block_diag(blocks) -> np.ndarray:
    blocks = [np.atleast_2d(b) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    check_capacity(rows, cols)
    dtype = np.result_type(*blocks)
    out = np.zeros((rows, cols), dtype=dtype)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def vec_rows(x) -> np.ndarray:
    """Row-major vectorization V_r(X) as a flat vector."""
    return np.array(x).reshape(-1)


def unvec_rows(v, shape) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    if v.size != shape[0] * shape[1]:
        raise DimensionError(f"cannot reshape {v.size} entries into {shape}")
    return v.reshape(shape).copy()


def numerical_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank from the singular values.

    A singular value counts as zero below the larger of the standard
    ``max(m, n) * eps * sigma_max`` cut and the tolerance threshold.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    cut = max(max(a.shape) * np.finfo(float).eps * s[0], tol.threshold_for(a))
    return int(np.count_nonzero(s > cut))


def nullity(a, tol: Tolerance = DEFAULT_TOL) -> int:
    a = np.atleast_2d(np.asarray(a))
    return a.shape[1] - numerical_rank(a, tol)


def solve_consistent(a, b, tol: Tolerance = DEFAULT_TOL):
    """Minimum-norm solution of ``a x = b``, or ``None`` if inconsistent.

    Consistency is decided by comparing the numerical ranks of ``a`` and
    the augmented matrix ``[a | b]`` at the same tolerance.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.shape[0] != b.size:
        raise DimensionError(f"system has {a.shape[0]} rows but rhs has {b.size} entries")
    # One shared threshold so the two ranks are comparable.
    shared = Tolerance(tol.threshold_for(a, b), 0.0)
    if numerical_rank(np.column_stack([a, b]), shared) > numerical_rank(a, shared):
        return None
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return x
