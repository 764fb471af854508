"""Minimal verification system for n-player games with k strategies each.

The potential equation is reduced by two integer transformations.  ``T``
splits it into an identity part, a small residual system ``Phi xi_n = T2 b``
and pure constraints ``T3 b = 0``; ``S`` then eliminates ``Phi`` down to a
boundary matrix.  What is left, ``[S2 T2; T3] b = 0``, is a set of exactly
``(n-1)k^n - n k^(n-1) + 1`` independent equations on the relative payoffs
``b = [V_n - V_1, ..., V_n - V_{n-1}]``.

All structured matrices are integer-valued, built by explicit Kronecker
assembly and cached per ``(n, k)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import (
    PotentialVector,
    Verdict,
    bimatrix_is_potential,
    bimatrix_potential,
    make_verdict,
    psi_block,
)
from .errors import NotPotentialError, UnsupportedShapeError
from .game import FiniteGame, reshape_pair, subgame, subgame_contexts
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    block_diag,
    boundary_matrix,
    centering_matrix,
    identity,
    kron,
    last_unit,
    ones,
    selector_matrix,
    solve_consistent,
)


def _freeze(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


def _ones_last(m):
    """``1_m (delta_m^m)^T``: copies the last coordinate everywhere."""
    return ones(m) @ last_unit(m).T


def _check_nk(n, k, min_n=2):
    if n < min_n or k < 2:
        raise UnsupportedShapeError(f"need n >= {min_n} and k >= 2, got n={n}, k={k}")


def _uniform(game: FiniteGame):
    return game.n, game.k


def b_tilde(game: FiniteGame) -> np.ndarray:
    """Stacked ``V_n - V_i`` for i = 1..n-1."""
    v = game.payoffs
    return np.concatenate([v[-1] - v[i] for i in range(game.n - 1)])


# -- transformation T ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransformBlocks:
    """Blocks of the row transformation ``T = [T1; T2; T3]``.

    ``T1_blocks`` etc. hold the unsigned ``T_{1j}``; the assembled ``T1``,
    ``T2``, ``T3`` are block-diagonal in ``-T_{ij}``.
    """

    n: int
    k: int
    T1_blocks: tuple
    T2_blocks: tuple
    T3_blocks: tuple
    T1: np.ndarray
    T2: np.ndarray
    T3: np.ndarray
    Phi_blocks: tuple
    Phi: np.ndarray
    Gamma_blocks: tuple
    Gamma: np.ndarray

    @property
    def T(self) -> np.ndarray:
        return np.vstack([self.T1, self.T2, self.T3])


@lru_cache(maxsize=64)
def build_transform(n: int, k: int) -> TransformBlocks:
    _check_nk(n, k)
    I, B, last = identity, boundary_matrix(k), last_unit(k)
    js = range(1, n)
    t1 = [kron(I(k ** (j - 1)), last.T, I(k ** (n - j))) for j in js]
    t2 = [kron(I(k ** (j - 1)), B, I(k ** (n - j - 1)), last.T) for j in js]
    t3 = [kron(I(k ** (j - 1)), B, I(k ** (n - j - 1)), B) for j in js]
    phi = [-kron(I(k ** (i - 1)), B, I(k ** (n - i - 1))) for i in js]
    gamma = [-kron(I(k ** (i - 1)), last.T, I(k ** (n - 1 - i)), ones(k)) for i in js]
    return TransformBlocks(
        n=n,
        k=k,
        T1_blocks=tuple(map(_freeze, t1)),
        T2_blocks=tuple(map(_freeze, t2)),
        T3_blocks=tuple(map(_freeze, t3)),
        T1=_freeze(block_diag([-t for t in t1])),
        T2=_freeze(block_diag([-t for t in t2])),
        T3=_freeze(block_diag([-t for t in t3])),
        Phi_blocks=tuple(map(_freeze, phi)),
        Phi=_freeze(np.vstack(phi)),
        Gamma_blocks=tuple(map(_freeze, gamma)),
        Gamma=_freeze(np.vstack(gamma)),
    )


def reordered_equation(n: int, k: int) -> np.ndarray:
    """Coefficient matrix of the equivalent system whose block row j reads
    ``-Psi_j xi_j + Psi_n xi_n = V_n - V_j`` (right-hand side ``b_tilde``)."""
    _check_nk(n, k)
    strategies = (k,) * n
    psis = [psi_block(strategies, i) for i in range(1, n + 1)]
    rows = []
    for j in range(1, n):
        blocks = [np.zeros_like(p) for p in psis]
        blocks[j - 1] = -psis[j - 1]
        blocks[n - 1] = psis[n - 1]
        rows.append(np.hstack(blocks))
    return np.vstack(rows)


# -- elimination S and its right inverse U ---------------------------------------

@dataclass(frozen=True, eq=False)
class EliminationBlocks:
    """``S = [S1; S2]`` with named sub-blocks, and the witness ``U`` with ``SU = I``.

    Dictionaries are keyed by 1-based indices: ``N[(i, j)]``, ``L[(i, j)]``,
    ``M[i]`` (standing for ``M_{i,i-1}``) and ``G[i]``.
    """

    n: int
    k: int
    N: dict
    L: dict
    M: dict
    G: dict
    S1: np.ndarray
    S2: np.ndarray
    U: np.ndarray
    S1_tilde: np.ndarray

    @property
    def S(self) -> np.ndarray:
        return np.vstack([self.S1, self.S2])


def _n_block(n, k, i, j):
    m = k ** (n - j - 1)
    return selector_matrix(k ** (n - i)) @ kron(identity(k ** (j - i)), selector_matrix(k).T, _ones_last(m))


@lru_cache(maxsize=64)
def build_elimination(n: int, k: int) -> EliminationBlocks:
    if n < 3:
        raise UnsupportedShapeError(f"elimination blocks need n >= 3 (use the bi-matrix path), got n={n}")
    _check_nk(n, k, min_n=3)
    B = boundary_matrix(k)
    width = (k - 1) * k ** (n - 2)

    N = {(i, j): _freeze(_n_block(n, k, i, j)) for i in range(1, n) for j in range(i, n)}
    L = {(i, j): _freeze(-kron(identity(k ** (i - 2)), B, N[(i, j)])) for i in range(2, n) for j in range(i, n)}
    M = {i: _freeze(kron(identity(k ** (i - 2) * (k - 1)), boundary_matrix(k ** (n - i)))) for i in range(2, n)}
    G = {i: _freeze(kron(identity(k ** (i - 1) * (k - 1)), selector_matrix(k ** (n - i - 1)).T)) for i in range(1, n - 1)}

    S1 = np.hstack([N[(1, j)] for j in range(1, n)])
    s2_rows = []
    for i in range(2, n):
        height = M[i].shape[0]
        row = []
        for col in range(1, n):
            if col == i - 1:
                row.append(M[i])
            elif col >= i:
                row.append(L[(i, col)])
            else:
                row.append(np.zeros((height, width), dtype=np.int64))
        s2_rows.append(np.hstack(row))
    S2 = np.vstack(s2_rows)

    phi = build_transform(n, k).Phi_blocks
    DT = selector_matrix(k ** (n - 1)).T
    u_rows = []
    for i in range(1, n):
        row = [-phi[i - 1] @ DT]
        for col in range(1, n - 1):
            g = G[col]
            row.append(g if col == i else np.zeros((width, g.shape[1]), dtype=np.int64))
        u_rows.append(np.hstack(row))
    U = np.vstack(u_rows)

    S1_tilde = np.hstack(
        [kron(identity(k ** (j - 1)), selector_matrix(k).T, _ones_last(k ** (n - j - 1))) for j in range(1, n)]
    )
    return EliminationBlocks(n, k, N, L, M, G, _freeze(S1), _freeze(S2), _freeze(U), _freeze(S1_tilde))


# -- the minimal system ---------------------------------------------------------

class EquationCounts(NamedTuple):
    minimal: int
    pairwise: int


def minimal_equation_count(n: int, k: int) -> EquationCounts:
    """Size of the minimal system, and of the classic pairwise 2x2 checks."""
    _check_nk(n, k)
    minimal = (n - 1) * k**n - n * k ** (n - 1) + 1
    pairwise = n * (n - 1) * k ** (n - 2) * (k - 1) ** 2 // 2
    return EquationCounts(minimal, pairwise)


@lru_cache(maxsize=64)
def minimal_check_matrix(n: int, k: int) -> np.ndarray:
    """Integer coefficient matrix of the minimal verification system.

    Rows: the ``S2 T2`` block first, then the ``T3`` blocks for j = 1..n-1.
    The matrix is the negation of the literal block product (``T2`` and
    ``T3`` carry ``-T_{ij}`` blocks) so that it matches the published
    3-player example row for row; the equation set is the same.  For n = 2
    this is ``B_k ⊗ B_k``.
    """
    _check_nk(n, k)
    if n == 2:
        B = boundary_matrix(k)
        return _freeze(kron(B, B))
    t = build_transform(n, k)
    e = build_elimination(n, k)
    return _freeze(-np.vstack([e.S2 @ t.T2, t.T3]))


def is_potential_minimal(game: FiniteGame, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    if game.n == 2:
        v = bimatrix_is_potential(game, tol)
        return make_verdict("minimal", v.residuals, v.threshold)
    n, k = _uniform(game)
    residuals = minimal_check_matrix(n, k) @ b_tilde(game)
    return make_verdict("minimal", residuals, tol.threshold_for(game.payoffs))


def recover_xi_n(game: FiniteGame, c: float = 0.0) -> np.ndarray:
    """A solution of ``Phi xi_n = T2 b`` for a potential game.

    ``S Phi`` has first block ``-B_{k^(n-1)}`` and zeros below, so the
    reduced equation is solved by ``-S1_tilde T2 b`` plus any constant.
    """
    n, k = _uniform(game)
    t = build_transform(n, k)
    e = build_elimination(n, k)
    return -(e.S1_tilde @ (t.T2 @ b_tilde(game))) + c


def is_potential_reduced(game: FiniteGame, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Intermediate criterion: ``T3 b = 0`` and ``Phi xi_n = T2 b`` solvable."""
    n, k = _uniform(game)
    _check_nk(n, k)
    t = build_transform(n, k)
    b = b_tilde(game)
    threshold = tol.threshold_for(game.payoffs)
    t3 = t.T3 @ b
    xi = solve_consistent(t.Phi, t.T2 @ b, tol)
    if xi is None:
        x, *_ = np.linalg.lstsq(t.Phi, t.T2 @ b, rcond=None)
        gap = t.Phi @ x - t.T2 @ b
        residuals = np.concatenate([t3, gap])
        return Verdict("reduced", False, float(np.max(np.abs(residuals))), threshold, residuals.size,
                       residuals=residuals)
    residuals = np.concatenate([t3, t.Phi @ xi - t.T2 @ b])
    return make_verdict("reduced", residuals, threshold, solution=xi)


def potential_closed_form(game: FiniteGame, c: float = 0.0, tol: Tolerance = DEFAULT_TOL) -> PotentialVector:
    """Potential read off the payoffs directly, no linear solve.

    Two players go through the bi-matrix formula.
    """
    verdict = is_potential_minimal(game, tol)
    if not verdict.holds:
        raise NotPotentialError("minimal verification system is violated", verdict)
    if game.n == 2:
        pv = bimatrix_potential(game, lam=c, tol=tol)
        return PotentialVector(pv.entries, pv.strategies, c, route="closed-form")
    n, k = _uniform(game)
    v = game.payoffs
    I = identity
    DtB = selector_matrix(k).T @ boundary_matrix(k)
    vp = v[0] + kron(_ones_last(k), I(k ** (n - 1))) @ (v[-1] - v[0])
    for j in range(2, n):
        op = kron(_ones_last(k), I(k ** (j - 2)), DtB, _ones_last(k ** (n - j)))
        vp = vp - op @ (v[-1] - v[j - 1])
    return PotentialVector(vp + c, game.strategies, c, route="closed-form")


# -- pairwise criteria ----------------------------------------------------------

def check_pairwise_t21(game: FiniteGame, tol: Tolerance = DEFAULT_TOL, variant: str = "iii") -> Verdict:
    """Pairwise Kronecker conditions on relative payoffs.

    ``variant="ii"``: ``(I ⊗ B ⊗ I ⊗ B)(V_n - V_i) = 0`` for i < n plus the
    mixed conditions with a trailing last-coordinate selector for
    i < j < n.  ``variant="iii"``: ``(I ⊗ B ⊗ I ⊗ B ⊗ I)(V_j - V_i) = 0``
    for every pair i < j.
    """
    n, k = _uniform(game)
    _check_nk(n, k)
    I, B, v = identity, boundary_matrix(k), game.payoffs
    parts = []
    if variant == "ii":
        for i in range(1, n):
            parts.append(kron(I(k ** (i - 1)), B, I(k ** (n - i - 1)), B) @ (v[n - 1] - v[i - 1]))
        for i in range(1, n):
            for j in range(i + 1, n):
                op = kron(I(k ** (i - 1)), B, I(k ** (j - i - 1)), B, I(k ** (n - j - 1)), last_unit(k).T)
                parts.append(op @ (v[j - 1] - v[i - 1]))
    elif variant == "iii":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                op = kron(I(k ** (i - 1)), B, I(k ** (j - i - 1)), B, I(k ** (n - j)))
                parts.append(op @ (v[j - 1] - v[i - 1]))
    else:
        raise ValueError(f"variant must be 'ii' or 'iii', got {variant!r}")
    return make_verdict(f"t21-{variant}", np.concatenate(parts), tol.threshold_for(game.payoffs))


def check_pairwise_reshaped(game: FiniteGame, tol: Tolerance = DEFAULT_TOL, use_centering: bool = False) -> Verdict:
    """``(B ⊗ B)`` (or ``(H ⊗ H)``) applied to each pair-reshaped relative payoff.

    Column ``c`` of the reshaped matrix for pair (i, j) is the row-vectorized
    relative payoff of the sub-game with the other players fixed at the
    c-th profile, so failing columns are reported as sub-games.
    """
    n, k = _uniform(game)
    _check_nk(n, k)
    if use_centering:
        op = kron(centering_matrix(k), centering_matrix(k))
    else:
        op = kron(boundary_matrix(k), boundary_matrix(k))
    threshold = tol.threshold_for(game.payoffs)
    parts, failures = [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            res = op @ reshape_pair(game.payoffs[j - 1] - game.payoffs[i - 1], n, k, i, j)
            parts.append(res.reshape(-1))
            bad = np.max(np.abs(res), axis=0) > threshold
            for rest, is_bad in zip(subgame_contexts(game, i, j), bad):
                if is_bad:
                    failures.append((i, j, rest))
    name = "reshaped-H" if use_centering else "reshaped-B"
    return make_verdict(name, np.concatenate(parts), threshold, failures=tuple(failures))


def check_all_subgames(game: FiniteGame, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Every bi-matrix sub-game must itself be potential.

    ``failures`` lists ``(i, j, rest)`` for each failing sub-game in a fixed
    enumeration order.
    """
    threshold = tol.threshold_for(game.payoffs)
    parts, failures = [], []
    for i in range(1, game.n + 1):
        for j in range(i + 1, game.n + 1):
            for rest in subgame_contexts(game, i, j):
                v = bimatrix_is_potential(subgame(game, i, j, rest), tol)
                parts.append(v.residuals)
                if v.max_residual > threshold:
                    failures.append((i, j, rest))
    residuals = np.concatenate(parts) if parts else np.zeros(0)
    return make_verdict("subgames", residuals, threshold, failures=tuple(failures))


# -- structural identities --------------------------------------------------------

def verify_structure_identities(n: int, k: int) -> dict:
    """Exact integer checks of the identities the reduction relies on.

    Returns a mapping from identity name to ``True``/``False``.
    """
    if n < 3:
        raise UnsupportedShapeError(f"structure identities need n >= 3, got n={n}")
    t = build_transform(n, k)
    e = build_elimination(n, k)
    strategies = (k,) * n
    psi = [psi_block(strategies, i) for i in range(1, n + 1)]
    rows_S = (n - 1) * (k - 1) * k ** (n - 2)
    eq = np.array_equal
    report = {}

    report["S square"] = e.S.shape == (rows_S, rows_S)
    report["T1j Psi_j = I"] = all(eq(t.T1_blocks[j] @ psi[j], np.eye(k ** (n - 1), dtype=int)) for j in range(n - 1))
    report["T2j Psi_j = 0"] = all(not (t.T2_blocks[j] @ psi[j]).any() for j in range(n - 1))
    report["T3j Psi_j = 0"] = all(not (t.T3_blocks[j] @ psi[j]).any() for j in range(n - 1))
    report["T3j Psi_n = 0"] = all(not (t.T3_blocks[j] @ psi[-1]).any() for j in range(n - 1))

    B_big = boundary_matrix(k ** (n - 1))
    report["-sum N1j Phi_j = B"] = eq(-sum(e.N[(1, j)] @ t.Phi_blocks[j - 1] for j in range(1, n)), B_big)
    report["M Phi + sum L Phi = 0"] = all(
        not (e.M[i] @ t.Phi_blocks[i - 2] + sum(e.L[(i, j)] @ t.Phi_blocks[j - 1] for j in range(i, n))).any()
        for i in range(2, n)
    )
    report["SU = I"] = eq(e.S @ e.U, np.eye(rows_S, dtype=int))
    report["M G = I"] = all(eq(e.M[i] @ e.G[i - 1], np.eye(e.M[i].shape[0], dtype=int)) for i in range(2, n))
    report["L G = 0"] = all(not (e.L[(i, j)] @ e.G[j]).any() for i in range(2, n) for j in range(i, n - 1))

    s_phi = e.S @ t.Phi
    head = e.S1.shape[0]
    report["S Phi = [-B; 0]"] = eq(s_phi[:head], -B_big) and not s_phi[head:].any()

    reduced = t.T @ reordered_equation(n, k)
    w = k ** (n - 1)
    top = (n - 1) * w
    mid = top + t.Phi.shape[0]
    report["T Psi' block form"] = (
        eq(reduced[:top, :top], np.eye(top, dtype=int))
        and eq(reduced[:top, top:], t.Gamma)
        and not reduced[top:, :top].any()
        and eq(reduced[top:mid, top:], t.Phi)
        and not reduced[mid:].any()
    )
    return report
