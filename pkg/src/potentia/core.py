"""The full potential equation and the two-player criteria.

Multi-player games are checked by solving ``Psi xi = b`` directly.  For
bi-matrix games every criterion reduces to a statement about the relative
payoff matrix ``R = C2 - C1``: a game is potential exactly when every
alternating 2x2 sum of ``R`` vanishes, i.e. when ``R`` is additively
separable into a row part plus a column part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotPotentialError, UnsupportedShapeError
from .game import BiMatrixGame, FiniteGame
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    boundary_matrix,
    centering_matrix,
    identity,
    kron,
    ones,
    solve_consistent,
    vec_rows,
)


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of one criterion on one game.

    ``max_residual`` is the largest absolute left-hand side over the
    ``n_equations`` equalities tested; ``holds`` compares it to ``threshold``.
    """

    method: str
    holds: bool
    max_residual: float
    threshold: float
    n_equations: int
    residuals: np.ndarray | None = None
    solution: np.ndarray | None = None
    failures: tuple = ()

    def __bool__(self):
        return self.holds


def make_verdict(method, residuals, threshold, n_equations=None, **extra) -> Verdict:
    residuals = np.asarray(residuals, dtype=float).reshape(-1)
    worst = float(np.max(np.abs(residuals))) if residuals.size else 0.0
    return Verdict(
        method=method,
        holds=worst <= threshold,
        max_residual=worst,
        threshold=threshold,
        n_equations=residuals.size if n_equations is None else n_equations,
        residuals=residuals,
        **extra,
    )


@dataclass(frozen=True, eq=False)
class PotentialVector:
    """Potential values over all profiles in lexicographic order."""

    entries: np.ndarray
    strategies: tuple
    constant_offset: float = 0.0
    route: str = ""

    def __post_init__(self):
        e = np.array(self.entries, dtype=float).reshape(-1)
        if e.size != math.prod(self.strategies):
            raise DimensionError(f"potential has {e.size} entries for strategies {self.strategies}")
        if not np.all(np.isfinite(e)):
            raise DimensionError("potential entries must be finite")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "strategies", tuple(self.strategies))

    @property
    def tensor(self) -> np.ndarray:
        return self.entries.reshape(self.strategies)

    @property
    def matrix(self) -> np.ndarray:
        """The k1 x k2 matrix form; only meaningful for two players."""
        if len(self.strategies) != 2:
            raise UnsupportedShapeError("matrix form exists for two players only")
        return self.entries.reshape(self.strategies)

    def shifted(self, c: float) -> "PotentialVector":
        return PotentialVector(self.entries + c, self.strategies, self.constant_offset + c, self.route)


@dataclass(frozen=True, eq=False)
class PotentialEquationSystem:
    Psi: np.ndarray
    b: np.ndarray
    xi_blocks: tuple


def _as_bimatrix(g) -> BiMatrixGame:
    if isinstance(g, BiMatrixGame):
        return g
    if isinstance(g, FiniteGame):
        return g.as_bimatrix()
    raise TypeError(f"expected a bi-matrix game, got {type(g).__name__}")


def _boundary(k):
    # A single-strategy player imposes no equations.
    return np.zeros((0, 1), dtype=np.int64) if k == 1 else boundary_matrix(k)


def _require_equation_shape(game: FiniteGame):
    if game.n > 2 and not game.is_uniform:
        raise UnsupportedShapeError(
            f"multi-player criteria need equal strategy counts, got {list(game.strategies)}"
        )


# -- the potential equation ---------------------------------------------------

def psi_block(strategies, i: int) -> np.ndarray:
    """``I ⊗ 1_{k_i} ⊗ I``: copies a function of the other players' choices
    onto every profile (player ``i`` is 1-based)."""
    before = math.prod(strategies[: i - 1])
    after = math.prod(strategies[i:])
    return kron(identity(before), ones(strategies[i - 1]), identity(after))


def build_potential_equation(game: FiniteGame) -> PotentialEquationSystem:
    _require_equation_shape(game)
    n, size = game.n, game.size
    blocks = [psi_block(game.strategies, i) for i in range(1, n + 1)]
    widths = tuple(b.shape[1] for b in blocks)
    psi = np.zeros(((n - 1) * size, sum(widths)), dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(widths)])
    for mu in range(1, n):
        rows = slice((mu - 1) * size, mu * size)
        psi[rows, offsets[0] : offsets[1]] = -blocks[0]
        psi[rows, offsets[mu] : offsets[mu + 1]] = blocks[mu]
    b = np.concatenate([game.payoffs[mu] - game.payoffs[0] for mu in range(1, n)])
    psi.setflags(write=False)
    return PotentialEquationSystem(psi, b, widths)


def is_potential_by_equation(game: FiniteGame, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Solvability of ``Psi xi = b``; ``solution`` holds a minimum-norm xi."""
    system = build_potential_equation(game)
    xi = solve_consistent(system.Psi, system.b, tol)
    threshold = tol.threshold_for(game.payoffs)
    if xi is None:
        x, *_ = np.linalg.lstsq(system.Psi, system.b, rcond=None)
        residual = system.Psi @ x - system.b
        return Verdict("equation", False, float(np.max(np.abs(residual))), threshold, len(system.b),
                       residuals=residual)
    residual = system.Psi @ xi - system.b
    return Verdict("equation", True, float(np.max(np.abs(residual))), threshold, len(system.b),
                   residuals=residual, solution=xi)


def potential_from_xi(game: FiniteGame, xi1) -> PotentialVector:
    """``V^p = V_1 - (1_{k_1} ⊗ I) xi_1``."""
    xi1 = np.asarray(xi1, dtype=float).reshape(-1)
    rest = math.prod(game.strategies[1:])
    if xi1.size != rest:
        raise DimensionError(f"xi_1 must have length {rest}, got {xi1.size}")
    spread = kron(ones(game.strategies[0]), identity(rest))
    return PotentialVector(game.payoffs[0] - spread @ xi1, game.strategies, route="equation")


def potential_by_equation(game: FiniteGame, c: float = 0.0, tol: Tolerance = DEFAULT_TOL) -> PotentialVector:
    verdict = is_potential_by_equation(game, tol)
    if not verdict.holds:
        raise NotPotentialError("potential equation has no solution", verdict)
    rest = math.prod(game.strategies[1:])
    return potential_from_xi(game, verdict.solution[:rest]).shifted(c)


def validate_potential(game: FiniteGame, pv: PotentialVector, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Brute-force check of the deviation identities.

    For every player i, every pair of own strategies x, y and every
    opponent profile: c_i(x, s) - c_i(y, s) == p(x, s) - p(y, s).
    """
    if tuple(pv.strategies) != game.strategies:
        raise DimensionError(f"potential shape {pv.strategies} does not match game {game.strategies}")
    p = pv.tensor
    worst, count = 0.0, 0
    for i in range(1, game.n + 1):
        gap = np.moveaxis(game.tensor(i) - p, i - 1, 0)
        k = gap.shape[0]
        for x in range(k):
            for y in range(x + 1, k):
                worst = max(worst, float(np.max(np.abs(gap[x] - gap[y]))))
                count += gap[x].size
    threshold = tol.threshold_for(game.payoffs, pv.entries)
    return Verdict("definition", worst <= threshold, worst, threshold, count)


# -- bi-matrix criteria -------------------------------------------------------

def bimatrix_is_potential(g, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """``B_{k1} R B_{k2}^T = 0``."""
    g = _as_bimatrix(g)
    R = g.R
    k1, k2 = R.shape
    res = _boundary(k1) @ R @ _boundary(k2).T
    return make_verdict("boundary", res, tol.threshold_for(g.C1, g.C2))


def bimatrix_potential(g, lam: float = 0.0, tol: Tolerance = DEFAULT_TOL) -> PotentialVector:
    """``P = C1 + [0, 1_{k1}] R + lam 1 1^T``: the last row of R added to every row."""
    g = _as_bimatrix(g)
    verdict = bimatrix_is_potential(g, tol)
    if not verdict.holds:
        raise NotPotentialError("bi-matrix game is not potential", verdict)
    k1, k2 = g.shape
    pick_last = np.zeros((k1, k1))
    pick_last[:, -1] = 1.0
    P = g.C1 + pick_last @ g.R + lam * np.ones((k1, k2))
    return PotentialVector(vec_rows(P), (k1, k2), constant_offset=lam, route="bimatrix")


def check_corner(R, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """r_ij - r_{i,k2} - r_{k1,j} + r_{k1,k2} = 0 for i < k1, j < k2."""
    R = np.atleast_2d(np.asarray(R, dtype=float))
    k1, k2 = R.shape
    res = [R[i, j] - R[i, -1] - R[-1, j] + R[-1, -1] for i in range(k1 - 1) for j in range(k2 - 1)]
    return make_verdict("corner", res, tol.threshold_for(R))


def check_adjacent(R, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Adjacent 2x2 alternating sums vanish."""
    R = np.atleast_2d(np.asarray(R, dtype=float))
    k1, k2 = R.shape
    res = [R[i, j] - R[i + 1, j] - R[i, j + 1] + R[i + 1, j + 1] for i in range(k1 - 1) for j in range(k2 - 1)]
    return make_verdict("adjacent", res, tol.threshold_for(R))


def check_four_cycle(R, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Every 4-cycle (i, j) -> (i', j) -> (i', j') -> (i, j') sums to zero.

    Each cycle is visited once (i < i', j < j'); the remaining orderings
    only flip signs.
    """
    R = np.atleast_2d(np.asarray(R, dtype=float))
    k1, k2 = R.shape
    res = [
        R[i, j] - R[a, j] - R[i, b] + R[a, b]
        for i in range(k1)
        for a in range(i + 1, k1)
        for j in range(k2)
        for b in range(j + 1, k2)
    ]
    return make_verdict("four-cycle", res, tol.threshold_for(R))


def check_centering(R, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """``H_{k1} R H_{k2} = 0``."""
    R = np.atleast_2d(np.asarray(R, dtype=float))
    k1, k2 = R.shape
    res = centering_matrix(k1) @ R @ centering_matrix(k2)
    return make_verdict("centering", res, tol.threshold_for(R))


@dataclass(frozen=True, eq=False)
class AverageDecomposition:
    row_means: np.ndarray
    col_means: np.ndarray
    grand_mean: float
    residual: np.ndarray


def average_decomposition(R) -> AverageDecomposition:
    """Split R into row averages + column averages - grand average + residual."""
    R = np.atleast_2d(np.asarray(R, dtype=float))
    rows = R.mean(axis=1)
    cols = R.mean(axis=0)
    grand = float(R.mean())
    residual = R - rows[:, None] - cols[None, :] + grand
    return AverageDecomposition(rows, cols, grand, residual)


def check_average(R, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    R = np.atleast_2d(np.asarray(R, dtype=float))
    return make_verdict("average", average_decomposition(R).residual, tol.threshold_for(R))


def potential_projector(k1: int, k2: int) -> np.ndarray:
    """Orthogonal projector onto the potential subspace: ``I - H_{k1} ⊗ H_{k2}``."""
    return np.eye(k1 * k2) - kron(centering_matrix(k1), centering_matrix(k2))


def kernel_projector(B) -> np.ndarray:
    """Orthogonal projector onto ``{v : B v = 0}`` for full-row-rank ``B``."""
    B = np.atleast_2d(np.asarray(B, dtype=float))
    return np.eye(B.shape[1]) - B.T @ np.linalg.solve(B @ B.T, B)


def project_to_potential(g):
    """Closest potential game keeping player 1's payoffs.

    Returns the projected game and the Frobenius distance between the old
    and new relative payoff matrices.
    """
    g = _as_bimatrix(g)
    R = g.R
    k1, k2 = R.shape
    removed = centering_matrix(k1) @ R @ centering_matrix(k2)
    projected = R - removed
    return BiMatrixGame(g.C1, g.C1 + projected), float(np.linalg.norm(removed))
