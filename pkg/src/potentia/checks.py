"""Run any subset of the potential-game criteria on one game and compare them."""
from __future__ import annotations

from dataclasses import dataclass

from . import core, minimal
from .errors import UnsupportedShapeError
from .game import FiniteGame
from .linalg import DEFAULT_TOL, Tolerance

DESCRIPTIONS = {
    "equation": "potential equation Psi xi = b is solvable",
    "boundary": "B R B^T = 0 on the relative payoff matrix",
    "corner": "2x2 alternating sums against the last row and column",
    "adjacent": "adjacent 2x2 alternating sums",
    "four-cycle": "every closed path of length 4",
    "centering": "H R H = 0 (doubly centered relative payoffs vanish)",
    "average": "relative payoff = row average + column average - grand average",
    "minimal": "minimal verification system [S2 T2; T3] b = 0",
    "reduced": "T3 b = 0 and Phi xi_n = T2 b solvable",
    "t21": "pairwise Kronecker conditions (both variants)",
    "reshaped": "(B⊗B) and (H⊗H) on pair-reshaped relative payoffs",
    "subgames": "every bi-matrix sub-game is potential",
}

METHODS = tuple(DESCRIPTIONS)
BIMATRIX_ONLY = {"boundary", "corner", "adjacent", "four-cycle", "centering", "average"}


def why_not_applicable(game: FiniteGame, method: str):
    """Reason string if ``method`` cannot run on ``game``, else ``None``."""
    if method not in DESCRIPTIONS:
        return f"unknown method {method!r}"
    uniform = game.is_uniform and game.strategies[0] >= 2
    if method in BIMATRIX_ONLY and game.n != 2:
        return f"{method} is a bi-matrix criterion; game has {game.n} players"
    if method == "equation" and game.n > 2 and not game.is_uniform:
        return "potential equation needs equal strategy counts for more than 2 players"
    if method == "minimal" and game.n > 2 and not uniform:
        return "minimal system needs equal strategy counts (k >= 2)"
    if method == "reduced" and (game.n < 3 or not uniform):
        return "reduced system needs at least 3 players with equal strategy counts"
    if method in ("t21", "reshaped") and not uniform:
        return f"{method} needs equal strategy counts (k >= 2)"
    return None


def applicable_methods(game: FiniteGame):
    return [m for m in METHODS if why_not_applicable(game, m) is None]


def run_method(game: FiniteGame, method: str, tol: Tolerance = DEFAULT_TOL):
    """Verdicts of one method (some methods come in two variants)."""
    reason = why_not_applicable(game, method)
    if reason:
        raise UnsupportedShapeError(reason)
    if method in BIMATRIX_ONLY:
        bm = game.as_bimatrix()
        if method == "boundary":
            return [core.bimatrix_is_potential(bm, tol)]
        # Relative-payoff criteria share the game-level threshold.
        check = {
            "corner": core.check_corner,
            "adjacent": core.check_adjacent,
            "four-cycle": core.check_four_cycle,
            "centering": core.check_centering,
            "average": core.check_average,
        }[method]
        return [check(bm.R, Tolerance(tol.threshold_for(game.payoffs), 0.0))]
    if method == "equation":
        return [core.is_potential_by_equation(game, tol)]
    if method == "minimal":
        return [minimal.is_potential_minimal(game, tol)]
    if method == "reduced":
        return [minimal.is_potential_reduced(game, tol)]
    if method == "t21":
        return [minimal.check_pairwise_t21(game, tol, "ii"), minimal.check_pairwise_t21(game, tol, "iii")]
    if method == "reshaped":
        return [
            minimal.check_pairwise_reshaped(game, tol, use_centering=False),
            minimal.check_pairwise_reshaped(game, tol, use_centering=True),
        ]
    return [minimal.check_all_subgames(game, tol)]


@dataclass(frozen=True)
class CheckReport:
    strategies: tuple
    verdicts: tuple

    @property
    def agree(self) -> bool:
        return len({v.holds for v in self.verdicts}) <= 1

    @property
    def potential(self):
        """Common verdict, or ``None`` when the criteria disagree."""
        if not self.verdicts or not self.agree:
            return None
        return self.verdicts[0].holds

    def to_dict(self) -> dict:
        return {
            "strategies": list(self.strategies),
            "potential": self.potential,
            "agree": self.agree,
            "verdicts": [
                {
                    "method": v.method,
                    "potential": v.holds,
                    "max_residual": v.max_residual,
                    "threshold": v.threshold,
                    "equations": v.n_equations,
                    **({"residuals": [float(r) for r in v.residuals]} if v.method == "minimal" else {}),
                    **({"failures": [[i, j, list(rest)] for i, j, rest in v.failures]} if v.failures else {}),
                }
                for v in self.verdicts
            ],
        }


def run_checks(game: FiniteGame, methods=None, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Run ``methods`` (default: every applicable one) and collect verdicts."""
    if methods is None:
        methods = applicable_methods(game)
    verdicts = []
    for m in methods:
        verdicts.extend(run_method(game, m, tol))
    return CheckReport(game.strategies, tuple(verdicts))
