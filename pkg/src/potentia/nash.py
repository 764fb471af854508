"""Pure-strategy Nash equilibria."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PotentialVector, validate_potential
from .errors import NotPotentialError
from .game import FiniteGame, index_to_profile, payoff, profiles
from .linalg import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class EquilibriumSet:
    """Sorted 1-based profiles.  ``global_max`` is the subset maximizing the
    potential (empty for the brute-force method)."""

    profiles: tuple
    method: str
    global_max: tuple = ()

    def __len__(self):
        return len(self.profiles)

    def __contains__(self, profile):
        return tuple(profile) in self.profiles


def pure_nash_brute(game: FiniteGame, tol: Tolerance = DEFAULT_TOL) -> EquilibriumSet:
    """Profiles where no player gains more than the threshold by deviating alone."""
    threshold = tol.threshold_for(game.payoffs)
    found = []
    for prof in profiles(game.strategies):
        stable = True
        for player in range(1, game.n + 1):
            current = payoff(game, player, prof)
            for alt in range(1, game.strategies[player - 1] + 1):
                dev = prof[: player - 1] + (alt,) + prof[player:]
                if payoff(game, player, dev) > current + threshold:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(prof)
    return EquilibriumSet(tuple(sorted(found)), "brute-force")


def nash_from_potential(game: FiniteGame, pv: PotentialVector, tol: Tolerance = DEFAULT_TOL) -> EquilibriumSet:
    """Unilateral local maxima of the potential.

    In a potential game these are exactly the pure equilibria.  Global
    maximizers are reported separately in ``global_max``.
    """
    check = validate_potential(game, pv, tol)
    if not check.holds:
        raise NotPotentialError("vector is not a potential of this game", check)
    threshold = tol.threshold_for(game.payoffs)
    p = pv.tensor
    local = np.ones(p.shape, dtype=bool)
    for axis in range(game.n):
        local &= p >= p.max(axis=axis, keepdims=True) - threshold
    best = p >= p.max() - threshold
    flat_local = np.flatnonzero(local.reshape(-1))
    flat_best = np.flatnonzero(best.reshape(-1))
    return EquilibriumSet(
        tuple(index_to_profile(game, int(i)) for i in flat_local),
        "potential-argmax",
        tuple(index_to_profile(game, int(i)) for i in flat_best),
    )
