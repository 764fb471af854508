"""Random games for testing and experiments.

Potential games are built as ``c_i = p + d_i`` where ``d_i`` ignores
player i's own choice, so the deviation identities hold by construction.
"""
from __future__ import annotations

import math

import numpy as np

from .game import FiniteGame


def _draw(rng, shape, integer, scale):
    if integer:
        return rng.integers(-scale, scale + 1, size=shape).astype(float)
    return rng.uniform(-scale, scale, size=shape)


def random_potential_game(rng, strategies, integer=True, scale=10):
    """Return ``(game, potential_entries)``."""
    strategies = tuple(strategies)
    p = _draw(rng, strategies, integer, scale)
    rows = []
    for i in range(len(strategies)):
        free = list(strategies)
        free[i] = 1
        d = np.broadcast_to(_draw(rng, free, integer, scale), strategies)
        rows.append((p + d).reshape(-1))
    return FiniteGame(strategies, np.vstack(rows)), p.reshape(-1)


def random_game(rng, strategies, integer=True, scale=10):
    strategies = tuple(strategies)
    return FiniteGame(strategies, _draw(rng, (len(strategies), math.prod(strategies)), integer, scale))


def perturb(rng, game, amount=None):
    """Shift one random payoff entry by a nonzero amount.

    Applied to a potential game this always breaks the potential property.
    Returns ``(game, (player, index, amount))``.
    """
    if amount is None:
        amount = float(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
    player = int(rng.integers(game.n))
    index = int(rng.integers(game.size))
    payoffs = np.array(game.payoffs)
    payoffs[player, index] += amount
    return game.with_payoffs(payoffs), (player + 1, index, amount)
