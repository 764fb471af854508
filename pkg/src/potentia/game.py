"""Finite normal-form games and their flat (lexicographic) payoff layout.

Profiles are enumerated with player 1 varying slowest and player n
fastest, which is the order produced by Kronecker products of logical
strategy vectors ``x_1 x_2 ... x_n``.  Players and strategies are 1-based
at this API surface and in files; arrays are indexed 0-based inside.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParseError, ProfileError, UnsupportedShapeError


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGame:
    """``n`` players, per-player strategy counts and one payoff row per player.

    Row ``i`` of ``payoffs`` is the structure vector of player ``i + 1``:
    the payoffs over all profiles in lexicographic order.
    """

    strategies: tuple
    payoffs: np.ndarray
    labels: dict | None = field(default=None)

    def __post_init__(self):
        strategies = tuple(int(s) for s in self.strategies)
        if len(strategies) < 2:
            raise DimensionError("a game needs at least 2 players")
        if any(s < 1 for s in strategies):
            raise DimensionError(f"strategy counts must be positive, got {strategies}")
        size = math.prod(strategies)
        payoffs = np.asarray(self.payoffs, dtype=float)
        if payoffs.shape != (len(strategies), size):
            raise DimensionError(
                f"payoffs must have shape {(len(strategies), size)}, got {payoffs.shape}"
            )
        if not np.all(np.isfinite(payoffs)):
            raise DimensionError("payoffs must be finite")
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "payoffs", _readonly(payoffs))

    @property
    def n(self) -> int:
        return len(self.strategies)

    @property
    def size(self) -> int:
        """Number of strategy profiles."""
        return self.payoffs.shape[1]

    @property
    def is_uniform(self) -> bool:
        return len(set(self.strategies)) == 1

    @property
    def k(self) -> int:
        """Common strategy count; raises for non-uniform games."""
        if not self.is_uniform:
            raise UnsupportedShapeError(
                f"criterion needs equal strategy counts, got {list(self.strategies)}"
            )
        return self.strategies[0]

    def tensor(self, player: int) -> np.ndarray:
        """Payoffs of ``player`` as an n-dimensional array indexed by choices."""
        _check_player(self, player)
        return self.payoffs[player - 1].reshape(self.strategies)

    def structure_vector(self, player: int) -> np.ndarray:
        _check_player(self, player)
        return self.payoffs[player - 1]

    def max_abs_payoff(self) -> float:
        return float(np.max(np.abs(self.payoffs))) if self.payoffs.size else 0.0

    def as_bimatrix(self) -> "BiMatrixGame":
        if self.n != 2:
            raise UnsupportedShapeError(f"bi-matrix view needs 2 players, got {self.n}")
        return BiMatrixGame(self.tensor(1), self.tensor(2))

    def same_as(self, other: "FiniteGame") -> bool:
        return (
            self.strategies == other.strategies
            and np.array_equal(self.payoffs, other.payoffs)
            and self.labels == other.labels
        )

    def with_payoffs(self, payoffs) -> "FiniteGame":
        return FiniteGame(self.strategies, payoffs, self.labels)


@dataclass(frozen=True, eq=False)
class BiMatrixGame:
    """Two-player game given by payoff matrices of shape (k1, k2)."""

    C1: np.ndarray
    C2: np.ndarray

    def __post_init__(self):
        c1 = np.atleast_2d(np.asarray(self.C1, dtype=float))
        c2 = np.atleast_2d(np.asarray(self.C2, dtype=float))
        if c1.ndim != 2 or c1.shape != c2.shape:
            raise DimensionError(f"C1 and C2 must share a 2-d shape, got {c1.shape} and {c2.shape}")
        if not (np.all(np.isfinite(c1)) and np.all(np.isfinite(c2))):
            raise DimensionError("payoffs must be finite")
        object.__setattr__(self, "C1", _readonly(c1))
        object.__setattr__(self, "C2", _readonly(c2))

    @property
    def shape(self):
        return self.C1.shape

    @property
    def R(self) -> np.ndarray:
        """Relative payoff matrix ``C2 - C1``."""
        return self.C2 - self.C1

    def to_game(self) -> FiniteGame:
        return FiniteGame(self.shape, np.vstack([self.C1.reshape(-1), self.C2.reshape(-1)]))


def _check_player(game: FiniteGame, player: int) -> None:
    if not 1 <= player <= game.n:
        raise ProfileError(f"player {player} outside 1..{game.n}")


def _check_profile(strategies, profile) -> None:
    if len(profile) != len(strategies):
        raise ProfileError(f"profile {tuple(profile)} has {len(profile)} choices, expected {len(strategies)}")
    for pos, (c, k) in enumerate(zip(profile, strategies), start=1):
        if not 1 <= c <= k:
            raise ProfileError(f"choice {c} of player {pos} outside 1..{k}")


def profile_to_index(game: FiniteGame, profile) -> int:
    """Flat 0-based index of a 1-based profile, player 1 slowest."""
    _check_profile(game.strategies, profile)
    index = 0
    for c, k in zip(profile, game.strategies):
        index = index * k + (c - 1)
    return index


def index_to_profile(game: FiniteGame, index: int) -> tuple:
    if not 0 <= index < game.size:
        raise ProfileError(f"index {index} outside 0..{game.size - 1}")
    return tuple(int(i) + 1 for i in np.unravel_index(index, game.strategies))


def profiles(strategies):
    """All 1-based profiles in lexicographic order."""
    return itertools.product(*(range(1, k + 1) for k in strategies))


def payoff(game: FiniteGame, player: int, profile) -> float:
    _check_player(game, player)
    return float(game.payoffs[player - 1, profile_to_index(game, profile)])


def relative_payoff(game: FiniteGame, i: int, j: int) -> np.ndarray:
    """``V_j - V_i``: how much more player j gets than player i, per profile."""
    _check_player(game, i)
    _check_player(game, j)
    if i == j:
        raise ProfileError(f"relative payoff needs two distinct players, got {i} twice")
    return game.payoffs[j - 1] - game.payoffs[i - 1]


def _pair_axes(n, i, j):
    if not (1 <= i < j <= n):
        raise DimensionError(f"player pair needs 1 <= i < j <= {n}, got ({i}, {j})")
    rest = [a for a in range(n) if a not in (i - 1, j - 1)]
    return [i - 1, j - 1, *rest]


def reshape_pair(v, n: int, k: int, i: int, j: int) -> np.ndarray:
    """Arrange a k**n vector as a k² × k**(n-2) matrix.

    Rows run over (choice_i, choice_j) and columns over the remaining
    players' choices, both lexicographically.
    """
    v = np.asarray(v)
    if v.size != k**n:
        raise DimensionError(f"vector of length {v.size} does not match k**n = {k**n}")
    axes = _pair_axes(n, i, j)
    return v.reshape((k,) * n).transpose(axes).reshape(k * k, k ** (n - 2))


def flatten_pair(m, n: int, k: int, i: int, j: int) -> np.ndarray:
    """Inverse of :func:`reshape_pair`."""
    m = np.asarray(m)
    if m.shape != (k * k, k ** (n - 2)):
        raise DimensionError(f"matrix shape {m.shape} does not match ({k * k}, {k ** (n - 2)})")
    axes = _pair_axes(n, i, j)
    return m.reshape((k,) * n).transpose(np.argsort(axes)).reshape(-1)


def subgame(game: FiniteGame, i: int, j: int, rest=()) -> BiMatrixGame:
    """Bi-matrix game between players i < j with everybody else fixed.

    ``rest`` lists the (1-based) choices of the other players in player order.
    """
    axes = _pair_axes(game.n, i, j)
    others = axes[2:]
    rest = tuple(rest)
    if len(rest) != len(others):
        raise ProfileError(f"expected {len(others)} fixed choices, got {len(rest)}")
    for a, c in zip(others, rest):
        if not 1 <= c <= game.strategies[a]:
            raise ProfileError(f"fixed choice {c} of player {a + 1} outside 1..{game.strategies[a]}")
    index = [slice(None)] * game.n
    for a, c in zip(others, rest):
        index[a] = c - 1
    index = tuple(index)
    return BiMatrixGame(game.tensor(i)[index], game.tensor(j)[index])


def subgame_contexts(game: FiniteGame, i: int, j: int):
    """Every assignment of fixed choices to the players other than i, j."""
    others = [game.strategies[a] for a in _pair_axes(game.n, i, j)[2:]]
    return profiles(others)


# -- file format --------------------------------------------------------------

def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(path, f"expected a number, got {type(value).__name__}")
    x = float(value)
    if not math.isfinite(x):
        raise ParseError(path, "non-finite number")
    return x


def _reject_constant(token):
    raise ParseError("", f"non-finite number {token}")


def _matrix(value, path):
    if not isinstance(value, list) or not value:
        raise ParseError(path, "expected a non-empty list of rows")
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{path}[{r}]", "expected a non-empty list of numbers")
        rows.append([_number(x, f"{path}[{r}][{c}]") for c, x in enumerate(row)])
    if len({len(r) for r in rows}) != 1:
        raise ParseError(path, "rows have different lengths")
    return rows


def game_from_document(doc) -> FiniteGame:
    """Validate a decoded JSON document and build the game."""
    if not isinstance(doc, dict):
        raise ParseError("", "top level must be an object")
    if "bimatrix" in doc:
        bm = doc["bimatrix"]
        if not isinstance(bm, dict):
            raise ParseError("bimatrix", "expected an object with C1 and C2")
        for key in ("C1", "C2"):
            if key not in bm:
                raise ParseError(f"bimatrix.{key}", "missing")
        c1 = _matrix(bm["C1"], "bimatrix.C1")
        c2 = _matrix(bm["C2"], "bimatrix.C2")
        if (len(c1), len(c1[0])) != (len(c2), len(c2[0])):
            raise ParseError("bimatrix.C2", "shape differs from C1")
        return FiniteGame((len(c1), len(c1[0])), [sum(c1, []), sum(c2, [])], _labels(doc))

    for key in ("players", "strategies", "payoffs"):
        if key not in doc:
            raise ParseError(key, "missing")
    n = doc["players"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ParseError("players", "expected an integer >= 2")
    strategies = doc["strategies"]
    if not isinstance(strategies, list) or len(strategies) != n:
        raise ParseError("strategies", f"expected a list of {n} integers")
    for pos, k in enumerate(strategies):
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise ParseError(f"strategies[{pos}]", "expected a positive integer")
    size = math.prod(strategies)
    payoffs = doc["payoffs"]
    if not isinstance(payoffs, list) or len(payoffs) != n:
        raise ParseError("payoffs", f"expected {n} rows")
    rows = []
    for r, row in enumerate(payoffs):
        if not isinstance(row, list) or len(row) != size:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"payoffs[{r}]", f"expected {size} numbers, got {got}")
        rows.append([_number(x, f"payoffs[{r}][{c}]") for c, x in enumerate(row)])
    return FiniteGame(tuple(strategies), rows, _labels(doc))


def _labels(doc):
    labels = doc.get("labels")
    if labels is not None and not isinstance(labels, dict):
        raise ParseError("labels", "expected an object")
    return labels


def parse_game(text: str) -> FiniteGame:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON: {exc}") from None
    return game_from_document(doc)


def _json_number(x: float):
    if x.is_integer() and abs(x) <= 2**53:
        return int(x)
    return x


def game_to_document(game: FiniteGame) -> dict:
    doc = {
        "players": game.n,
        "strategies": list(game.strategies),
        "payoffs": [[_json_number(float(x)) for x in row] for row in game.payoffs],
    }
    if game.labels is not None:
        doc["labels"] = game.labels
    return doc


def serialize_game(game: FiniteGame, indent=None) -> str:
    return json.dumps(game_to_document(game), indent=indent)
