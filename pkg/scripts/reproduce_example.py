"""Walk through the three-player, two-strategy case.

Prints the minimal coefficient matrix, checks a generated potential game
against it, then perturbs one relative payoff and shows which equations
light up.
"""
import argparse

import numpy as np

from potentia import generate, minimal


def show(matrix):
    for row in matrix:
        print("  " + " ".join(f"{x:>2d}" for x in row))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    m = minimal.minimal_check_matrix(3, 2)
    print("minimal verification matrix (3 players, 2 strategies):")
    show(m)

    game, _ = generate.random_potential_game(rng, (2, 2, 2))
    v = minimal.is_potential_minimal(game)
    print(f"\ngenerated potential game: residuals {v.residuals.tolist()}")
    pv = minimal.potential_closed_form(game)
    print(f"closed-form potential: {pv.entries.tolist()}")

    # r^1 = V_3 - V_1, so lowering c^1 at profile (1,1,2) raises r^1_112
    payoffs = np.array(game.payoffs)
    payoffs[0, 1] -= 1
    v = minimal.is_potential_minimal(game.with_payoffs(payoffs))
    print(f"\nr^1_112 + 1: residuals {v.residuals.tolist()}")
    payoffs[0, 0] -= 1
    v = minimal.is_potential_minimal(game.with_payoffs(payoffs))
    print(f"r^1_111 + 1 as well: residuals {v.residuals.tolist()}")


if __name__ == "__main__":
    main()
