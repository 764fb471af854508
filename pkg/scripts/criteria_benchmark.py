"""Equation counts and wall time per criterion over a grid of (n, k).

Each cell runs every applicable criterion on a batch of generated
potential games and their one-entry perturbations, and reports whether the
verdicts agree.
"""
import argparse
import time
from collections import defaultdict

import numpy as np

from potentia import checks, generate, minimal


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--games", type=int, default=20)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--max-k", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'n':>2} {'k':>2} {'minimal':>8} {'pairwise':>9} {'disagree':>9}  per-criterion ms/game")
    for n in range(2, args.max_n + 1):
        for k in range(2, args.max_k + 1):
            counts = minimal.minimal_equation_count(n, k)
            timings = defaultdict(float)
            disagree = 0
            for _ in range(args.games):
                g, _ = generate.random_potential_game(rng, (k,) * n, integer=False)
                for game in (g, generate.perturb(rng, g)[0]):
                    verdicts = []
                    for method in checks.applicable_methods(game):
                        start = time.perf_counter()
                        verdicts += checks.run_method(game, method)
                        timings[method] += time.perf_counter() - start
                    disagree += len({v.holds for v in verdicts}) > 1
            per = " ".join(f"{m}={1e3 * t / (2 * args.games):.2f}" for m, t in timings.items())
            print(f"{n:>2} {k:>2} {counts.minimal:>8} {counts.pairwise:>9} {disagree:>9}  {per}")


if __name__ == "__main__":
    main()
