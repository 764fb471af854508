"""Release gates.  Each test appends one PASS/FAIL line to the summary."""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from potentia import checks
from potentia.core import (
    PotentialVector,
    bimatrix_is_potential,
    bimatrix_potential,
    kernel_projector,
    potential_by_equation,
    potential_projector,
    project_to_potential,
    validate_potential,
)
from potentia.game import BiMatrixGame
from potentia.generate import perturb, random_game, random_potential_game
from potentia.linalg import boundary_matrix, kron, nullity
from potentia.minimal import (
    build_elimination,
    build_transform,
    minimal_check_matrix,
    potential_closed_form,
    verify_structure_identities,
)
from potentia.nash import nash_from_potential, pure_nash_brute

GOLDEN_3_2 = np.array([
    [0, 1, 0, -1, 0, -1, 0, 1, 0, -1, 0, 1, 0, 1, 0, -1],
    [1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1],
])

SHAPES = [(2, 2), (3, 3), (2, 2, 2), (3, 3, 3), (2, 2, 2, 2), (3, 3, 3, 3), (2, 3), (3, 4), (4, 2)]
PER_SHAPE = 30


def record(number, name, ok, detail, elapsed):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail} ({elapsed:.2f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def corpus():
    """Potential games (with their generating potentials) and one-entry perturbations."""
    rng = np.random.default_rng(7)
    games = []
    for strategies in SHAPES:
        for t in range(PER_SHAPE):
            g, p = random_potential_game(rng, strategies, integer=t % 2 == 0)
            games.append((g, p, perturb(rng, g)[0]))
    return games


def test_golden_matrix():
    start = time.perf_counter()
    m = minimal_check_matrix.__wrapped__(3, 2)
    ok = m.dtype.kind == "i" and np.array_equal(m, GOLDEN_3_2)
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    record(1, "golden (3,2) matrix", ok, f"shape {m.shape}, exact match {np.array_equal(m, GOLDEN_3_2)}", elapsed)
    assert ok


def test_minimal_count():
    start = time.perf_counter()
    expected = {(3, 2): 5, (3, 3): 28, (4, 2): 17, (4, 3): 136}
    got = {}
    for (n, k), count in expected.items():
        rows = minimal_check_matrix.__wrapped__(n, k).shape[0]
        got[(n, k)] = rows
        assert rows == (n - 1) * k**n - n * k ** (n - 1) + 1
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 5.0
    record(2, "minimal row counts", ok, ", ".join(f"{nk}: {r}" for nk, r in got.items()), elapsed)
    assert ok


def test_structure_identities():
    start = time.perf_counter()
    names = ("SU = I", "-sum N1j Phi_j = B", "M Phi + sum L Phi = 0", "M G = I", "L G = 0")
    bad = []
    for n, k in [(3, 2), (3, 3), (4, 2)]:
        build_transform.cache_clear()
        build_elimination.cache_clear()
        report = verify_structure_identities(n, k)
        bad += [f"{name} at {(n, k)}" for name in names if not report[name]]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5.0
    record(3, "structure identities", ok, "all exact" if not bad else "; ".join(bad), elapsed)
    assert ok


def test_criteria_agreement(corpus):
    start = time.perf_counter()
    disagreements, wrong, total = [], 0, 0
    methods_seen = set()
    for g, _, bad in corpus:
        for game, expected in ((g, True), (bad, False)):
            report = checks.run_checks(game)
            methods_seen.update(v.method for v in report.verdicts)
            total += 1
            if not report.agree:
                disagreements.append(game.strategies)
            elif report.potential is not expected:
                wrong += 1
    elapsed = time.perf_counter() - start
    ok = total >= 500 and not disagreements and wrong == 0 and elapsed < 60.0
    record(4, "criteria agreement", ok,
           f"{total} games, {len(methods_seen)} criteria, {len(disagreements)} disagreements, {wrong} wrong verdicts",
           elapsed)
    assert ok


def test_potential_validity(corpus):
    start = time.perf_counter()
    failures, checked = [], 0
    for g, _, _ in corpus:
        bound = 1e-9 * (1 + np.abs(g.payoffs).max())
        routes = {"equation": potential_by_equation(g)}
        if g.is_uniform:
            routes["closed-form"] = potential_closed_form(g)
        if g.n == 2:
            routes["bimatrix"] = bimatrix_potential(g)
        base = next(iter(routes.values())).entries
        for name, pv in routes.items():
            checked += 1
            if validate_potential(g, pv).max_residual > bound:
                failures.append(f"{name} on {g.strategies}")
            if np.ptp(pv.entries - base) > bound:
                failures.append(f"{name} spread on {g.strategies}")
    elapsed = time.perf_counter() - start
    ok = not failures
    record(5, "potential validity", ok, f"{checked} potentials, {len(failures)} failures", elapsed)
    assert ok, failures[:5]


def test_projection():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    failures = []
    count = 0
    for k1 in range(2, 5):
        for k2 in range(2, 5):
            B = kron(boundary_matrix(k1), boundary_matrix(k2))
            if np.abs(potential_projector(k1, k2) - kernel_projector(B)).max() > 1e-10:
                failures.append(f"projector form {(k1, k2)}")
            if nullity(B) != k1 + k2 - 1:
                failures.append(f"nullity {(k1, k2)}")
            for _ in range(12):
                count += 1
                g = random_game(rng, (k1, k2), integer=False)
                once, _ = project_to_potential(g)
                twice, _ = project_to_potential(once)
                if not bimatrix_is_potential(once).holds:
                    failures.append(f"not potential {(k1, k2)}")
                if max(np.abs(twice.C1 - once.C1).max(), np.abs(twice.C2 - once.C2).max()) > 1e-10:
                    failures.append(f"not idempotent {(k1, k2)}")
    elapsed = time.perf_counter() - start
    ok = count >= 100 and not failures
    record(6, "projection", ok, f"{count} games, {len(failures)} failures", elapsed)
    assert ok, failures[:5]


def test_nash(corpus):
    start = time.perf_counter()
    mismatches = 0
    for g, p, _ in corpus:
        brute = pure_nash_brute(g)
        via = nash_from_potential(g, PotentialVector(p, g.strategies))
        if via.profiles != brute.profiles or not len(via):
            mismatches += 1
    pennies = BiMatrixGame([[1, -1], [-1, 1]], [[-1, 1], [1, -1]]).to_game()
    empty = len(pure_nash_brute(pennies)) == 0
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and empty
    record(7, "pure Nash equilibria", ok,
           f"{len(corpus)} potential games, {mismatches} mismatches, matching pennies empty: {empty}", elapsed)
    assert ok


def test_worked_example_end_to_end():
    # The three-player, two-strategy case is reproduced in full: the five
    # equations decide potential-ness and the closed form validates.
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    ok = True
    for _ in range(50):
        g, _ = random_potential_game(rng, (2, 2, 2))
        bad = perturb(rng, g)[0]
        residuals = GOLDEN_3_2 @ np.concatenate([g.payoffs[2] - g.payoffs[0], g.payoffs[2] - g.payoffs[1]])
        ok &= not residuals.any()
        ok &= validate_potential(g, potential_closed_form(g)).holds
        bad_res = GOLDEN_3_2 @ np.concatenate([bad.payoffs[2] - bad.payoffs[0], bad.payoffs[2] - bad.payoffs[1]])
        ok &= bool(bad_res.any())
    elapsed = time.perf_counter() - start
    record(8, "worked example reproducible", bool(ok), "50 potential / 50 perturbed (2,2,2) games", elapsed)
    assert ok
