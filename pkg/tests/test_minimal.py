import numpy as np
import pytest

from potentia.core import is_potential_by_equation, potential_by_equation, validate_potential
from potentia.errors import NotPotentialError, UnsupportedShapeError
from potentia.game import FiniteGame
from potentia.generate import perturb, random_potential_game
from potentia.linalg import boundary_matrix, kron, numerical_rank
from potentia.minimal import (
    b_tilde,
    build_elimination,
    build_transform,
    check_all_subgames,
    check_pairwise_reshaped,
    check_pairwise_t21,
    is_potential_minimal,
    is_potential_reduced,
    minimal_check_matrix,
    minimal_equation_count,
    potential_closed_form,
    recover_xi_n,
    verify_structure_identities,
)

GOLDEN_3_2 = [
    [0, 1, 0, -1, 0, -1, 0, 1, 0, -1, 0, 1, 0, 1, 0, -1],
    [1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1],
]

SHAPES = [(3, 2), (3, 3), (4, 2), (4, 3)]


def zero_game(n, k):
    return FiniteGame((k,) * n, np.zeros((n, k**n)))


def test_golden_three_players_two_strategies():
    m = minimal_check_matrix(3, 2)
    assert m.dtype.kind == "i"
    assert m.tolist() == GOLDEN_3_2


@pytest.mark.parametrize("n,k,expected", [(3, 2, 5), (3, 3, 28), (4, 2, 17), (4, 3, 136)])
def test_minimal_count(n, k, expected):
    assert minimal_equation_count(n, k).minimal == expected
    m = minimal_check_matrix(n, k)
    assert m.shape == (expected, (n - 1) * k**n)
    # independent equations
    assert numerical_rank(m) == expected


@pytest.mark.parametrize("k", [2, 3, 4])
def test_two_player_count_and_delegation(k):
    assert minimal_equation_count(2, k).minimal == (k - 1) ** 2
    B = boundary_matrix(k)
    assert np.array_equal(minimal_check_matrix(2, k), kron(B, B))


def test_pairwise_count():
    assert minimal_equation_count(3, 2).pairwise == 6
    assert minimal_equation_count(4, 3).pairwise == 216


def test_transform_dimensions():
    t = build_transform(3, 2)
    assert t.T3.shape == (4, 16)
    assert t.T2.shape == (4, 16) and t.T1.shape == (8, 16)
    assert t.T.shape == (16, 16)
    assert numerical_rank(t.T) == 16
    e = build_elimination(3, 2)
    assert e.S.shape == (4, 4) and e.S1.shape[0] == 3 and e.S2.shape[0] == 1


def test_transform_two_players():
    t = build_transform(2, 3)
    assert np.array_equal(t.Phi, -boundary_matrix(3))


def test_elimination_needs_three_players():
    with pytest.raises(UnsupportedShapeError):
        build_elimination(2, 3)
    with pytest.raises(UnsupportedShapeError):
        minimal_check_matrix(3, 1)


@pytest.mark.parametrize("n,k", SHAPES)
def test_structure_identities(n, k):
    report = verify_structure_identities(n, k)
    assert all(report.values()), [name for name, ok in report.items() if not ok]


@pytest.mark.parametrize("n,k", [(3, 2), (3, 3), (4, 2)])
def test_s_phi_on_random_xi(n, k, rng):
    t, e = build_transform(n, k), build_elimination(n, k)
    xi = rng.integers(-9, 10, size=k ** (n - 1))
    head = e.S1.shape[0]
    out = e.S @ (t.Phi @ xi)
    assert np.array_equal(out[:head], -boundary_matrix(k ** (n - 1)) @ xi)
    assert not out[head:].any()


def test_equation_list_for_three_players(rng):
    # Rows read against the r-labelled b_tilde; the r^2 rows alternate over
    # players 2 and 3, the r^1 rows over players 1 and 3.
    g, _ = random_potential_game(rng, (2, 2, 2))
    g = perturb(rng, g)[0]
    r = b_tilde(g)
    r1, r2 = r[:8], r[8:]
    i = {"111": 0, "112": 1, "121": 2, "122": 3, "211": 4, "212": 5, "221": 6, "222": 7}
    eqs = [
        r1[i["112"]] - r1[i["122"]] - r1[i["212"]] + r1[i["222"]] - r2[i["112"]] + r2[i["122"]] + r2[i["212"]] - r2[i["222"]],
        r1[i["111"]] - r1[i["112"]] - r1[i["211"]] + r1[i["212"]],
        r1[i["121"]] - r1[i["122"]] - r1[i["221"]] + r1[i["222"]],
        r2[i["111"]] - r2[i["112"]] - r2[i["121"]] + r2[i["122"]],
        r2[i["211"]] - r2[i["212"]] - r2[i["221"]] + r2[i["222"]],
    ]
    assert np.allclose(minimal_check_matrix(3, 2) @ r, eqs)


def test_r2_rows_need_players_two_and_three(rng):
    # alternating V3 - V2 over players 1 and 3 is not implied by potential-ness
    found = False
    for _ in range(20):
        g, _ = random_potential_game(rng, (2, 2, 2))
        r2 = b_tilde(g)[8:].reshape(2, 2, 2)
        assert r2[0, 0, 0] - r2[0, 0, 1] - r2[0, 1, 0] + r2[0, 1, 1] == 0
        found |= r2[0, 0, 0] - r2[0, 0, 1] - r2[1, 0, 0] + r2[1, 0, 1] != 0
    assert found


def test_minimal_examples(rng):
    assert is_potential_minimal(zero_game(3, 2)).holds
    g, _ = random_potential_game(rng, (2, 2, 2))
    assert is_potential_minimal(g).holds


def test_single_entry_perturbation_pattern(rng):
    g, _ = random_potential_game(rng, (2, 2, 2))
    # r^1 = c^3 - c^1: raising r^1_112 by one lowers c^1 at profile (1,1,2)
    p = np.array(g.payoffs)
    p[0, 1] -= 1
    v = is_potential_minimal(g.with_payoffs(p))
    assert not v.holds
    assert np.flatnonzero(np.abs(v.residuals) > 1e-9).tolist() == [0, 1]

    # raising r^1_111 as well balances the second equation
    p[0, 0] -= 1
    v = is_potential_minimal(g.with_payoffs(p))
    assert not v.holds
    assert np.flatnonzero(np.abs(v.residuals) > 1e-9).tolist() == [0]


def test_minimal_non_uniform():
    g = FiniteGame((2, 3, 2), np.zeros((3, 12)))
    with pytest.raises(UnsupportedShapeError):
        is_potential_minimal(g)


@pytest.mark.parametrize("n,k", SHAPES)
def test_minimal_agrees_with_equation(n, k, rng):
    for _ in range(4):
        g, _ = random_potential_game(rng, (k,) * n, integer=False)
        bad = perturb(rng, g)[0]
        for game, expected in ((g, True), (bad, False)):
            assert is_potential_minimal(game).holds is expected
            assert is_potential_by_equation(game).holds is expected
            assert is_potential_reduced(game).holds is expected


@pytest.mark.parametrize("n,k", SHAPES)
def test_recovered_xi_n_solves_reduced_system(n, k, rng):
    g, _ = random_potential_game(rng, (k,) * n)
    t = build_transform(n, k)
    for c in (0.0, 2.5):
        xi = recover_xi_n(g, c)
        assert np.allclose(t.Phi @ xi, t.T2 @ b_tilde(g))


@pytest.mark.parametrize("n,k", SHAPES)
def test_closed_form_potential(n, k, rng):
    g, _ = random_potential_game(rng, (k,) * n, integer=False)
    pv = potential_closed_form(g)
    assert validate_potential(g, pv).holds
    other = potential_by_equation(g)
    diff = pv.entries - other.entries
    assert np.ptp(diff) < 1e-9 * (1 + np.abs(g.payoffs).max())
    shifted = potential_closed_form(g, 3.0)
    assert np.allclose(shifted.entries - pv.entries, 3.0)


def test_closed_form_zero_and_rejection(rng):
    assert not potential_closed_form(zero_game(3, 2)).entries.any()
    g, _ = random_potential_game(rng, (2, 2, 2))
    with pytest.raises(NotPotentialError) as err:
        potential_closed_form(perturb(rng, g)[0])
    assert err.value.verdict.residuals.size == 5


def test_closed_form_two_players(rng):
    g, _ = random_potential_game(rng, (3, 3))
    pv = potential_closed_form(g, 1.0)
    assert pv.route == "closed-form" and validate_potential(g, pv).holds


@pytest.mark.parametrize("variant", ["ii", "iii"])
def test_t21_examples(variant, rng):
    assert check_pairwise_t21(zero_game(3, 2), variant=variant).holds
    g, _ = random_potential_game(rng, (2, 2, 2))
    assert check_pairwise_t21(g, variant=variant).holds
    assert not check_pairwise_t21(perturb(rng, g)[0], variant=variant).holds


def test_t21_bad_variant():
    with pytest.raises(ValueError):
        check_pairwise_t21(zero_game(3, 2), variant="iv")


@pytest.mark.parametrize("n,k", SHAPES)
def test_pairwise_criteria_agree(n, k, rng):
    for _ in range(4):
        g, _ = random_potential_game(rng, (k,) * n)
        for game, expected in ((g, True), (perturb(rng, g)[0], False)):
            verdicts = [
                check_pairwise_t21(game, variant="ii"),
                check_pairwise_t21(game, variant="iii"),
                check_pairwise_reshaped(game),
                check_pairwise_reshaped(game, use_centering=True),
                check_all_subgames(game),
            ]
            assert [v.holds for v in verdicts] == [expected] * 5


def test_subgame_failures_localized(rng):
    z = zero_game(3, 2)
    v = check_all_subgames(z)
    assert v.holds and v.failures == ()
    g, _ = random_potential_game(rng, (2, 2, 2))
    bad, (player, index, _) = perturb(rng, g)
    v = check_all_subgames(bad)
    assert not v.holds and v.failures
    # every failing sub-game involves the perturbed player
    assert all(player in (i, j) for i, j, _ in v.failures)
    r = check_pairwise_reshaped(bad)
    assert set(r.failures) == set(v.failures)
