import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from halfstreet import abstraction as ab
from halfstreet import game as G
from halfstreet.cards import DECK, eval_many
from halfstreet.verify import e1_vn

probs = st.floats(0, 1)


def test_game_spec_validation():
    assert G.GameSpec(1, 2).pot == 2
    for a, b in ((0, 1), (1, 0), (-1, 2)):
        with pytest.raises(ValueError):
            G.GameSpec(a, b)


def test_play_round_examples(rng):
    g = G.von_neumann(1, 2, 100)
    assert G.play_round(g, 50, 10, True, True) == (3, -3)
    assert G.play_round(g, 10, 50, True, False) == (1, -1)
    assert G.play_round(g, 20, 20, False, True) == (0, 0)
    assert G.play_round(g, 20, 40, False, False) == (-1, 1)


def test_bet_fold_in_flop(flop_tables, rng):
    g = G.flop(1, 2, flop_tables)
    assert G.play_round(g, 5, 80, True, False, rng) == (1, -1)


def test_expected_payoff_examples():
    g = G.von_neumann(1, 2, 100)
    assert G.expected_payoffs(g, 7, 7, 0.5, 0.5)[0] == pytest.approx(0.25)
    assert G.expected_payoffs(g, 9, 3, 1, 1)[0] == 3
    assert G.expected_payoffs(g, 3, 9, 0, 0.7)[0] == -1


@given(st.integers(0, 99), st.integers(0, 99), probs, probs)
def test_zero_sum(i, j, p, q):
    g = G.von_neumann(1, 2, 100)
    e_p, e_d = G.expected_payoffs(g, i, j, p, q)
    assert e_p + e_d == 0


def test_vn_deal_is_uniform():
    g = G.von_neumann(1, 2, 100)
    i, j, sign = G.deal_batch(g, np.random.default_rng(1), 10**6)
    for x in (i, j):
        counts = np.bincount(x, minlength=100)
        assert stats.chisquare(counts).pvalue > 0.01
    assert np.array_equal(sign, np.sign(i - j))
    assert (i == j).any()


def test_flop_deal_class_frequency(flop_tables):
    g = G.flop(1, 2, flop_tables)
    i, j, _ = G.deal_batch(g, np.random.default_rng(2), 10**6)
    p = 6 / 1326
    n = 10**6
    for x in (i, j):
        freq = (x == ab.parse_label("AA")).sum()
        assert abs(freq - n * p) <= 3 * np.sqrt(n * p * (1 - p))


def test_flop_deal_cards_never_shared():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        a, b, board = G.deal_cards(rng)
        assert len(set(a + b + board)) == 7


def test_flop_deal_kernel_sign_matches_evaluation():
    rng = np.random.default_rng(4)
    u = rng.random((2000, 7))
    t = G.get_tables()
    pi, dj, sign = G._deal_flop_kernel(u, G._pair_class(), DECK, t.flush_keys, t.flush_ranks,
                                       t.nonflush_keys, t.nonflush_ranks)
    # replay the shuffle in Python; the deck order carries over between rows
    perm = list(range(52))
    for row in range(2000):
        for s in range(7):
            r = min(s + int(u[row, s] * (52 - s)), 51)
            perm[s], perm[r] = perm[r], perm[s]
        if row % 37:
            continue
        cards = DECK[perm[:7]]
        ra = eval_many(np.array([[*cards[:2], *cards[4:7]]]))[0]
        rb = eval_many(np.array([[*cards[2:4], *cards[4:7]]]))[0]
        assert sign[row] == np.sign(rb - ra)
        assert pi[row] == ab.classify(*cards[:2]) and dj[row] == ab.classify(*cards[2:4])


def _simulate(g, i, j, p, q, n, rng):
    """Sample mean of round outcomes with sampled actions and showdowns."""
    bet = rng.random(n) < p
    call = rng.random(n) < q
    if g.kind == "vn":
        sign = np.full(n, np.sign(i - j))
    else:
        u = rng.random(n)
        sign = np.where(u < g.w[i, j], 1, np.where(u < g.w[i, j] + g.w[j, i], -1, 0))
    won = np.where(~bet, g.ante * sign, np.where(~call, g.ante, (g.ante + g.bet) * sign))
    return won.mean(), won.std() / np.sqrt(n)


def test_expected_payoffs_match_simulation(flop_tables):
    rng = np.random.default_rng(5)
    games = [G.von_neumann(1, 2, 100), G.flop(1, 2, flop_tables)]
    for k in range(20):
        g = games[k % 2]
        i, j = rng.integers(g.M, size=2)
        p, q = rng.random(2)
        mean, se = _simulate(g, i, j, p, q, 10**6, rng)
        exact = G.expected_payoffs(g, i, j, p, q)[0]
        assert abs(mean - exact) <= 4 * max(se, 1e-12)


def test_play_round_matches_expectation_with_boards(flop_tables):
    g = G.flop(1, 2, flop_tables)
    rng = np.random.default_rng(6)
    i, j = ab.parse_label("AKo"), ab.parse_label("QQ")
    n = 4000
    results = np.array([G.play_round(g, i, j, True, True, rng)[0] for _ in range(n)])
    exact = G.expected_payoffs(g, i, j, 1, 1)[0]
    assert abs(results.mean() - exact) <= 4 * results.std() / np.sqrt(n)
    table = np.array([G.play_round(g, i, j, False, False, rng, use_board=False)[0] for _ in range(n)])
    exact = G.expected_payoffs(g, i, j, 0, 0)[0]
    assert abs(table.mean() - exact) <= 4 * table.std() / np.sqrt(n)


def test_pot_framework_equivalence():
    # gross expectation p e1 + P x (ties split) minus P/2 equals the net expectation
    rng = np.random.default_rng(8)
    g = G.von_neumann(1, 2, 100)
    P = g.spec.pot
    x = (np.arange(100) + 0.5) / 100
    for _ in range(10):
        p, q = rng.random(100), rng.random(100)
        gross = p * e1_vn(q, g.spec) + P * x
        net = (g.hcond * G.payoff_matrix(g, p, q)).sum(axis=1)
        np.testing.assert_allclose(gross - P / 2, net, atol=1e-12)


def test_scaling():
    g1, g2 = G.von_neumann(1, 2, 20), G.von_neumann(3, 6, 20)
    rng = np.random.default_rng(9)
    p, q = rng.random(20), rng.random(20)
    np.testing.assert_allclose(G.payoff_matrix(g2, p, q), 3 * G.payoff_matrix(g1, p, q))


def test_flop_requires_board_three(flop_tables):
    with pytest.raises(ValueError):
        G.flop(1, 2, dataclasses.replace(flop_tables, board_size=5))
