import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from halfstreet import cfr
from halfstreet import game as G
from halfstreet import verify as V
from oracles import halfstreet_lp

VN = G.von_neumann(1, 2, 100)


def test_regret_match_examples():
    assert cfr.regret_match(0, 0) == 0.5
    assert cfr.regret_match(3, 1) == 0.75
    assert cfr.regret_match(-2, 5) == 0.0
    assert cfr.regret_match(-1, -1) == 0.5


def test_average_strategy():
    S = np.array([[3.0, 1.0], [0.0, 0.0], [0.0, 2.0]])
    assert cfr.average_strategy(S).tolist() == [0.75, 0.5, 0.0]


def test_round_player_wins_fresh_state():
    P, D = cfr.RegretState.fresh(100), cfr.RegretState.fresh(100)
    cfr.cfr_round(P, D, VN, 60, 20)
    # E_bet = 0.5*3 + 0.5*1 = 2, E_check = 1, E = 1.5
    assert P.R[60].tolist() == [0.5, 0.0]
    assert P.V[60] == 1.0
    assert P.S[60].tolist() == [1.0, 0.0]
    # Dealer: E_call = -3, E_fold = -1, E_D = -2, weighted by V_P = 0.5
    assert D.R[20].tolist() == [0.0, 0.5]
    assert D.V[20] == 0.0


def test_round_draw_dealer_fold_regret():
    P, D = cfr.RegretState.fresh(10), cfr.RegretState.fresh(10)
    g = G.von_neumann(1, 2, 10)
    P.V[4], D.V[4] = 0.3, 0.6
    cfr.cfr_round(P, D, g, 4, 4)
    e_d = -(1 - 0.6) * 1  # calling a tie is worth 0, folding -a
    assert D.R[4, 1] == pytest.approx(max(0.0, 0.3 * (-1 - e_d)))
    assert D.R[4, 0] == pytest.approx(max(0.0, 0.3 * (0 - e_d)))


@given(st.lists(st.tuples(st.integers(0, 19), st.integers(0, 19)), min_size=1, max_size=300))
def test_state_invariants_after_every_round(deals):
    g = G.von_neumann(1, 3, 20)
    P, D = cfr.RegretState.fresh(20), cfr.RegretState.fresh(20)
    for i, j in deals:
        S_before = (P.S.copy(), D.S.copy())
        cfr.cfr_round(P, D, g, i, j)
        for st_ in (P, D):
            assert np.all(st_.R >= 0)
            assert np.all((st_.V >= 0) & (st_.V <= 1))
        assert P.V[i] == cfr.regret_match(*P.R[i])
        assert D.V[j] == cfr.regret_match(*D.R[j])
        assert np.all(P.S >= S_before[0]) and np.all(D.S >= S_before[1])


def test_train_deterministic_and_chunk_independent():
    a = cfr.train(VN, 50_000, seed=3)
    b = cfr.train(VN, 50_000, seed=3, chunk=777, checkpoint_every=10_000)
    assert np.array_equal(a.W_P, b.W_P) and np.array_equal(a.W_D, b.W_D)
    c = cfr.train(VN, 50_000, seed=4)
    assert not np.array_equal(a.W_P, c.W_P)
    assert len(a.checkpoints) == 20
    with pytest.raises(ValueError):
        cfr.train(VN, 0)


def test_exploitability_decreases():
    rep = cfr.train(VN, 10**6, seed=1, checkpoint_every=10**4)
    first, last = rep.checkpoints[0]["exploitability"], rep.checkpoints[-1]["exploitability"]
    assert last <= first / 5
    assert np.all((rep.W_P >= 0) & (rep.W_P <= 1))
    vp, vd = V.game_value(rep.W_P, rep.W_D, VN)
    assert vp + vd == 0


def test_desk_scale_vn():
    rep = cfr.train(VN, 10**7, seed=1)
    x1, x2 = V.thresholds(rep.W_P)
    assert abs(x1 - 11) <= 3 and abs(x2 - 78) <= 3
    from halfstreet.vn_analytic import solve

    assert abs(V.dealer_call_mass(rep.W_D, solve(1, 2)) - 0.222) <= 0.03
    assert V.exploitability(rep.W_P, rep.W_D, VN) <= 0.02


def test_flop_value_within_exploitability_of_lp(flop_tables):
    g = G.flop(1, 2, flop_tables)
    rep = cfr.train(g, 10**6, seed=2)
    v_star, _ = halfstreet_lp(g)
    eps = V.exploitability(rep.W_P, rep.W_D, g)
    assert abs(V.game_value(rep.W_P, rep.W_D, g)[0] - v_star) <= eps + 1e-12


def test_small_game_converges_to_lp_value():
    g = G.von_neumann(1, 2, 6)
    rep = cfr.train(g, 10**6, seed=0)
    v_star, _ = halfstreet_lp(g)
    assert V.game_value(rep.W_P, rep.W_D, g)[0] == pytest.approx(v_star, abs=0.01)
    assert V.exploitability(rep.W_P, rep.W_D, g) < 0.02
