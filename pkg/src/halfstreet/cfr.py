"""Counterfactual regret minimisation by self-play.

One Player and one Dealer keep, per hand, cumulative regrets ``R`` and
cumulative strategy weights ``S`` for their two actions (bet/check,
call/fold) and a current strategy ``V``. Each round deals ``(i, j)`` and
updates only those two entries:

1. the counterfactual values of both pure actions and of the current mix are
   computed from the expected showdown sign ``w(i|j) - w(j|i)`` (which is
   +1, 0 or -1 in von Neumann poker);
2. their differences are added to ``R`` (the Dealer's weighted by the
   Player's betting probability), negative entries are clamped to zero;
3. ``V`` is re-derived by regret matching and added to ``S``.

The trained strategy is the average ``S_action / (S_action + S_other)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .game import HalfStreetGame
from .verify import exploitability, game_value


@dataclass
class RegretState:
    R: np.ndarray  # (M, 2): [bet or call, check or fold]
    S: np.ndarray  # (M, 2)
    V: np.ndarray  # (M,)

    @classmethod
    def fresh(cls, M: int) -> "RegretState":
        return cls(np.zeros((M, 2)), np.zeros((M, 2)), np.full(M, 0.5))

    def average(self) -> np.ndarray:
        return average_strategy(self.S)


def regret_match(r_action: float, r_other: float) -> float:
    """Probability of the first action; 0.5 when both regrets are zero.

    Negative inputs are clamped to zero first.
    """
    r_action, r_other = max(r_action, 0.0), max(r_other, 0.0)
    total = r_action + r_other
    return 0.5 if total == 0 else r_action / total


def average_strategy(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=np.float64)
    total = S[:, 0] + S[:, 1]
    out = np.full(len(S), 0.5)
    np.divide(S[:, 0], total, out=out, where=total > 0)
    return out


@njit(cache=True)
def _update(RP, SP, VP, RD, SD, VD, i, j, delta, a, b):
    vp = VP[i]
    vd = VD[j]
    e_bet = vd * (a + b) * delta + (1.0 - vd) * a
    e_check = a * delta
    e_p = vp * e_bet + (1.0 - vp) * e_check
    e_call = -(a + b) * delta
    e_fold = -a
    e_d = vd * e_call + (1.0 - vd) * e_fold

    RP[i, 0] += e_bet - e_p
    RP[i, 1] += e_check - e_p
    RD[j, 0] += vp * (e_call - e_d)
    RD[j, 1] += vp * (e_fold - e_d)
    for R, k in ((RP, i), (RD, j)):
        if R[k, 0] < 0.0:
            R[k, 0] = 0.0
        if R[k, 1] < 0.0:
            R[k, 1] = 0.0

    tot = RP[i, 0] + RP[i, 1]
    VP[i] = 0.5 if tot == 0.0 else RP[i, 0] / tot
    tot = RD[j, 0] + RD[j, 1]
    VD[j] = 0.5 if tot == 0.0 else RD[j, 0] / tot

    SP[i, 0] += VP[i]
    SP[i, 1] += 1.0 - VP[i]
    SD[j, 0] += VD[j]
    SD[j, 1] += 1.0 - VD[j]


@njit(cache=True)
def _run(RP, SP, VP, RD, SD, VD, u, cum_h, cum_hcond, delta, a, b):
    M = cum_h.shape[0]
    for t in range(u.shape[0]):
        i = np.searchsorted(cum_h, u[t, 0], side="right")
        if i >= M:
            i = M - 1
        j = np.searchsorted(cum_hcond[i], u[t, 1], side="right")
        if j >= M:
            j = M - 1
        _update(RP, SP, VP, RD, SD, VD, i, j, delta[i, j], a, b)


def cfr_round(player: RegretState, dealer: RegretState, game: HalfStreetGame, i: int, j: int) -> None:
    """Apply one round for Player hand ``i`` vs Dealer hand ``j`` in place."""
    _update(player.R, player.S, player.V, dealer.R, dealer.S, dealer.V, int(i), int(j),
            float(game.delta[i, j]), float(game.ante), float(game.bet))


@dataclass
class TrainReport:
    iterations: int
    W_P: np.ndarray
    W_D: np.ndarray
    checkpoints: list[dict] = field(default_factory=list)
    player: RegretState | None = field(default=None, repr=False)
    dealer: RegretState | None = field(default=None, repr=False)


def _cumulative(game: HalfStreetGame):
    cum_h = np.cumsum(game.h)
    cum_hcond = np.cumsum(game.hcond, axis=1)
    return cum_h, np.ascontiguousarray(cum_hcond)


def train(game: HalfStreetGame, iterations: int, seed: int = 0, checkpoint_every: int | None = None,
          chunk: int = 1 << 20) -> TrainReport:
    """Self-play for ``iterations`` rounds.

    Deals come from a Philox stream seeded with ``seed``; the result does not
    depend on ``chunk`` or the checkpoint cadence. Each checkpoint records
    the exploitability and Player value of the average strategies so far.
    """
    iterations = int(iterations)
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if checkpoint_every is None:
        checkpoint_every = max(1, iterations // 20)
    rng = np.random.Generator(np.random.Philox(seed))
    player, dealer = RegretState.fresh(game.M), RegretState.fresh(game.M)
    cum_h, cum_hcond = _cumulative(game)
    delta = np.ascontiguousarray(game.delta, dtype=np.float64)
    a, b = float(game.ante), float(game.bet)

    report = TrainReport(iterations, player.V, dealer.V, player=player, dealer=dealer)
    done = 0
    next_ck = checkpoint_every if checkpoint_every > 0 else iterations + 1
    while done < iterations:
        n = min(chunk, iterations - done, next_ck - done)
        u = rng.random((n, 2))
        _run(player.R, player.S, player.V, dealer.R, dealer.S, dealer.V, u, cum_h, cum_hcond, delta, a, b)
        done += n
        if done == next_ck:
            wp, wd = player.average(), dealer.average()
            report.checkpoints.append({
                "iteration": done,
                "exploitability": exploitability(wp, wd, game),
                "value_P": game_value(wp, wd, game)[0],
            })
            next_ck += checkpoint_every
    report.W_P = player.average()
    report.W_D = dealer.average()
    return report
