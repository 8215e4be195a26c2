"""Half-street games: ante, one bet, call or fold, showdown.

Both games share one representation. Hands are integer indices ``0..M-1``
dealt from a joint distribution ``joint[i, j] = h(i) * h(j|i)``; a showdown
between Player hand ``i`` and Dealer hand ``j`` is won by the Player with
probability ``w[i, j]``, lost with ``w[j, i]`` and split with ``d[i, j]``.

* von Neumann poker: ``M`` numbers, independent uniform deals (ties allowed),
  higher number wins outright.
* flop poker: the 169 preflop classes, a real 52-card deal and a three-card
  board.

All payoffs are net chips in the zero-sum convention (antes counted).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import abstraction
from .cards import DECK, _eval5_codes, get_tables
from .equity import EquityTables, sample_deals


@dataclass(frozen=True)
class GameSpec:
    ante: float
    bet: float

    def __post_init__(self):
        if not (self.ante > 0 and self.bet > 0):
            raise ValueError(f"ante and bet must be positive, got ({self.ante}, {self.bet})")

    @property
    def pot(self) -> float:
        return 2 * self.ante


@dataclass(frozen=True, eq=False)
class HalfStreetGame:
    kind: str  # "vn" or "flop"
    spec: GameSpec
    h: np.ndarray
    hcond: np.ndarray
    w: np.ndarray
    d: np.ndarray
    labels: tuple[str, ...]
    tables: EquityTables | None = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return len(self.h)

    @property
    def ante(self) -> float:
        return self.spec.ante

    @property
    def bet(self) -> float:
        return self.spec.bet

    @property
    def delta(self) -> np.ndarray:
        """Expected showdown sign for the Player: w(i|j) - w(j|i)."""
        return self.w - self.w.T

    @property
    def joint(self) -> np.ndarray:
        return self.h[:, None] * self.hcond


def von_neumann(ante: float = 1, bet: float = 2, M: int = 100) -> HalfStreetGame:
    """Discrete von Neumann poker; hand ``k`` (0-based) is the (k+1)-th weakest."""
    if M < 2:
        raise ValueError("M must be at least 2")
    h = np.full(M, 1.0 / M)
    hcond = np.full((M, M), 1.0 / M)
    w = np.tril(np.ones((M, M)), k=-1)
    return HalfStreetGame("vn", GameSpec(ante, bet), h, hcond, w, np.eye(M),
                          tuple(str(k + 1) for k in range(M)))


def flop(ante: float, bet: float, tables: EquityTables) -> HalfStreetGame:
    if tables.board_size != 3:
        raise ValueError("flop poker needs three-card-board equity tables")
    if tables.w.shape != (abstraction.N_CLASSES, abstraction.N_CLASSES):
        raise ValueError("equity tables must be 169x169")
    return HalfStreetGame("flop", GameSpec(ante, bet), np.asarray(tables.h), np.asarray(tables.hcond),
                          np.asarray(tables.w), np.asarray(tables.d), abstraction.LABELS, tables)


# ---------------------------------------------------------------------------
# Dealing


@njit(cache=True)
def _deal_flop_kernel(u, pair_class, deck, fk, fr, nk, nr):
    """Partial Fisher-Yates over a 52-card deck per row of 7 uniforms.

    Cards 0-1 go to the Player, 2-3 to the Dealer, 4-6 form the board.
    """
    n = u.shape[0]
    perm = np.arange(52)
    pi = np.empty(n, dtype=np.int64)
    dj = np.empty(n, dtype=np.int64)
    sign = np.empty(n, dtype=np.int64)
    for t in range(n):
        for s in range(7):
            r = s + int(u[t, s] * (52 - s))
            if r > 51:
                r = 51
            perm[s], perm[r] = perm[r], perm[s]
        pi[t] = pair_class[perm[0], perm[1]]
        dj[t] = pair_class[perm[2], perm[3]]
        b0, b1, b2 = deck[perm[4]], deck[perm[5]], deck[perm[6]]
        rp = _eval5_codes(deck[perm[0]], deck[perm[1]], b0, b1, b2, fk, fr, nk, nr)
        rd = _eval5_codes(deck[perm[2]], deck[perm[3]], b0, b1, b2, fk, fr, nk, nr)
        sign[t] = 1 if rp < rd else (-1 if rd < rp else 0)
    return pi, dj, sign


_PAIR_CLASS = None


def _pair_class() -> np.ndarray:
    global _PAIR_CLASS
    if _PAIR_CLASS is None:
        hands, cls, _ = abstraction.all_hands()
        pc = np.full((52, 52), -1, dtype=np.int64)
        pc[hands[:, 0], hands[:, 1]] = cls
        pc[hands[:, 1], hands[:, 0]] = cls
        _PAIR_CLASS = pc
    return _PAIR_CLASS


def deal_batch(game: HalfStreetGame, rng: np.random.Generator, n: int):
    """Deal ``n`` rounds; return Player hands, Dealer hands and showdown signs.

    The sign is +1 when the Player would win a showdown, -1 when the Dealer
    would, 0 for a split. Flop rounds deal real cards and a board.
    """
    if game.kind == "vn":
        i = rng.integers(game.M, size=n)
        j = rng.integers(game.M, size=n)
        return i, j, np.sign(i - j)
    t = get_tables()
    return _deal_flop_kernel(rng.random((n, 7)), _pair_class(), DECK,
                             t.flush_keys, t.flush_ranks, t.nonflush_keys, t.nonflush_ranks)


def deal(game: HalfStreetGame, rng: np.random.Generator) -> tuple[int, int]:
    i, j, _ = deal_batch(game, rng, 1)
    return int(i[0]), int(j[0])


def deal_cards(rng: np.random.Generator) -> tuple[list[int], list[int], list[int]]:
    """A concrete flop-poker deal: (player hole cards, dealer hole cards, board)."""
    idx = rng.choice(52, size=7, replace=False)
    codes = [int(DECK[k]) for k in idx]
    return codes[:2], codes[2:4], codes[4:]


# ---------------------------------------------------------------------------
# Payoffs


def showdown_sign(game: HalfStreetGame, i: int, j: int, rng: np.random.Generator | None = None,
                  use_board: bool = True) -> int:
    if game.kind == "vn":
        return int(np.sign(i - j))
    if rng is None:
        raise ValueError("flop showdowns need an rng")
    if use_board:
        ha, hb, board = sample_deals(rng, abstraction.combos(i), abstraction.combos(j), 1, 3)
        t = get_tables()
        args = (t.flush_keys, t.flush_ranks, t.nonflush_keys, t.nonflush_ranks)
        b = [DECK[k] for k in board[0]]
        rp = _eval5_codes(DECK[ha[0, 0]], DECK[ha[0, 1]], b[0], b[1], b[2], *args)
        rd = _eval5_codes(DECK[hb[0, 0]], DECK[hb[0, 1]], b[0], b[1], b[2], *args)
        return 1 if rp < rd else (-1 if rd < rp else 0)
    u = rng.random()
    if u < game.w[i, j]:
        return 1
    if u < game.w[i, j] + game.w[j, i]:
        return -1
    return 0


def settle(spec: GameSpec, bet: bool, call: bool, sign: int) -> tuple[float, float]:
    """Net payoffs (Player, Dealer) once actions and the showdown sign are known."""
    if not bet:
        won = spec.ante * sign
    elif not call:
        won = spec.ante
    else:
        won = (spec.ante + spec.bet) * sign
    return won, -won


def play_round(game: HalfStreetGame, i: int, j: int, player_acts_bet: bool, dealer_acts_call: bool,
               rng: np.random.Generator | None = None, use_board: bool = True) -> tuple[float, float]:
    """Play one round with fixed actions.

    A showdown is only resolved when needed; flop showdowns deal a board for
    the two classes (``use_board``) or sample from the equity tables.
    """
    if player_acts_bet and not dealer_acts_call:
        return settle(game.spec, True, False, 0)
    return settle(game.spec, player_acts_bet, dealer_acts_call, showdown_sign(game, i, j, rng, use_board))


def expected_payoffs(game: HalfStreetGame, i, j, p_bet, q_call):
    """Exact net expectations (E_P, E_D) for hands ``i`` vs ``j``.

    Broadcasts over array arguments.
    """
    a, b = game.ante, game.bet
    delta = game.delta[i, j]
    e_p = p_bet * (q_call * (a + b) * delta + (1 - q_call) * a) + (1 - p_bet) * a * delta
    return e_p, -e_p


def payoff_matrix(game: HalfStreetGame, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Player's expected net payoff for every (i, j)."""
    a, b = game.ante, game.bet
    p = np.asarray(p, dtype=np.float64)[:, None]
    q = np.asarray(q, dtype=np.float64)[None, :]
    delta = game.delta
    return p * (q * (a + b) * delta + (1 - q) * a) + (1 - p) * a * delta
