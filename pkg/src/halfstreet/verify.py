"""Equilibrium diagnostics for half-street games.

The ``e`` functions measure how much better it is to bet (Player) or call
(Dealer) with a given hand against a fixed opponent strategy; their signs
give the best response. ``e1_vn``/``e2_vn`` are the von Neumann integrals
evaluated for strategies that are piecewise constant on the ``M`` hand
cells, ``e_player_flop``/``e_dealer_flop`` the class sums of flop poker.
Values and exploitability are exact sums over the deal distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equity import EquityTables
from .game import GameSpec, HalfStreetGame, payoff_matrix
from .vn_analytic import VnSolution, grid_points

_TIE_TOL = 1e-12


def _cell_cumulative(values: np.ndarray, x) -> np.ndarray:
    """Integral over [0, x] of the step function equal to values[k] on [k/M, (k+1)/M)."""
    values = np.asarray(values, dtype=np.float64)
    M = len(values)
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    csum = np.concatenate([[0.0], np.cumsum(values)])
    k = np.minimum((x * M).astype(np.int64), M - 1)
    frac = x * M - k
    return (csum[k] + frac * values[k]) / M


def e1_from_cumulative(x, call_cdf, spec: GameSpec):
    """Player's bet-vs-check gain for any Dealer strategy given as ``Q(y) = integral_0^y q``."""
    P, B = spec.pot, spec.bet
    x = np.asarray(x, dtype=np.float64)
    qx, q1 = call_cdf(x), call_cdf(1.0)
    return P * (1 - x) + B * qx - (P + B) * (q1 - qx)


def e2_from_cumulative(y, bet_cdf, spec: GameSpec):
    P, B = spec.pot, spec.bet
    y = np.asarray(y, dtype=np.float64)
    py, p1 = bet_cdf(y), bet_cdf(1.0)
    return (P + B) * py - B * (p1 - py)


def e1_vn(q, spec: GameSpec, x=None) -> np.ndarray:
    """e1 on the hand grid (cell midpoints by default) for a Dealer call vector ``q``.

    At the midpoints this is exactly the discrete game's gain from betting
    over checking, with showdown ties split.
    """
    q = np.asarray(q, dtype=np.float64)
    x = grid_points(len(q)) if x is None else x
    return e1_from_cumulative(x, lambda t: _cell_cumulative(q, t), spec)


def e2_vn(p, spec: GameSpec, y=None) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    y = grid_points(len(p)) if y is None else y
    return e2_from_cumulative(y, lambda t: _cell_cumulative(p, t), spec)


def _flop_inputs(strategy, tables: EquityTables):
    s = np.asarray(strategy, dtype=np.float64)
    if s.shape != (tables.w.shape[0],):
        raise ValueError(f"strategy has shape {s.shape}, expected ({tables.w.shape[0]},)")
    return s


def e_player_flop(q, tables: EquityTables, spec: GameSpec) -> np.ndarray:
    """Gain of betting over checking per Player class against Dealer calls ``q``."""
    q = _flop_inputs(q, tables)
    P, B = spec.pot, spec.bet
    w, d, hc = tables.w, tables.d, tables.hcond
    W = (hc * w).sum(axis=1)
    D = (hc * d).sum(axis=1)
    bracket = (P + B) * w - B * w.T - P + P / 2 * d
    return (hc * bracket * q[None, :]).sum(axis=1) + P * (1 - W - D / 2)


def e_dealer_flop(p, tables: EquityTables, spec: GameSpec) -> np.ndarray:
    """Gain of calling over folding per Dealer class, weighted by the Player's bets ``p``."""
    p = _flop_inputs(p, tables)
    P, B = spec.pot, spec.bet
    w, d, hc = tables.w, tables.d, tables.hcond
    # rows j (Dealer), columns i (Player); h(i|j) is hcond[j, i]
    bracket = (P + B) * w - B * w.T + P / 2 * d
    return (hc * bracket * p[None, :]).sum(axis=1)


# ---------------------------------------------------------------------------
# Generic values and best responses


def _validate(s, game: HalfStreetGame) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (game.M,):
        raise ValueError(f"strategy has shape {s.shape}, expected ({game.M},)")
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("strategy entries must lie in [0, 1]")
    return s


def game_value(p, q, game: HalfStreetGame) -> tuple[float, float]:
    """Expected net chips per round (Player, Dealer)."""
    p, q = _validate(p, game), _validate(q, game)
    v = float((game.joint * payoff_matrix(game, p, q)).sum())
    return v, -v


def player_advantage(q, game: HalfStreetGame) -> np.ndarray:
    """Per-hand conditional expectation of bet minus check."""
    q = _validate(q, game)
    a, b = game.ante, game.bet
    delta = game.delta
    gain = q[None, :] * ((a + b) * delta - a) + a - a * delta
    return (game.hcond * gain).sum(axis=1)


def dealer_advantage(p, game: HalfStreetGame) -> np.ndarray:
    """Per-hand expectation of call minus fold, including the chance of facing a bet."""
    p = _validate(p, game)
    a, b = game.ante, game.bet
    gain = a - (a + b) * game.delta  # [i, j] from the Dealer's side
    return (game.hcond * (gain.T * p[None, :])).sum(axis=1)


def best_response(opponent, role: str, game: HalfStreetGame) -> tuple[np.ndarray, float]:
    """Pure best response for ``role`` ("player" or "dealer") and its value.

    Ties go to the passive action (check or fold).
    """
    if role == "player":
        adv = player_advantage(opponent, game)
        br = (adv > _TIE_TOL).astype(np.float64)
        return br, game_value(br, opponent, game)[0]
    if role == "dealer":
        adv = dealer_advantage(opponent, game)
        br = (adv > _TIE_TOL).astype(np.float64)
        return br, game_value(opponent, br, game)[1]
    raise ValueError(f"role must be 'player' or 'dealer', got {role!r}")


def exploitability(p, q, game: HalfStreetGame) -> float:
    """Total gain available to both sides from deviating to a best response.

    Equal to ``(BR_P - value_P) + (BR_D - value_D)``; summed per hand as
    ``h * |advantage| * (mass on the worse action)`` so it is never negative.
    """
    p, q = _validate(p, game), _validate(q, game)
    adv_p = player_advantage(q, game)
    adv_d = dealer_advantage(p, game)
    gain_p = np.where(adv_p > _TIE_TOL, adv_p * (1 - p), -adv_p * p)
    gain_d = np.where(adv_d > _TIE_TOL, adv_d * (1 - q), -adv_d * q)
    # clip the sub-tolerance ties, where either action is a best response
    gain_p = np.maximum(gain_p, 0.0)
    gain_d = np.maximum(gain_d, 0.0)
    return float(game.h @ gain_p + game.h @ gain_d)


def dealer_call_mass(q, sol: VnSolution) -> float:
    """Calling mass (1/M) * sum of q over hands strictly inside (x1, x2)."""
    q = np.asarray(q, dtype=np.float64)
    x = grid_points(len(q))
    inside = (x > float(sol.x1)) & (x < float(sol.x2))
    return float(q[inside].sum() / len(q))


def sign_agreement(strategy, e, threshold: float = 0.05) -> tuple[float, int]:
    """Share of hands with ``|e| > threshold`` whose rounded action matches sign(e).

    Returns (fraction, number of hands considered).
    """
    s = np.rint(np.asarray(strategy, dtype=np.float64))
    e = np.asarray(e, dtype=np.float64)
    mask = np.abs(e) > threshold
    n = int(mask.sum())
    if n == 0:
        return 1.0, 0
    return float(((s[mask] == 1) == (e[mask] > 0)).mean()), n


def thresholds(player_strategy) -> tuple[int, int]:
    """Grid thresholds of a von Neumann betting strategy, as in (x1, x2) = (11, 78).

    After rounding to pure actions, fits the pattern "bet on hands ``< x1``
    and ``>= x2``, check in between" with the fewest mismatching hands
    (smallest ``(x1, x2)`` on ties). For a clean two-sided strategy ``x1``
    is the leading run of bets and ``x2`` the last hand before the trailing
    run; the fit keeps isolated stray actions of noisy strategies from
    moving the boundaries.
    """
    s = np.rint(np.asarray(player_strategy, dtype=np.float64)).astype(int)
    M = len(s)
    ones = np.concatenate([[0], np.cumsum(s)])
    zeros = np.arange(M + 1) - ones
    x1 = np.arange(M + 1)[:, None]
    x2 = np.arange(M + 1)[None, :]
    cost = zeros[x1] + (ones[x2] - ones[x1]) + (zeros[M] - zeros[x2])
    cost = np.where(x2 >= x1, cost, M + 1)
    k = int(np.argmin(cost))
    return k // (M + 1), k % (M + 1)


@dataclass
class Diagnostics:
    e_player: np.ndarray
    e_dealer: np.ndarray
    value_P: float
    value_D: float
    exploitability: float
    dealer_call_mass: float | None = None
    sign_violations: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out = {
            "value_P": self.value_P,
            "value_D": self.value_D,
            "exploitability": self.exploitability,
            "dealer_call_mass": self.dealer_call_mass,
            "sign_violations": self.sign_violations,
        }
        return out


def diagnose(p, q, game: HalfStreetGame, threshold: float = 0.05) -> Diagnostics:
    """All diagnostics for a strategy pair."""
    p, q = _validate(p, game), _validate(q, game)
    if game.kind == "vn":
        from .vn_analytic import solve

        e_p, e_d = e1_vn(q, game.spec), e2_vn(p, game.spec)
        mass = dealer_call_mass(q, solve(game.spec))
    else:
        e_p = e_player_flop(q, game.tables, game.spec)
        e_d = e_dealer_flop(p, game.tables, game.spec)
        mass = None
    vp, vd = game_value(p, q, game)
    violations = {}
    for role, s, e in (("player", p, e_p), ("dealer", q, e_d)):
        mask = np.abs(e) > threshold
        violations[role] = int((mask & ((np.rint(s) == 1) != (e > 0))).sum())
    return Diagnostics(e_p, e_d, vp, vd, exploitability(p, q, game), mass, violations)
