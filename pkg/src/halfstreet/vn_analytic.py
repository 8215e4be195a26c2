"""Closed-form equilibrium of continuous von Neumann poker.

With pot ``P = 2a``, bet ``B`` and ``D = PB + 2(P+B)^2`` the Player bets on
``[0, x1)`` (bluffs) and ``(x2, 1]`` (value), where ``x1 = PB/D`` and
``x2 = (2(P+B)^2 - P^2)/D``. The Dealer folds below ``x1``, calls above
``x2`` and spends call mass ``c = P(P+B)/D`` inside ``(x1, x2)``; the
admissible choice calls exactly on ``(y0, x2)`` with ``y0 = x2 - c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .game import GameSpec


@dataclass(frozen=True)
class VnSolution:
    ante: float
    bet: float
    x1: float
    x2: float
    c: float
    y0: float
    value: float
    exact: bool = False

    def as_floats(self) -> dict[str, float]:
        return {k: float(getattr(self, k)) for k in ("x1", "x2", "c", "y0", "value")}

    def grid_values(self, M: int = 100) -> tuple[int, int, int, int]:
        """Thresholds scaled to an ``M`` grid and rounded, e.g. (11, 78, 22, 56)."""
        return tuple(int(round(float(v) * M)) for v in (self.x1, self.x2, self.c, self.y0))


def solve(ante, bet=None) -> VnSolution:
    """Equilibrium thresholds and the Player's net value per round.

    Accepts a :class:`GameSpec` or ``(ante, bet)``. Integer or rational
    inputs give exact :class:`~fractions.Fraction` results.
    """
    if isinstance(ante, GameSpec):
        ante, bet = ante.ante, ante.bet
    if not (ante > 0 and bet > 0):
        raise ValueError(f"ante and bet must be positive, got ({ante}, {bet})")
    exact = isinstance(ante, Rational) and isinstance(bet, Rational)
    if exact:
        a, B = Fraction(ante), Fraction(bet)
    else:
        a, B = float(ante), float(bet)
    P = 2 * a
    D = P * B + 2 * (P + B) ** 2
    x1 = P * B / D
    x2 = (2 * (P + B) ** 2 - P**2) / D
    c = P * (P + B) / D
    y0 = B * (3 * P + 2 * B) / D
    value = P / 2 * P * B / D
    return VnSolution(ante, bet, x1, x2, c, y0, value, exact)


def player_equilibrium(x, sol: VnSolution):
    """Betting probability at hand strength ``x`` in [0, 1].

    Bets at ``x <= x1`` and ``x > x2``; checks in between.
    """
    x = np.asarray(x, dtype=np.float64)
    out = ((x <= float(sol.x1)) | (x > float(sol.x2))).astype(np.float64)
    return out if out.ndim else float(out)


def dealer_admissible(y, sol: VnSolution):
    """Admissible calling probability: fold below ``y0``, call above."""
    y = np.asarray(y, dtype=np.float64)
    out = (y > float(sol.y0)).astype(np.float64)
    return out if out.ndim else float(out)


def dealer_admissible_cumulative(y, sol: VnSolution):
    """``integral_0^y q(t) dt`` for the admissible Dealer strategy."""
    y = np.asarray(y, dtype=np.float64)
    out = np.maximum(0.0, y - float(sol.y0))
    return out if out.ndim else float(out)


def player_cumulative(x, sol: VnSolution):
    """``integral_0^x p(t) dt`` for the equilibrium Player strategy."""
    x = np.asarray(x, dtype=np.float64)
    x1, x2 = float(sol.x1), float(sol.x2)
    out = np.minimum(x, x1) + np.maximum(0.0, x - x2)
    return out if out.ndim else float(out)


def grid_points(M: int) -> np.ndarray:
    """Cell midpoints ``(k - 1/2)/M`` representing hands ``k = 1..M``."""
    return (np.arange(M) + 0.5) / M


def discretize(sol: VnSolution, M: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Sample the Player equilibrium and the admissible Dealer strategy on ``M`` hands.

    Hand ``k`` covers the cell ``[(k-1)/M, k/M)`` and is sampled at the cell
    midpoint, which keeps the number of betting and calling hands equal to
    the continuous masses rounded to the grid.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    x = grid_points(M)
    return player_equilibrium(x, sol), dealer_admissible(x, sol)
