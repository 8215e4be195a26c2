"""Genetic-algorithm training of pure-strategy populations.

Each member carries binary chromosomes (bet/check per hand for the Player,
call/fold per hand for the Dealer). A generation plays ``R`` rounds of
random pairings, scores every member, keeps the best fraction ``alpha`` and
refills the population with their offspring. The population average over
the survivors is read as a mixed strategy.

Two fitness modes are supported:

* ``bankroll``: separate Player and Dealer populations; fitness is the final
  bankroll over the starting bankroll, and parents are drawn in proportion
  to it.
* ``negative_squared_loss``: unified Participants holding both chromosomes,
  paired with random roles; fitness is minus the square of the chips lost in
  losing rounds, and parents are drawn uniformly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from numba import njit

from .game import HalfStreetGame, deal_batch

FITNESS_MODES = ("bankroll", "negative_squared_loss")


@dataclass(frozen=True)
class GaConfig:
    N: int = 1000
    T: int = 200
    R: int = 2000
    alpha: float = 0.1
    pi: float = 1e-6
    B0: float = 1e4
    fitness_mode: str = "bankroll"
    seed: int = 0

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"N must be a positive even number, got {self.N}")
        if self.T < 1 or self.R < 1:
            raise ValueError("T and R must be at least 1")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 <= self.pi <= 1:
            raise ValueError(f"pi must lie in [0, 1], got {self.pi}")
        if self.B0 <= 0:
            raise ValueError("B0 must be positive")
        if self.fitness_mode not in FITNESS_MODES:
            raise ValueError(f"fitness_mode must be one of {FITNESS_MODES}, got {self.fitness_mode!r}")

    @property
    def n_keep(self) -> int:
        return min(self.N, math.ceil(self.alpha * self.N - 1e-9))

    def to_dict(self) -> dict:
        return asdict(self)


PRESETS = {
    "vn_full": GaConfig(N=5000, T=1000, R=10_000, alpha=0.1, pi=1e-6),
    "vn_desk": GaConfig(N=1000, T=200, R=2000, alpha=0.1, pi=1e-6),
    "flop_full": GaConfig(N=2000, T=1000, R=10_000, alpha=0.3, pi=1e-4, fitness_mode="negative_squared_loss"),
    "flop_desk": GaConfig(N=400, T=100, R=1000, alpha=0.3, pi=1e-4, fitness_mode="negative_squared_loss"),
}


def preset(name: str, **overrides) -> GaConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return replace(PRESETS[name], **overrides)


@dataclass
class Populations:
    """Chromosomes and fitness of one generation.

    In bankroll mode row ``k`` of ``player`` and of ``dealer`` are unrelated
    members of two populations. In loss mode row ``k`` of both arrays is
    the same Participant and the two fitness vectors coincide.
    """

    player: np.ndarray  # (N, M) uint8
    dealer: np.ndarray  # (N, M) uint8
    mode: str
    fitness_player: np.ndarray | None = None
    fitness_dealer: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.player.shape[0]

    @property
    def M(self) -> int:
        return self.player.shape[1]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def init_population(cfg: GaConfig, M: int, rng: np.random.Generator | None = None) -> Populations:
    """Random chromosomes, each gene i.i.d. uniform on {0, 1}."""
    rng = make_rng(cfg.seed) if rng is None else rng
    player = rng.integers(0, 2, size=(cfg.N, M), dtype=np.uint8)
    dealer = rng.integers(0, 2, size=(cfg.N, M), dtype=np.uint8)
    return Populations(player, dealer, cfg.fitness_mode)


# ---------------------------------------------------------------------------
# Playing


@njit(cache=True)
def _bankroll_rounds(P, D, perm, pi, dj, sign, a, b, bank_p, bank_d):
    n_rounds, N = perm.shape
    g = 0
    for r in range(n_rounds):
        for k in range(N):
            d = perm[r, k]
            i = pi[g]
            j = dj[g]
            if P[k, i] == 0:
                won = a * sign[g]
            elif D[d, j] == 0:
                won = a
            else:
                won = (a + b) * sign[g]
            bank_p[k] += won
            bank_d[d] -= won
            g += 1


@njit(cache=True)
def _loss_rounds(P, D, perm, coin, pi, dj, sign, a, b, loss, net_p, net_d):
    n_rounds, N = perm.shape
    g = 0
    for r in range(n_rounds):
        for m in range(N // 2):
            x = perm[r, 2 * m]
            y = perm[r, 2 * m + 1]
            if coin[r, m] >= 0.5:
                x, y = y, x
            i = pi[g]
            j = dj[g]
            if P[x, i] == 0:
                won = a * sign[g]
            elif D[y, j] == 0:
                won = a
            else:
                won = (a + b) * sign[g]
            if won < 0:
                loss[x] -= won
            elif won > 0:
                loss[y] += won
            net_p[x] += won
            net_d[y] -= won
            g += 1


def _round_chunks(R: int, games_per_round: int, budget: int = 1 << 21):
    step = max(1, budget // max(games_per_round, 1))
    for start in range(0, R, step):
        yield min(step, R - start)


def play_generation(pops: Populations, game: HalfStreetGame, cfg: GaConfig, rng: np.random.Generator) -> Populations:
    """Play ``cfg.R`` rounds from fresh bankrolls and set the fitness fields.

    Randomness is drawn from ``rng`` in a fixed order (pairings, then roles,
    then deals) per chunk of rounds, so a run is a pure function of the seed.
    """
    N, a, b = pops.N, float(game.ante), float(game.bet)
    if pops.M != game.M:
        raise ValueError(f"chromosomes have {pops.M} genes, game has {game.M} hands")
    if pops.mode == "bankroll":
        bank_p = np.full(N, float(cfg.B0))
        bank_d = np.full(N, float(cfg.B0))
        for n in _round_chunks(cfg.R, N):
            perm = rng.permuted(np.tile(np.arange(N), (n, 1)), axis=1)
            i, j, sign = deal_batch(game, rng, n * N)
            _bankroll_rounds(pops.player, pops.dealer, perm, i, j, sign.astype(np.float64), a, b, bank_p, bank_d)
        pops.fitness_player = bank_p / cfg.B0
        pops.fitness_dealer = bank_d / cfg.B0
    else:
        loss = np.zeros(N)
        net_p = np.zeros(N)
        net_d = np.zeros(N)
        for n in _round_chunks(cfg.R, N // 2):
            perm = rng.permuted(np.tile(np.arange(N), (n, 1)), axis=1)
            coin = rng.random((n, N // 2))
            i, j, sign = deal_batch(game, rng, n * (N // 2))
            _loss_rounds(pops.player, pops.dealer, perm, coin, i, j, sign.astype(np.float64), a, b,
                         loss, net_p, net_d)
        fit = -(loss**2)
        pops.fitness_player = fit
        pops.fitness_dealer = fit.copy()
    return pops


# ---------------------------------------------------------------------------
# Selection and breeding


def _ranking(fitness: np.ndarray) -> np.ndarray:
    return np.argsort(-fitness, kind="stable")


def _breed(genes: list[np.ndarray], fitness: np.ndarray, keep: np.ndarray, n_children: int, weighted: bool,
           pi: float, rng: np.random.Generator) -> list[np.ndarray]:
    """Offspring for each chromosome array in ``genes``, sharing parents."""
    K = len(keep)
    f = fitness[keep]
    if K < 2:
        first = second = np.zeros(n_children, dtype=np.int64)
    elif weighted:
        w = np.maximum(f, 1e-300)
        first = rng.choice(K, size=n_children, p=w / w.sum())
        second = np.empty(n_children, dtype=np.int64)
        for c in range(n_children):
            q = w.copy()
            q[first[c]] = 0.0
            second[c] = rng.choice(K, p=q / q.sum())
    else:
        first = rng.integers(K, size=n_children)
        second = (first + rng.integers(1, K, size=n_children)) % K
    if weighted and K >= 2:
        w1, w2 = np.maximum(f[first], 0.0), np.maximum(f[second], 0.0)
        tot = w1 + w2
        p_first = np.where(tot > 0, w1 / np.where(tot > 0, tot, 1.0), 0.5)
    else:
        p_first = np.full(n_children, 0.5)
    out = []
    for arr in genes:
        g1, g2 = arr[keep[first]], arr[keep[second]]
        M = arr.shape[1]
        flip = rng.random((n_children, M)) < pi
        take_first = rng.random((n_children, M)) < p_first[:, None]
        child = np.where(g1 == g2, g1 ^ flip.astype(np.uint8), np.where(take_first, g1, g2))
        out.append(np.concatenate([arr[keep], child.astype(np.uint8)]))
    return out


def select_and_breed(pops: Populations, cfg: GaConfig, rng: np.random.Generator) -> Populations:
    """Keep the top ``ceil(alpha N)`` of each population and refill to ``N``.

    Parents are two distinct survivors. Equal parent genes are copied and
    flipped with probability ``pi``; unequal genes come from one parent,
    chosen in proportion to fitness (bankroll) or uniformly (loss mode).
    """
    if pops.fitness_player is None:
        raise ValueError("fitness has not been computed")
    K, N = cfg.n_keep, pops.N
    n_children = N - K
    if pops.mode == "bankroll":
        keep_p = _ranking(pops.fitness_player)[:K]
        keep_d = _ranking(pops.fitness_dealer)[:K]
        (player,) = _breed([pops.player], pops.fitness_player, keep_p, n_children, True, cfg.pi, rng)
        (dealer,) = _breed([pops.dealer], pops.fitness_dealer, keep_d, n_children, True, cfg.pi, rng)
    else:
        keep = _ranking(pops.fitness_player)[:K]
        player, dealer = _breed([pops.player, pops.dealer], pops.fitness_player, keep, n_children, False,
                                cfg.pi, rng)
    return Populations(player, dealer, pops.mode)


def population_strategy(genes: np.ndarray, fitness: np.ndarray | None, alpha: float) -> np.ndarray:
    """Per-gene mean over the top ``alpha`` fraction (all members when ``fitness`` is None)."""
    genes = np.asarray(genes)
    if fitness is None:
        return genes.mean(axis=0)
    k = min(len(genes), math.ceil(alpha * len(genes) - 1e-9))
    return genes[_ranking(np.asarray(fitness))[:k]].mean(axis=0)


def _top_mean(fitness: np.ndarray, k: int) -> float:
    return float(np.sort(fitness)[::-1][:k].mean())


@dataclass
class EvolveResult:
    W_P: np.ndarray
    W_D: np.ndarray
    fitness_series: np.ndarray  # (T, 3): generation, player, dealer
    config: GaConfig
    final: Populations


def evolve(cfg: GaConfig, game: HalfStreetGame, progress=None) -> EvolveResult:
    """Run ``cfg.T`` generations and return the averaged survivor strategies.

    The fitness series holds, per generation, the mean fitness of the top
    ``alpha`` fraction of each role; in loss mode both columns describe the
    same Participants.
    """
    rng = make_rng(cfg.seed)
    pops = init_population(cfg, game.M, rng)
    K = cfg.n_keep
    series = np.zeros((cfg.T, 3))
    for t in range(cfg.T):
        play_generation(pops, game, cfg, rng)
        series[t] = (t + 1, _top_mean(pops.fitness_player, K), _top_mean(pops.fitness_dealer, K))
        if progress is not None:
            progress(t + 1, series[t])
        if t < cfg.T - 1:
            pops = select_and_breed(pops, cfg, rng)
    W_P = population_strategy(pops.player, pops.fitness_player, cfg.alpha)
    W_D = population_strategy(pops.dealer, pops.fitness_dealer, cfg.alpha)
    return EvolveResult(W_P, W_D, series, cfg, pops)
