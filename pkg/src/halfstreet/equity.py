"""Win/draw probabilities between hand classes at showdown.

``w[i, j]`` is the probability that class ``i`` makes the better hand against
class ``j`` and ``d[i, j]`` the probability of a tie. Every concrete,
non-conflicting pair of hole hands of the two classes is weighted equally, as
is every board drawn from the remaining 48 cards.

Exact tables for the three-card board are built by visiting each flop once per
suit-isomorphism class (1755 of them), weighted by the orbit size, and
counting wins and ties for all hand pairs on it. Integer counts are kept so
``w + w.T + d == 1`` holds exactly in rational arithmetic.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from . import abstraction
from .abstraction import N_CLASSES
from .cards import DECK, _eval5_codes, _eval7_codes, get_tables

FORMAT_VERSION = "flop-equity/1"
MODES = ("exact", "monte_carlo")
DEFAULT_SAMPLES = 10**6
_SUIT_PERMS = np.array(list(itertools.permutations(range(4))), dtype=np.int64)


class EquityFileError(Exception):
    """Base class for equity file problems."""


class EquityFileMissing(EquityFileError, FileNotFoundError):
    pass


class EquityVersionError(EquityFileError):
    pass


class EquityChecksumError(EquityFileError):
    pass


class EquityFormatError(EquityFileError):
    pass


@dataclass
class EquityTables:
    w: np.ndarray
    d: np.ndarray
    board_size: int
    mode: str
    seed: int | None = None
    samples: int | None = None
    h: np.ndarray = field(default_factory=abstraction.class_prior)
    hcond: np.ndarray = field(default_factory=lambda: np.array(abstraction.conditional_matrix()))
    max_stderr: float | None = None
    # exact mode only: integer outcome counts (wins of row class, ties, total)
    counts: tuple[np.ndarray, np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def W(self) -> np.ndarray:
        """W(i) = sum_j h(j|i) w(i|j)."""
        return (self.hcond * self.w).sum(axis=1)

    @property
    def D(self) -> np.ndarray:
        return (self.hcond * self.d).sum(axis=1)

    @property
    def L(self) -> np.ndarray:
        """Losing mass sum_j h(j|i) w(j|i)."""
        return (self.hcond * self.w.T).sum(axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquityTables):
            return NotImplemented
        return (
            (self.board_size, self.mode, self.seed, self.samples)
            == (other.board_size, other.mode, other.seed, other.samples)
            and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ("w", "d", "h", "hcond"))
        )


def _check_mode(board_size: int, mode: str, samples: int | None) -> None:
    if board_size not in (3, 5):
        raise ValueError(f"board_size must be 3 or 5, got {board_size}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "monte_carlo" and (samples is None or int(samples) < 1):
        raise ValueError("monte_carlo mode needs a positive sample count")


# ---------------------------------------------------------------------------
# Suit symmetry helpers


def _permute(cards: np.ndarray, perm: np.ndarray) -> np.ndarray:
    return 4 * (cards // 4) + perm[cards % 4]


def canonical_flops() -> tuple[np.ndarray, np.ndarray]:
    """Suit-canonical three-card boards (deck indices) and their orbit sizes."""
    boards = np.array(list(itertools.combinations(range(52), 3)), dtype=np.int64)
    best = None
    for perm in _SUIT_PERMS:
        b = np.sort(_permute(boards, perm), axis=1)
        key = (b[:, 0] * 52 + b[:, 1]) * 52 + b[:, 2]
        best = key if best is None else np.minimum(best, key)
    keys, weights = np.unique(best, return_counts=True)
    canon = np.stack([keys // 2704, (keys // 52) % 52, keys % 52], axis=1)
    return canon, weights.astype(np.int64)


def _canonical_hand_pairs(hands_a: np.ndarray, hands_b: np.ndarray):
    """Group non-conflicting (hand_a, hand_b) pairs into suit orbits."""
    orbits: dict[tuple, int] = {}
    rep: dict[tuple, tuple] = {}
    for ha in hands_a:
        for hb in hands_b:
            if len({*ha.tolist(), *hb.tolist()}) < 4:
                continue
            key = min(
                (tuple(sorted(_permute(ha, p).tolist())), tuple(sorted(_permute(hb, p).tolist())))
                for p in _SUIT_PERMS
            )
            orbits[key] = orbits.get(key, 0) + 1
            rep.setdefault(key, (tuple(ha.tolist()), tuple(hb.tolist())))
    keys = sorted(orbits)
    return [rep[k] for k in keys], np.array([orbits[k] for k in keys], dtype=np.int64)


# ---------------------------------------------------------------------------
# Kernels


@njit(cache=True)
def _flop_counts(boards, weights, hands, hand_cls, masks, deck, fk, fr, nk, nr):
    n_hands = hands.shape[0]
    wins = np.zeros((169, 169), dtype=np.int64)
    ties = np.zeros((169, 169), dtype=np.int64)
    total = np.zeros((169, 169), dtype=np.int64)
    ranks = np.empty(n_hands, dtype=np.int64)
    for b in range(boards.shape[0]):
        b0, b1, b2 = boards[b, 0], boards[b, 1], boards[b, 2]
        bmask = (np.uint64(1) << np.uint64(b0)) | (np.uint64(1) << np.uint64(b1)) | (np.uint64(1) << np.uint64(b2))
        for h in range(n_hands):
            if masks[h] & bmask:
                ranks[h] = -1
            else:
                ranks[h] = _eval5_codes(deck[hands[h, 0]], deck[hands[h, 1]], deck[b0], deck[b1], deck[b2],
                                        fk, fr, nk, nr)
        wt = weights[b]
        for h1 in range(n_hands):
            r1 = ranks[h1]
            if r1 < 0:
                continue
            c1 = hand_cls[h1]
            m1 = masks[h1]
            for h2 in range(h1 + 1, n_hands):
                r2 = ranks[h2]
                if r2 < 0 or (masks[h2] & m1):
                    continue
                c2 = hand_cls[h2]
                total[c1, c2] += wt
                total[c2, c1] += wt
                if r1 < r2:
                    wins[c1, c2] += wt
                elif r2 < r1:
                    wins[c2, c1] += wt
                else:
                    ties[c1, c2] += wt
                    ties[c2, c1] += wt
    return wins, ties, total


@njit(cache=True)
def _matchup_counts(hole_a, hole_b, board_size, deck, fk, fr, nk, nr):
    """Enumerate all boards from the 48 unseen cards; count (win, lose, tie)."""
    rest = np.empty(48, dtype=np.int64)
    t = 0
    for k in range(52):
        if k != hole_a[0] and k != hole_a[1] and k != hole_b[0] and k != hole_b[1]:
            rest[t] = deck[k]
            t += 1
    ca = np.empty(7, dtype=np.int64)
    cb = np.empty(7, dtype=np.int64)
    ca[0], ca[1] = deck[hole_a[0]], deck[hole_a[1]]
    cb[0], cb[1] = deck[hole_b[0]], deck[hole_b[1]]
    idx = np.arange(board_size)
    win = 0
    lose = 0
    tie = 0
    while True:
        if board_size == 3:
            ra = _eval5_codes(ca[0], ca[1], rest[idx[0]], rest[idx[1]], rest[idx[2]], fk, fr, nk, nr)
            rb = _eval5_codes(cb[0], cb[1], rest[idx[0]], rest[idx[1]], rest[idx[2]], fk, fr, nk, nr)
        else:
            for s in range(5):
                ca[2 + s] = rest[idx[s]]
                cb[2 + s] = rest[idx[s]]
            ra = _eval7_codes(ca, fk, fr, nk, nr)
            rb = _eval7_codes(cb, fk, fr, nk, nr)
        if ra < rb:
            win += 1
        elif rb < ra:
            lose += 1
        else:
            tie += 1
        # next combination in lexicographic order
        s = board_size - 1
        while s >= 0 and idx[s] == 48 - board_size + s:
            s -= 1
        if s < 0:
            break
        idx[s] += 1
        for u in range(s + 1, board_size):
            idx[u] = idx[u - 1] + 1
    return win, lose, tie


def _kernel_tables():
    t = get_tables()
    return t.flush_keys, t.flush_ranks, t.nonflush_keys, t.nonflush_ranks


# ---------------------------------------------------------------------------
# Monte Carlo sampling


def _pair_rng(seed: int, i: int, j: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i, j])))


def sample_deals(rng: np.random.Generator, combos_a: np.ndarray, combos_b: np.ndarray, n: int, board_size: int):
    """Uniform non-conflicting hole hands of two classes plus a uniform board."""
    ia = rng.integers(len(combos_a), size=n)
    ib = rng.integers(len(combos_b), size=n)
    ha, hb = combos_a[ia], combos_b[ib]
    while True:
        bad = (ha[:, :, None] == hb[:, None, :]).any(axis=(1, 2))
        if not bad.any():
            break
        ib[bad] = rng.integers(len(combos_b), size=int(bad.sum()))
        hb = combos_b[ib]
    used = np.concatenate([ha, hb], axis=1)
    board = np.empty((n, board_size), dtype=np.int64)
    for s in range(board_size):
        col = rng.integers(52, size=n)
        while True:
            bad = (col[:, None] == used).any(axis=1)
            if not bad.any():
                break
            col[bad] = rng.integers(52, size=int(bad.sum()))
        board[:, s] = col
        used = np.concatenate([used, col[:, None]], axis=1)
    return ha, hb, board


@njit(cache=True)
def _mc_kernel(u, combos_a, combos_b, compat, compat_n, board_size, deck, fk, fr, nk, nr):
    """Counts over deals drawn from ``u`` (one row of ``2 + board_size`` uniforms per deal).

    Hand ``a`` is uniform over its class, ``b`` uniform over the combos not
    sharing a card with it (the same number for every ``a`` by suit
    symmetry, so the pair is uniform), and the board is a partial
    Fisher-Yates shuffle of the 48 remaining cards.
    """
    rest = np.empty(52, dtype=np.int64)
    ca = np.empty(7, dtype=np.int64)
    cb = np.empty(7, dtype=np.int64)
    win = 0
    lose = 0
    tie = 0
    na = combos_a.shape[0]
    for t in range(u.shape[0]):
        ia = min(int(u[t, 0] * na), na - 1)
        nb = compat_n[ia]
        ib = compat[ia, min(int(u[t, 1] * nb), nb - 1)]
        a0, a1 = combos_a[ia, 0], combos_a[ia, 1]
        b0, b1 = combos_b[ib, 0], combos_b[ib, 1]
        n = 0
        for k in range(52):
            if k != a0 and k != a1 and k != b0 and k != b1:
                rest[n] = k
                n += 1
        for s in range(board_size):
            r = s + min(int(u[t, 2 + s] * (48 - s)), 47 - s)
            rest[s], rest[r] = rest[r], rest[s]
        ca[0], ca[1] = deck[a0], deck[a1]
        cb[0], cb[1] = deck[b0], deck[b1]
        if board_size == 3:
            x, y, z = deck[rest[0]], deck[rest[1]], deck[rest[2]]
            ra = _eval5_codes(ca[0], ca[1], x, y, z, fk, fr, nk, nr)
            rb = _eval5_codes(cb[0], cb[1], x, y, z, fk, fr, nk, nr)
        else:
            for s in range(5):
                ca[2 + s] = deck[rest[s]]
                cb[2 + s] = deck[rest[s]]
            ra = _eval7_codes(ca, fk, fr, nk, nr)
            rb = _eval7_codes(cb, fk, fr, nk, nr)
        if ra < rb:
            win += 1
        elif rb < ra:
            lose += 1
        else:
            tie += 1
    return win, lose, tie


def _compatible(combos_a: np.ndarray, combos_b: np.ndarray):
    clash = (combos_a[:, None, :, None] == combos_b[None, :, None, :]).any(axis=(2, 3))
    ok = ~clash
    counts = ok.sum(axis=1)
    idx = np.zeros((len(combos_a), len(combos_b)), dtype=np.int64)
    for a in range(len(combos_a)):
        nz = np.flatnonzero(ok[a])
        idx[a, : len(nz)] = nz
    return idx, counts.astype(np.int64)


def _mc_matchup(i: int, j: int, board_size: int, samples: int, seed: int, chunk: int = 1 << 18):
    rng = _pair_rng(seed, i, j)
    ca, cb = abstraction.combos(i), abstraction.combos(j)
    compat, compat_n = _compatible(ca, cb)
    win = lose = tie = 0
    left = samples
    while left > 0:
        n = min(chunk, left)
        u = rng.random((n, 2 + board_size))
        a, b, c = _mc_kernel(u, ca, cb, compat, compat_n, board_size, DECK, *_kernel_tables())
        win, lose, tie = win + a, lose + b, tie + c
        left -= n
    return win, lose, tie


# ---------------------------------------------------------------------------
# Public API


def matchup_counts(i: int, j: int, board_size: int = 3) -> tuple[int, int, int, int]:
    """Exact (wins of i, wins of j, ties, total) over all hole pairs and boards."""
    _check_mode(board_size, "exact", None)
    reps, weights = _canonical_hand_pairs(abstraction.combos(i), abstraction.combos(j))
    win = lose = tie = 0
    args = _kernel_tables()
    for (ha, hb), wt in zip(reps, weights):
        a, b, c = _matchup_counts(np.array(ha), np.array(hb), board_size, DECK, *args)
        win += wt * a
        lose += wt * b
        tie += wt * c
    return int(win), int(lose), int(tie), int(win + lose + tie)


def compute_matchup(
    i: int,
    j: int,
    board_size: int = 3,
    mode: str = "exact",
    samples: int | None = None,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Return (w(i|j), w(j|i), d(i|j)) at showdown.

    ``board_size`` 3 scores the best hand of 2+3 cards, 5 the best five of
    2+5. In ``monte_carlo`` mode ``samples`` random deals are drawn from a
    Philox stream keyed by ``(seed, min(i, j), max(i, j))``.
    """
    if mode == "monte_carlo" and samples is None:
        samples = DEFAULT_SAMPLES
    _check_mode(board_size, mode, samples)
    if not (0 <= i < N_CLASSES and 0 <= j < N_CLASSES):
        raise ValueError("class index out of range")
    if mode == "exact":
        win, lose, tie, total = matchup_counts(i, j, board_size)
        return win / total, lose / total, tie / total
    lo, hi = min(i, j), max(i, j)
    win, lose, tie = _mc_matchup(lo, hi, board_size, int(samples), seed)
    if lo != i:
        win, lose = lose, win
    return win / samples, lose / samples, tie / samples


def _exact_flop_tables() -> EquityTables:
    hands, cls, masks = abstraction.all_hands()
    boards, weights = canonical_flops()
    wins, ties, total = _flop_counts(boards, weights, hands, cls, masks, DECK, *_kernel_tables())
    return EquityTables(
        w=wins / total, d=ties / total, board_size=3, mode="exact", counts=(wins, ties, total),
    )


def build_equity_tables(
    board_size: int = 3, mode: str = "exact", samples: int | None = None, seed: int = 0
) -> EquityTables:
    """Full 169x169 tables.

    Exact mode is available for the three-card board only (about half a
    minute single-threaded); five-card boards need ``monte_carlo``.
    """
    if mode == "monte_carlo" and samples is None:
        samples = DEFAULT_SAMPLES
    _check_mode(board_size, mode, samples)
    if mode == "exact":
        if board_size != 3:
            raise ValueError("exact full tables are only supported for board_size=3")
        return _exact_flop_tables()

    w = np.zeros((N_CLASSES, N_CLASSES))
    d = np.zeros((N_CLASSES, N_CLASSES))
    for i in range(N_CLASSES):
        for j in range(i, N_CLASSES):
            win, lose, tie = _mc_matchup(i, j, board_size, int(samples), seed)
            if i == j:
                win = lose = (win + lose) / 2
            w[i, j], w[j, i] = win / samples, lose / samples
            d[i, j] = d[j, i] = tie / samples
    stderr = float(np.sqrt(np.maximum(w * (1 - w), d * (1 - d)) / samples).max())
    return EquityTables(w=w, d=d, board_size=board_size, mode="monte_carlo", seed=seed,
                        samples=int(samples), max_stderr=stderr)


# ---------------------------------------------------------------------------
# Persistence


def _checksum(meta: dict, arrays: dict[str, np.ndarray]) -> str:
    hsh = hashlib.sha256(json.dumps(meta, sort_keys=True).encode())
    for name in sorted(arrays):
        hsh.update(name.encode())
        hsh.update(np.ascontiguousarray(arrays[name], dtype="<f8").tobytes())
    return "sha256:" + hsh.hexdigest()


def _meta(t: EquityTables) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "board_size": t.board_size,
        "mode": t.mode,
        "seed": t.seed,
        "samples": t.samples,
        "max_stderr": t.max_stderr,
    }


def save_tables(t: EquityTables, path: str | Path) -> None:
    arrays = {"w": t.w, "d": t.d, "h": t.h, "hcond": t.hcond}
    meta = _meta(t)
    doc = dict(meta)
    doc["checksum"] = _checksum(meta, arrays)
    doc["labels"] = list(abstraction.LABELS)
    for name, arr in arrays.items():
        doc[name] = np.asarray(arr, dtype=np.float64).tolist()
    Path(path).write_text(json.dumps(doc, indent=None, separators=(",", ":")) + "\n")


def load_tables(path: str | Path) -> EquityTables:
    path = Path(path)
    if not path.exists():
        raise EquityFileMissing(f"equity file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise EquityFormatError(f"{path}: not a valid equity file ({exc})") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise EquityFormatError(f"{path}: missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise EquityVersionError(f"{path}: expected {FORMAT_VERSION}, found {doc['format_version']}")
    try:
        arrays = {k: np.array(doc[k], dtype=np.float64) for k in ("w", "d", "h", "hcond")}
        meta = {k: doc[k] for k in ("format_version", "board_size", "mode", "seed", "samples", "max_stderr")}
        checksum = doc["checksum"]
    except (KeyError, ValueError, TypeError) as exc:
        raise EquityFormatError(f"{path}: malformed equity file ({exc})") from None
    if _checksum(meta, arrays) != checksum:
        raise EquityChecksumError(f"{path}: checksum mismatch")
    for k in ("w", "d", "hcond"):
        if arrays[k].shape != (N_CLASSES, N_CLASSES):
            raise EquityFormatError(f"{path}: {k} has shape {arrays[k].shape}")
    return EquityTables(
        w=arrays["w"], d=arrays["d"], board_size=meta["board_size"], mode=meta["mode"],
        seed=meta["seed"], samples=meta["samples"], h=arrays["h"], hcond=arrays["hcond"],
        max_stderr=meta["max_stderr"],
    )
