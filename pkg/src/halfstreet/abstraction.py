"""The 169-class preflop hand grid.

Classes are laid out on the usual 13x13 grid with ranks descending A..2 along
both axes: the diagonal holds pairs, cells above it (row < column) are
suited hands and cells below it are offsuit. ``index = 13 * row + column``.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cards import DECK, card_rank, card_suit

N_CLASSES = 169
N_HANDS = 1326
N_OPPONENT_HANDS = 1225  # C(50, 2)
GRID_RANKS = "AKQJT98765432"


def _row(rank: int) -> int:
    return 14 - rank


def classify(card_a: int, card_b: int) -> int:
    """Class index of a two-card hand; order of the cards does not matter."""
    card_a, card_b = int(card_a), int(card_b)
    if card_a == card_b:
        raise ValueError("a hand needs two distinct cards")
    ra, rb = card_rank(card_a), card_rank(card_b)
    if ra == rb:
        r = _row(ra)
        return 13 * r + r
    hi, lo = _row(max(ra, rb)), _row(min(ra, rb))
    if card_suit(card_a) == card_suit(card_b):
        return 13 * hi + lo
    return 13 * lo + hi


def class_label(i: int) -> str:
    if not 0 <= i < N_CLASSES:
        raise ValueError(f"class index out of range: {i}")
    r, c = divmod(i, 13)
    if r == c:
        return GRID_RANKS[r] * 2
    if r < c:
        return GRID_RANKS[r] + GRID_RANKS[c] + "s"
    return GRID_RANKS[c] + GRID_RANKS[r] + "o"


def parse_label(label: str) -> int:
    """Inverse of :func:`class_label` (``"AKs"``, ``"72o"``, ``"TT"``)."""
    try:
        r1, r2 = GRID_RANKS.index(label[0].upper()), GRID_RANKS.index(label[1].upper())
    except (ValueError, IndexError):
        raise ValueError(f"bad hand label {label!r}") from None
    if r1 == r2 and len(label) == 2:
        return 13 * r1 + r1
    if len(label) != 3 or r1 == r2:
        raise ValueError(f"bad hand label {label!r}")
    hi, lo = min(r1, r2), max(r1, r2)
    kind = label[2].lower()
    if kind == "s":
        return 13 * hi + lo
    if kind == "o":
        return 13 * lo + hi
    raise ValueError(f"bad hand label {label!r}")


LABELS = tuple(class_label(i) for i in range(N_CLASSES))


def is_pair(i: int) -> bool:
    return i // 13 == i % 13


def is_suited(i: int) -> bool:
    return i // 13 < i % 13


def degeneracy(i: int) -> int:
    return 6 if is_pair(i) else 4 if is_suited(i) else 12


@functools.lru_cache(maxsize=1)
def _hands():
    hands = np.array(list(combinations(range(52), 2)), dtype=np.int64)
    cls = np.array([classify(DECK[a], DECK[b]) for a, b in hands], dtype=np.int64)
    masks = (np.uint64(1) << hands[:, 0].astype(np.uint64)) | (np.uint64(1) << hands[:, 1].astype(np.uint64))
    for arr in (hands, cls, masks):
        arr.setflags(write=False)
    return hands, cls, masks


def all_hands() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All 1326 hands as deck-index pairs, their classes, and 52-bit card masks."""
    return _hands()


def combos(i: int) -> np.ndarray:
    """Concrete hands of class ``i`` as deck-index pairs, deterministic order."""
    hands, cls, _ = _hands()
    return hands[cls == i]


def class_prior() -> np.ndarray:
    """h(i): probability of being dealt class i."""
    return np.array([degeneracy(i) for i in range(N_CLASSES)], dtype=np.float64) / N_HANDS


def conditional_counts(i: int, representative: int = 0) -> np.ndarray:
    """Opponent combos per class after removing one concrete hand of class ``i``.

    Entries sum to 1225. ``representative`` picks which concrete hand of the
    class is removed; the result does not depend on it.
    """
    _, cls, masks = _hands()
    rep = combos(i)[representative]
    used = (np.uint64(1) << np.uint64(rep[0])) | (np.uint64(1) << np.uint64(rep[1]))
    ok = (masks & used) == 0
    return np.bincount(cls[ok], minlength=N_CLASSES).astype(np.int64)


def conditional_dist(i: int) -> np.ndarray:
    """h(j|i) for all j as floats."""
    return conditional_counts(i) / N_OPPONENT_HANDS


def conditional_dist_exact(i: int) -> list[Fraction]:
    return [Fraction(int(n), N_OPPONENT_HANDS) for n in conditional_counts(i)]


@functools.lru_cache(maxsize=1)
def _conditional_matrix() -> np.ndarray:
    m = np.stack([conditional_dist(i) for i in range(N_CLASSES)])
    m.setflags(write=False)
    return m


def conditional_matrix() -> np.ndarray:
    """169x169 matrix whose entry (i, j) is h(j|i)."""
    return _conditional_matrix()


def grid(values) -> np.ndarray:
    """Reshape a 169-vector into the 13x13 hand grid."""
    return np.asarray(values).reshape(13, 13)

