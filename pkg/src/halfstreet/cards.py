"""Card encoding and exact five/seven-card hand evaluation.

A card is the integer ``suit_bit + rank_prime`` where the suit bit is one of
256, 512, 1024, 2048 and the rank prime is one of the first thirteen primes
(2 for a deuce up to 41 for an ace). A five-card hand is a flush when the AND
of all ``code >> 8`` values is nonzero; otherwise its strength is determined
by the product of the rank primes alone, which is a collision-free key.

Hand strength is reported as a rank index in ``1..7462`` where 1 is the
ace-high straight flush and 7462 is seven-five-four-three-two offsuit.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import io
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numba import njit

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
SUIT_BITS = (256, 512, 1024, 2048)
SUIT_CHARS = "shcd"
RANK_CHARS = "23456789TJQKA"

# (name, first rank index, last rank index, number of five-card hands)
CATEGORIES = (
    ("Straight Flush", 1, 10, 40),
    ("Four of a Kind", 11, 166, 624),
    ("Full House", 167, 322, 3744),
    ("Flush", 323, 1599, 5108),
    ("Straight", 1600, 1609, 10200),
    ("Three of a Kind", 1610, 2467, 54912),
    ("Two Pair", 2468, 3325, 123552),
    ("Pair", 3326, 6185, 1098240),
    ("High Card", 6186, 7462, 1302540),
)
WORST_RANK = 7462
TABLE_FORMAT_VERSION = "rank-tables/1"


def make_card(rank: int, suit: int) -> int:
    """Encode ``rank`` (2..14, ace high) and ``suit`` (0=s, 1=h, 2=c, 3=d)."""
    if not 2 <= rank <= 14:
        raise ValueError(f"rank must be in 2..14, got {rank}")
    if not 0 <= suit <= 3:
        raise ValueError(f"suit must be in 0..3, got {suit}")
    return SUIT_BITS[suit] + PRIMES[rank - 2]


def card_rank(card: int) -> int:
    return PRIMES.index(card & 255) + 2


def card_suit(card: int) -> int:
    return SUIT_BITS.index(card & 0xF00)


def parse_card(text: str) -> int:
    """``"As"`` -> ace of spades, ``"Td"`` -> ten of diamonds."""
    if len(text) != 2 or text[0].upper() not in RANK_CHARS or text[1].lower() not in SUIT_CHARS:
        raise ValueError(f"cannot parse card {text!r}")
    return make_card(RANK_CHARS.index(text[0].upper()) + 2, SUIT_CHARS.index(text[1].lower()))


def parse_cards(text: str) -> list[int]:
    text = text.replace(" ", "")
    return [parse_card(text[k:k + 2]) for k in range(0, len(text), 2)]


def card_str(card: int) -> str:
    return RANK_CHARS[card_rank(card) - 2] + SUIT_CHARS[card_suit(card)]


# Deck order: index = 4 * (rank - 2) + suit.
DECK = np.array([make_card(r, s) for r in range(2, 15) for s in range(4)], dtype=np.int64)
VALID_CODES = frozenset(int(c) for c in DECK)


def card_index(card: int) -> int:
    return 4 * (card_rank(card) - 2) + card_suit(card)


def _check_cards(cards: Sequence[int], n: int) -> None:
    if len(cards) != n:
        raise ValueError(f"expected {n} cards, got {len(cards)}")
    for c in cards:
        if int(c) not in VALID_CODES:
            raise ValueError(f"invalid card code {c}")
    if len(set(int(c) for c in cards)) != n:
        raise ValueError("duplicate cards in hand")


def is_flush(hand: Sequence[int]) -> bool:
    _check_cards(hand, 5)
    acc = 0xF
    for c in hand:
        acc &= int(c) >> 8
    return acc != 0


# ---------------------------------------------------------------------------
# Table construction


def _prime_product(ranks: Iterable[int]) -> int:
    out = 1
    for r in ranks:
        out *= PRIMES[r - 2]
    return out


def _straights() -> list[tuple[int, ...]]:
    out = [tuple(range(high, high - 5, -1)) for high in range(14, 5, -1)]
    out.append((5, 4, 3, 2, 14))
    return out


def _rank_multisets_in_order() -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Return (flush_hands, nonflush_hands), each strongest first, as rank tuples."""
    desc = list(range(14, 1, -1))
    straights = _straights()
    straight_sets = {frozenset(s) for s in straights}
    distinct5 = [c for c in itertools.combinations(desc, 5) if frozenset(c) not in straight_sets]

    quads = [(q,) * 4 + (k,) for q in desc for k in desc if k != q]
    boats = [(t,) * 3 + (p,) * 2 for t in desc for p in desc if p != t]
    trips = [
        (t,) * 3 + ks
        for t in desc
        for ks in itertools.combinations([r for r in desc if r != t], 2)
    ]
    two_pair = [
        (hi, hi, lo, lo, k)
        for hi, lo in itertools.combinations(desc, 2)
        for k in desc
        if k not in (hi, lo)
    ]
    pairs = [
        (p, p) + ks
        for p in desc
        for ks in itertools.combinations([r for r in desc if r != p], 3)
    ]
    flush_hands = straights + distinct5
    nonflush_hands = quads + boats + straights + trips + two_pair + pairs + distinct5
    return flush_hands, nonflush_hands


@dataclass(frozen=True)
class RankTables:
    """Immutable prime-product lookup tables.

    ``*_keys`` are sorted prime products; ``*_ranks`` the matching rank
    indices. The sorted layout is what the compiled evaluators search.
    """

    flush_keys: np.ndarray
    flush_ranks: np.ndarray
    nonflush_keys: np.ndarray
    nonflush_ranks: np.ndarray

    @property
    def flush_table(self) -> dict[int, int]:
        return dict(zip(self.flush_keys.tolist(), self.flush_ranks.tolist()))

    @property
    def nonflush_table(self) -> dict[int, int]:
        return dict(zip(self.nonflush_keys.tolist(), self.nonflush_ranks.tolist()))

    def triples(self) -> list[tuple[int, int, int]]:
        """(prime_product, rank_index, is_flush) sorted by rank index."""
        rows = [(k, r, 1) for k, r in zip(self.flush_keys.tolist(), self.flush_ranks.tolist())]
        rows += [(k, r, 0) for k, r in zip(self.nonflush_keys.tolist(), self.nonflush_ranks.tolist())]
        return sorted(rows, key=lambda t: (t[1], -t[2]))


def build_tables() -> RankTables:
    """Enumerate every rank multiset per category in strength order."""
    flush_hands, nonflush_hands = _rank_multisets_in_order()
    # Straight flushes take 1..10, flushes follow four-of-a-kind and full houses.
    flush_rank = list(range(1, 11)) + list(range(323, 1600))
    nonflush_rank = list(range(11, 323)) + list(range(1600, 7463))
    assert len(flush_rank) == len(flush_hands) == 1287
    assert len(nonflush_rank) == len(nonflush_hands) == 6175

    def _sorted(hands, ranks):
        keys = np.array([_prime_product(h) for h in hands], dtype=np.int64)
        vals = np.array(ranks, dtype=np.int64)
        order = np.argsort(keys, kind="stable")
        keys, vals = keys[order], vals[order]
        if np.any(np.diff(keys) == 0):
            raise AssertionError("prime product collision")
        return keys, vals

    fk, fr = _sorted(flush_hands, flush_rank)
    nk, nr = _sorted(nonflush_hands, nonflush_rank)
    for arr in (fk, fr, nk, nr):
        arr.setflags(write=False)
    return RankTables(fk, fr, nk, nr)


@functools.lru_cache(maxsize=1)
def get_tables() -> RankTables:
    return build_tables()


def tables_csv(tables: RankTables | None = None) -> str:
    tables = tables or get_tables()
    buf = io.StringIO()
    buf.write(f"# {TABLE_FORMAT_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["prime_product", "rank_index", "is_flush"])
    w.writerows(tables.triples())
    return buf.getvalue()


def save_rank_tables(path: str | Path, tables: RankTables | None = None) -> str:
    """Write the tables as CSV and return the sha256 of the written bytes."""
    data = tables_csv(tables).encode()
    Path(path).write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def load_rank_tables(path: str | Path) -> RankTables:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != f"# {TABLE_FORMAT_VERSION}":
        raise ValueError(f"{path}: not a {TABLE_FORMAT_VERSION} file")
    rows = list(csv.reader(lines[2:]))
    f = sorted((int(k), int(r)) for k, r, fl in rows if fl == "1")
    n = sorted((int(k), int(r)) for k, r, fl in rows if fl == "0")
    return RankTables(
        np.array([k for k, _ in f], dtype=np.int64),
        np.array([r for _, r in f], dtype=np.int64),
        np.array([k for k, _ in n], dtype=np.int64),
        np.array([r for _, r in n], dtype=np.int64),
    )


def category(rank_index: int) -> str:
    for name, lo, hi, _ in CATEGORIES:
        if lo <= rank_index <= hi:
            return name
    raise ValueError(f"rank index out of range: {rank_index}")


# ---------------------------------------------------------------------------
# Compiled evaluators. Tables are passed explicitly so kernels stay pure.


@njit(cache=True, inline="always")
def _lookup(keys, ranks, q):
    return ranks[np.searchsorted(keys, q)]


@njit(cache=True)
def _eval5_codes(c0, c1, c2, c3, c4, fk, fr, nk, nr):
    q = (c0 & 255) * (c1 & 255) * (c2 & 255) * (c3 & 255) * (c4 & 255)
    if (c0 & c1 & c2 & c3 & c4) >> 8:
        return _lookup(fk, fr, q)
    return _lookup(nk, nr, q)


@njit(cache=True)
def _eval7_codes(c, fk, fr, nk, nr):
    """Best rank over the 21 five-card subsets of the 7 codes in ``c``."""
    best = 7463
    for a in range(3):
        for b in range(a + 1, 4):
            for d in range(b + 1, 5):
                for e in range(d + 1, 6):
                    for f in range(e + 1, 7):
                        r = _eval5_codes(c[a], c[b], c[d], c[e], c[f], fk, fr, nk, nr)
                        if r < best:
                            best = r
    return best


@njit(cache=True)
def _eval_rows(hands, fk, fr, nk, nr):
    n, k = hands.shape
    out = np.empty(n, dtype=np.int16)
    for i in range(n):
        if k == 5:
            out[i] = _eval5_codes(hands[i, 0], hands[i, 1], hands[i, 2], hands[i, 3], hands[i, 4], fk, fr, nk, nr)
        else:
            best = 7463
            # generic best-of-k over 5-subsets (k = 6 or 7)
            for a in range(k - 4):
                for b in range(a + 1, k - 3):
                    for d in range(b + 1, k - 2):
                        for e in range(d + 1, k - 1):
                            for f in range(e + 1, k):
                                r = _eval5_codes(hands[i, a], hands[i, b], hands[i, d], hands[i, e], hands[i, f],
                                                 fk, fr, nk, nr)
                                if r < best:
                                    best = r
            out[i] = best
    return out


@njit(cache=True)
def _census(deck, fk, fr, nk, nr):
    out = np.empty(2598960, dtype=np.int16)
    t = 0
    for a in range(48):
        for b in range(a + 1, 49):
            for c in range(b + 1, 50):
                for d in range(c + 1, 51):
                    for e in range(d + 1, 52):
                        out[t] = _eval5_codes(deck[a], deck[b], deck[c], deck[d], deck[e], fk, fr, nk, nr)
                        t += 1
    return out


def _tables_args(tables: RankTables | None):
    t = tables or get_tables()
    return t.flush_keys, t.flush_ranks, t.nonflush_keys, t.nonflush_ranks


def eval5(hand: Sequence[int], tables: RankTables | None = None) -> int:
    """Rank index (1 = best) of a five-card hand."""
    _check_cards(hand, 5)
    c = [int(x) for x in hand]
    return int(_eval5_codes(c[0], c[1], c[2], c[3], c[4], *_tables_args(tables)))


def eval7(cards: Sequence[int], tables: RankTables | None = None) -> int:
    """Rank index of the best five-card hand contained in seven cards."""
    _check_cards(cards, 7)
    return int(_eval7_codes(np.asarray(cards, dtype=np.int64), *_tables_args(tables)))


def eval_many(hands: np.ndarray, tables: RankTables | None = None) -> np.ndarray:
    """Vectorised evaluation of an ``(n, k)`` array of codes, ``k`` in 5..7.

    No duplicate checking is done here.
    """
    hands = np.ascontiguousarray(hands, dtype=np.int64)
    if hands.ndim != 2 or not 5 <= hands.shape[1] <= 7:
        raise ValueError("hands must have shape (n, 5..7)")
    return _eval_rows(hands, *_tables_args(tables))


def enumerate_five_card_ranks(tables: RankTables | None = None) -> np.ndarray:
    """Rank index of each of the C(52, 5) hands, in lexicographic deck order."""
    return _census(DECK, *_tables_args(tables))
