from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from halfstreet import abstraction as ab
from halfstreet.cards import DECK, parse_card

classes = st.integers(0, ab.N_CLASSES - 1)


def test_classify_examples():
    assert ab.class_label(ab.classify(parse_card("As"), parse_card("Ah"))) == "AA"
    assert ab.class_label(ab.classify(parse_card("As"), parse_card("Ks"))) == "AKs"
    assert ab.class_label(ab.classify(parse_card("As"), parse_card("Kh"))) == "AKo"
    assert ab.classify(parse_card("7d"), parse_card("2c")) == ab.classify(parse_card("2c"), parse_card("7d"))
    with pytest.raises(ValueError):
        ab.classify(parse_card("As"), parse_card("As"))


def test_grid_layout():
    assert ab.parse_label("AA") == 0
    assert ab.parse_label("AKs") == 1
    assert ab.parse_label("AKo") == 13
    assert ab.parse_label("22") == 168
    assert sum(ab.is_pair(i) for i in range(169)) == 13
    assert sum(ab.is_suited(i) for i in range(169)) == 78


def test_labels():
    assert len(set(ab.LABELS)) == 169
    assert ab.LABELS[ab.parse_label("JTs")] == "JTs"
    assert ab.class_label(ab.parse_label("72o")) == "72o"
    for bad in ("AAs", "AK", "A", "XYs", "AKx"):
        with pytest.raises(ValueError):
            ab.parse_label(bad)


@given(classes)
def test_label_round_trip(i):
    assert ab.parse_label(ab.class_label(i)) == i


def test_prior():
    h = ab.class_prior()
    assert h[ab.parse_label("AA")] == 6 / 1326
    assert h[ab.parse_label("AKs")] == 4 / 1326
    assert h[ab.parse_label("AKo")] == 12 / 1326
    assert sum(Fraction(ab.degeneracy(i), 1326) for i in range(169)) == 1
    _, cls, _ = ab.all_hands()
    assert np.array_equal(np.bincount(cls, minlength=169), [ab.degeneracy(i) for i in range(169)])


def test_conditional_examples():
    aa = ab.parse_label("AA")
    hc = ab.conditional_dist_exact(aa)
    assert hc[aa] == Fraction(1, 1225)
    assert hc[ab.parse_label("KK")] == Fraction(6, 1225)
    assert hc[ab.parse_label("AKs")] == Fraction(2, 1225)


def test_conditional_rows_sum_to_one_exactly():
    for i in range(169):
        assert sum(ab.conditional_dist_exact(i)) == 1
        assert int(ab.conditional_counts(i).sum()) == 1225


def test_representative_independence():
    rng = np.random.default_rng(3)
    for i in rng.choice(169, size=20, replace=False):
        base = ab.conditional_counts(int(i), 0)
        for rep in range(len(ab.combos(int(i)))):
            assert np.array_equal(ab.conditional_counts(int(i), rep), base)


def test_unconditional_consistency():
    # direct enumeration over all ordered deals of two non-overlapping hands
    hands, cls, masks = ab.all_hands()
    ok = (masks[:, None] & masks[None, :]) == 0
    onehot = np.eye(169, dtype=np.int64)[cls]
    second = (ok.astype(np.int64) @ onehot).sum(axis=0)
    assert second.sum() == 1326 * 1225
    counts = np.stack([ab.conditional_counts(i) for i in range(169)])
    degen = np.array([ab.degeneracy(i) for i in range(169)])
    assert np.array_equal(degen @ counts, second)
    np.testing.assert_allclose(ab.class_prior() @ ab.conditional_matrix(), second / (1326 * 1225), atol=1e-15)


def test_combos_belong_to_class():
    for i in range(169):
        for a, b in ab.combos(i):
            assert ab.classify(DECK[a], DECK[b]) == i


def test_grid_reshape():
    g = ab.grid(np.arange(169))
    assert g.shape == (13, 13)
    assert g[0, 1] == ab.parse_label("AKs")
    assert g[1, 0] == ab.parse_label("AKo")
