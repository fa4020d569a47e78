import pytest
from hypothesis import given, strategies as st

from mis_lab.errors import BoxTooLarge, InvalidSpec, OutOfBox
from mis_lab.lattice import (Box, MultiplierVector, chain_in_box, chain_length_in_box, enumerate_hist_oracle,
                             hist_J, hist_K, ilog, is_index_head)


def test_ilog():
    assert [ilog(x, 2) for x in (1, 2, 3, 4, 1023, 1024)] == [0, 1, 1, 2, 9, 10]
    assert ilog(3 ** 100, 3) == 100


def test_heads_and_chains():
    p = MultiplierVector((2, 3))
    assert is_index_head((1, 3), p)
    assert not is_index_head((2, 3), p)
    assert chain_in_box((1, 1), p, Box((4, 9))) == [(1, 1), (2, 3), (4, 9)]
    assert chain_length_in_box((1, 1), p, (4, 9)) == 3
    with pytest.raises(OutOfBox):
        chain_in_box((5, 1), p, Box((4, 9)))


def test_box_4_9_histograms():
    p = MultiplierVector((2, 3))
    J, K = hist_J(Box((4, 9)), p), hist_K(Box((4, 9)), p)
    assert J.total == 36
    assert K.weighted_total == 36
    assert K[3] == 1


def test_invalid_multiplier():
    with pytest.raises(InvalidSpec):
        MultiplierVector((1, 2))


boxes = st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.lists(st.integers(1, 60), min_size=d, max_size=d), st.lists(st.sampled_from([2, 3, 5]), min_size=d, max_size=d)))


@given(boxes)
def test_closed_forms_match_enumeration(data):
    sides, p = data
    box, mv = Box(tuple(sides)), MultiplierVector(tuple(p))
    J, K = enumerate_hist_oracle(box, mv)
    assert hist_J(box, mv) == J
    assert hist_K(box, mv) == K


@given(boxes)
def test_histogram_invariants(data):
    sides, p = data
    box, mv = Box(tuple(sides)), MultiplierVector(tuple(p))
    K = hist_K(box, mv)
    # every point lies on exactly one chain
    assert K.weighted_total == box.volume
    J = hist_J(box, mv)
    assert J.total == box.volume


def test_oracle_budget():
    with pytest.raises(BoxTooLarge):
        enumerate_hist_oracle(Box((10 ** 4, 10 ** 4)), MultiplierVector((2, 3)))
