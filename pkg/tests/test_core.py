import pytest
from hypothesis import given, strategies as st

from majagree.core import (
    Network,
    StructuralError,
    check_assignment,
    iter_inputs,
    rank,
    strict_majority,
    tally,
    unrank,
)

SIZES = st.lists(st.integers(1, 5), min_size=1, max_size=6)


def test_tally_direct_count():
    assert tally(Network((4,), 3), (1, 1, 2, 3)) == {1: 2, 2: 1, 3: 1}
    assert tally(Network((2, 1, 1), 3), (2, 2, 3, 1)) == {1: 1, 2: 2, 3: 1}


def test_tally_unanimous():
    net = Network((2, 2), 4)
    assert tally(net, (3,) * 4) == {1: 0, 2: 0, 3: 4, 4: 0}


def test_tally_length_mismatch():
    with pytest.raises(StructuralError):
        tally(Network((2, 1), 3), (1, 2))
    with pytest.raises(StructuralError):
        check_assignment(Network((2, 1), 3), (1, 2, 4))


@pytest.mark.parametrize(
    "t, n, expected",
    [
        ({1: 3, 2: 1}, 4, 1),
        ({1: 2, 2: 2}, 4, None),
        ({1: 2, 2: 1, 3: 1}, 4, None),
        ({1: 0, 2: 3}, 5, 2),
    ],
)
def test_strict_majority(t, n, expected):
    assert strict_majority(t, n) == expected


@given(st.lists(st.integers(0, 6), min_size=2, max_size=6))
def test_at_most_one_strict_majority(counts):
    n = sum(counts)
    t = {v + 1: c for v, c in enumerate(counts)}
    winners = [v for v, c in t.items() if 2 * c > n]
    assert len(winners) <= 1
    assert strict_majority(t, n) == (winners[0] if winners else None)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=10), st.randoms())
def test_tally_permutation_invariant(values, rnd):
    net = Network((len(values),), 4)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert tally(net, values) == tally(net, shuffled)


def test_component_slices():
    assert list(Network((3, 1), 3).component_slice(0)) == [0, 1, 2]
    assert list(Network((3, 1), 3).component_slice(1)) == [3]
    assert list(Network((2, 1, 1), 3).component_slice(2)) == [3]
    assert list(Network((5,), 3).component_slice(0)) == [0, 1, 2, 3, 4]
    with pytest.raises(IndexError):
        Network((5,), 3).component_slice(1)


@given(SIZES, st.randoms())
def test_canonical_order(sizes, rnd):
    shuffled = list(sizes)
    rnd.shuffle(shuffled)
    net = Network(tuple(shuffled), 3)
    assert list(net.component_sizes) == sorted(sizes, reverse=True)
    assert net == Network(tuple(sizes), 3)
    top2 = sorted(sizes, reverse=True)[:2]
    assert net.h + net.j2 == sum(top2)
    covered = [i for c in range(net.l) for i in net.component_slice(c)]
    assert covered == list(range(net.n))


def test_derived_fields():
    net = Network.parse("1,4,2,1", 3)
    assert net.component_sizes == (4, 2, 1, 1)
    assert (net.n, net.l, net.h, net.j2) == (8, 4, 4, 2)
    assert Network((3,), 3).j2 == 0
    assert net.spec() == "4,2,1,1"


@pytest.mark.parametrize("text", ["", "1,,2", "a,b", "0,1", "-1"])
def test_bad_network_specs(text):
    with pytest.raises(StructuralError):
        Network.parse(text, 3)


def test_k_below_two_rejected():
    with pytest.raises(StructuralError):
        Network((2,), 1)


@given(st.integers(1, 6), st.integers(2, 4), st.data())
def test_rank_roundtrip(length, k, data):
    r = data.draw(st.integers(0, k ** length - 1))
    assert rank(unrank(r, length, k), k) == r


def test_iter_inputs_is_rank_order():
    net = Network((2, 1), 3)
    assert [rank(a, 3) for a in iter_inputs(net)] == list(range(27))
