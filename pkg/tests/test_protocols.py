import itertools

import pytest
from hypothesis import given, strategies as st

from majagree.bounds import theorem1_holds
from majagree.core import BudgetExceeded, Network, StructuralError, iter_inputs, restrict, strict_majority, tally
from majagree.protocols import (
    ProtocolTable,
    constant_protocol,
    evaluate,
    from_text,
    identity_protocol,
    padding_values,
    perturbed_identity_protocol,
    plurality,
    plurality_padding_protocol,
    random_protocol,
    to_text,
)
from majagree.synth import compositions
from oracles import plurality_counter, run_protocol

SMALL_SIZES = st.lists(st.integers(1, 3), min_size=1, max_size=4)


def independent_padding_rule(sizes, k):
    """Direct restatement of the construction, written without the package."""
    n, h = sum(sizes), sizes[0]
    per = (n - h) // k
    fixed = []
    for v in range(1, k + 1):
        fixed += [v] * per
    fixed += [1] * (n - h - len(fixed))

    def rule(c, x):
        if c == 0:
            return (plurality_counter(x, k),) * len(x)
        start = sum(sizes[1:c])
        return tuple(fixed[start:start + len(x)])

    return rule


@given(SMALL_SIZES, st.integers(2, 4), st.data())
def test_identity_and_constant(sizes, k, data):
    net = Network(tuple(sizes), k)
    a = tuple(data.draw(st.lists(st.integers(1, k), min_size=net.n, max_size=net.n)))
    assert evaluate(net, identity_protocol(net), a) == a
    assert evaluate(net, constant_protocol(net, 1), a) == (1,) * net.n


def test_plurality_padding_hand_example():
    net = Network((2, 1, 1, 1), 3)
    p = plurality_padding_protocol(net)
    assert evaluate(net, p, (2, 3, 1, 1, 1)) == (2, 2, 1, 2, 3)
    assert padding_values(net) == (1, 2, 3)


def test_padding_leftover_outputs_one():
    assert padding_values(Network((3, 1), 3)) == (1,)
    assert padding_values(Network((4, 1, 1, 1, 1), 3)) == (1, 2, 3, 1)
    assert padding_values(Network((2, 1, 1, 1, 1, 1), 4)) == (1, 2, 3, 4, 1)


@pytest.mark.parametrize("sizes, k", [((2, 1, 1, 1), 3), ((3, 1), 3), ((3, 2, 1), 3), ((2, 2, 1), 4)])
def test_plurality_padding_matches_independent_rule(sizes, k):
    net = Network(sizes, k)
    p = plurality_padding_protocol(net)
    rule = independent_padding_rule(net.component_sizes, k)
    for a in iter_inputs(net):
        assert evaluate(net, p, a) == run_protocol(net.component_sizes, rule, a)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=8))
def test_plurality_tie_rule(values):
    assert plurality(values, 5) == plurality_counter(values, 5)


def test_plurality_ties_go_low():
    assert plurality((3, 2, 2, 3), 3) == 2
    assert plurality((1, 2, 3), 3) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_theorem1_guarantee_small(n):
    for sizes in compositions(n):
        net = Network(sizes, 3)
        if not theorem1_holds(net):
            continue
        p = plurality_padding_protocol(net)
        for a in iter_inputs(net):
            out = evaluate(net, p, a)
            expected = plurality(restrict(net, a, 0), 3)
            assert out[:net.h] == (expected,) * net.h
            assert strict_majority(tally(net, out), net.n) == expected


def test_unanimous_inputs_under_possibility_bound():
    for sizes, k in [((3, 1), 3), ((2, 1, 1, 1), 3), ((4, 1, 1), 4)]:
        net = Network(sizes, k)
        p = plurality_padding_protocol(net)
        for v in range(1, k + 1):
            assert strict_majority(tally(net, evaluate(net, p, (v,) * net.n)), net.n) == v


def test_random_protocol_shape_and_determinism():
    net = Network((1, 1, 1, 1), 3)
    p = random_protocol(net, 11)
    assert len(p.tables) == 4
    assert all(len(t) == 3 and all(len(e) == 1 for e in t) for t in p.tables)
    assert random_protocol(net, 11) == p


def test_random_protocol_seeds_differ():
    net = Network((2, 1), 3)
    base = random_protocol(net, 0)
    # equal tables for two seeds are possible in principle; one of several must differ
    assert any(random_protocol(net, s) != base for s in range(1, 6))


def test_random_protocol_budget():
    with pytest.raises(BudgetExceeded):
        random_protocol(Network((9,), 3), 0, budget=1000)


@given(SMALL_SIZES, st.integers(2, 3), st.integers(0, 10 ** 6), st.data())
def test_locality(sizes, k, seed, data):
    net = Network(tuple(sizes), k)
    p = random_protocol(net, seed)
    a = data.draw(st.lists(st.integers(1, k), min_size=net.n, max_size=net.n))
    b = data.draw(st.lists(st.integers(1, k), min_size=net.n, max_size=net.n))
    c = data.draw(st.integers(0, net.l - 1))
    s = net.component_slice(c)
    b[s.start:s.stop] = a[s.start:s.stop]
    assert restrict(net, evaluate(net, p, a), c) == restrict(net, evaluate(net, p, b), c)


def test_perturbed_identity_keeps_unanimity():
    net = Network((2, 2, 1, 1), 3)
    for seed in range(20):
        p = perturbed_identity_protocol(net, seed, 0.7)
        for v in (1, 2, 3):
            assert evaluate(net, p, (v,) * net.n) == (v,) * net.n


def test_non_total_table_rejected():
    net = Network((2, 1), 3)
    tables = list(identity_protocol(net).tables)
    tables[0] = tables[0][:-1]
    with pytest.raises(StructuralError, match="not total"):
        ProtocolTable(net, tuple(tables))
    with pytest.raises(StructuralError):
        ProtocolTable(net, tables[:1])


def test_out_of_range_output_rejected():
    net = Network((1,), 2)
    with pytest.raises(StructuralError):
        ProtocolTable(net, (((1,), (3,)),))


def test_evaluate_wrong_network():
    p = identity_protocol(Network((2,), 3))
    with pytest.raises(StructuralError):
        evaluate(Network((1, 1), 3), p, (1, 1))


@given(SMALL_SIZES, st.integers(2, 3), st.integers(0, 1000))
def test_text_roundtrip(sizes, k, seed):
    p = random_protocol(Network(tuple(sizes), k), seed)
    assert from_text(to_text(p)) == p


def test_text_layout():
    text = to_text(plurality_padding_protocol(Network((1, 1), 2)))
    assert text.splitlines() == [
        "majagree-protocol 1", "k 2", "network 1,1",
        "component 0 1", "1", "2",
        "component 1 1", "1", "1",
    ]


@pytest.mark.parametrize(
    "text",
    [
        "k 2\nnetwork 1\ncomponent 0 1\n1\n2\n",
        "majagree-protocol 1\nk 2\nnetwork 1\ncomponent 0 1\n1\n",
        "majagree-protocol 1\nk 2\nnetwork 1\ncomponent 0 2\n1\n2\n",
        "majagree-protocol 1\nk 2\nnetwork 1\n1\n2\n",
        "majagree-protocol 1\nk x\nnetwork 1\n",
    ],
)
def test_bad_text(text):
    with pytest.raises(StructuralError):
        from_text(text)
