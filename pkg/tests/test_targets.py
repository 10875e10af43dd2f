import random

import pytest
from hypothesis import given, settings, strategies as st

from nomlearn.automata import AutomatonAcceptor, accepts
from nomlearn.equivalence import Equal, dfa_equiv, reachable_orbit_count
from nomlearn.figures import fifo2_automaton, leq_automaton
from nomlearn.kernel import Perm, atom_word
from nomlearn.targets import (
    get_target,
    make_double_word,
    make_fifo,
    make_leq,
    make_nlast,
)


def fifo_word(*ops):
    return tuple(ops)


def test_fifo_semantics():
    t = make_fifo(2)
    assert t.membership(fifo_word(("push", 1), ("push", 2), ("pop", 1), ("pop", 2)))
    assert not t.membership(fifo_word(("push", 1), ("pop", 2)))
    assert not t.membership(fifo_word(("pop", 1),))
    assert not t.membership(
        fifo_word(("push", 1), ("push", 2), ("push", 3))
    )  # overflow
    assert t.membership(fifo_word(("push", 1), ("push", 1), ("pop", 1), ("pop", 1)))
    # acceptor agrees
    for w in [
        fifo_word(("push", 1), ("pop", 1)),
        fifo_word(("push", 1), ("pop", 2)),
        fifo_word(("push", 1), ("push", 2), ("pop", 2)),
    ]:
        assert accepts(t.acceptor, w) == t.membership(w)


def test_fifo_orbit_counts_are_bell_sums():
    # 1 + sum of Bell numbers up to the capacity, including the sink
    for n, expect in [(0, 2), (1, 3), (2, 5), (3, 10)]:
        assert reachable_orbit_count(make_fifo(n).acceptor) == expect


def test_fifo_matches_handcoded_automaton():
    res = dfa_equiv(make_fifo(2).acceptor, AutomatonAcceptor(fifo2_automaton()))
    assert isinstance(res, Equal)


def test_double_word():
    for n in (0, 1, 2):
        t = make_double_word(n)
        assert t.membership(atom_word(tuple(range(n)) + tuple(range(n))))
    t1 = make_double_word(1)
    assert t1.membership(atom_word((4, 4)))
    assert not t1.membership(atom_word((4, 5)))
    t0 = make_double_word(0)
    assert t0.membership(())
    assert not t0.membership(atom_word((1,)))
    t2 = make_double_word(2)
    assert t2.membership(atom_word((0, 1, 0, 1)))
    assert not t2.membership(atom_word((0, 1, 1, 0)))
    for w in [(), (3,), (3, 3), (3, 4), (3, 4, 3, 4), (3, 3, 3)]:
        assert accepts(t2.acceptor, atom_word(w)) == t2.membership(atom_word(w))


def test_nlast_examples():
    t = make_nlast(1)
    assert t.membership(atom_word((0, 1, 0, 2)))
    assert t.membership(atom_word((0, 0, 1)))
    assert not t.membership(atom_word((0, 1, 2, 3)))
    assert not t.membership(atom_word((0, 0)))  # too short: needs n+2 letters


def test_nlast_acceptor_agrees_with_scan():
    rng = random.Random(7)
    for n in (1, 2, 3):
        t = make_nlast(n)
        for _ in range(10**4):
            w = atom_word([rng.randrange(5) for _ in range(rng.randrange(9))])
            assert accepts(t.acceptor, w) == t.membership(w), (n, w)


def test_leq():
    t = make_leq()
    assert t.membership(atom_word((0, 1, 0)))
    assert not t.membership(atom_word((0, 1, 2)))
    assert not t.membership(())
    # the scan oracle agrees with both NFA formulations
    rng = random.Random(3)
    sym = leq_automaton()
    for _ in range(400):
        w = atom_word([rng.randrange(4) for _ in range(rng.randrange(7))])
        assert accepts(t.acceptor, w) == t.membership(w)
        assert accepts(sym, w) == t.membership(w)


@settings(max_examples=250, deadline=None)
@given(st.data())
def test_targets_equivariant(data):
    name = data.draw(st.sampled_from(["fifo:2", "ww:1", "ww:2", "nlast:1", "leq"]))
    t = get_target(name)
    rng = random.Random(data.draw(st.integers(0, 2**31)))
    pi = Perm.random(range(8), rng)
    if name.startswith("fifo"):
        ops = data.draw(
            st.lists(
                st.tuples(st.sampled_from(["push", "pop"]), st.integers(0, 4)),
                max_size=7,
            )
        )
        w = tuple(ops)
    else:
        w = atom_word(data.draw(st.lists(st.integers(0, 4), max_size=7)))
    assert t.membership(pi.word(w)) == t.membership(w)


def test_registry():
    assert get_target("fifo:3").name == "fifo:3"
    assert get_target("leq").deterministic is False
    with pytest.raises(KeyError):
        get_target("nope")
