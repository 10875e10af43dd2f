import random

import pytest
from hypothesis import given, settings, strategies as st

from nomlearn.automata import (
    FRESH,
    INPUT,
    AlphabetSpec,
    AutomatonAcceptor,
    Config,
    InvalidAutomaton,
    OrbitDecl,
    Rule,
    SymbolicAutomaton,
    accepts,
    canonical_config_set,
    canonical_config_tuple,
    step_dfa,
    step_nfa,
    validate,
)
from nomlearn.figures import fifo2_automaton, fig2_automaton, leq_automaton
from nomlearn.kernel import ATOM_TAG, Perm, SymGroup, atom_word, group_closure


def fifo_word(*ops):
    return tuple((tag, x) for tag, x in ops)


def test_validate_fifo2_ok():
    validate(fifo2_automaton())  # must not raise


def test_validate_missing_fresh_rule():
    aut = fig2_automaton()
    broken = SymbolicAutomaton(
        aut.kind,
        aut.alphabet,
        aut.orbits,
        aut.initial,
        tuple(r for r in aut.rules if not (r.src == "q1" and r.guard == FRESH)),
    )
    with pytest.raises(InvalidAutomaton, match="totality"):
        validate(broken)


def test_validate_symmetry_coherence():
    # orbit with swap symmetry whose rules distinguish the two registers
    sym = group_closure([(1, 0)], 2)
    aut = SymbolicAutomaton(
        "nfa",
        AlphabetSpec.pure_atoms(),
        (
            OrbitDecl("s", 0, False, SymGroup.trivial(0)),
            OrbitDecl("p", 2, True, sym),
            OrbitDecl("t", 0, False, SymGroup.trivial(0)),
        ),
        ("s",),
        (
            Rule("s", ATOM_TAG, FRESH, "p", (INPUT, "any")),
            Rule("p", ATOM_TAG, ("reg", 0), "s", ()),
            Rule("p", ATOM_TAG, ("reg", 1), "t", ()),
            Rule("p", ATOM_TAG, FRESH, "p", (("reg", 0), ("reg", 1))),
            Rule("t", ATOM_TAG, FRESH, "t", ()),
        ),
    )
    with pytest.raises(InvalidAutomaton, match="coherent"):
        validate(aut)


def test_validate_register_clash():
    aut = SymbolicAutomaton(
        "dfa",
        AlphabetSpec.pure_atoms(),
        (
            OrbitDecl("s", 0, False, SymGroup.trivial(0)),
            OrbitDecl("p", 2, False, SymGroup.trivial(2)),
        ),
        ("s",),
        (
            Rule("s", ATOM_TAG, FRESH, "p", (INPUT, INPUT)),
            Rule("p", ATOM_TAG, ("reg", 0), "p", (("reg", 0), ("reg", 1))),
            Rule("p", ATOM_TAG, ("reg", 1), "p", (("reg", 0), ("reg", 1))),
            Rule("p", ATOM_TAG, FRESH, "p", (("reg", 0), ("reg", 1))),
        ),
    )
    with pytest.raises(InvalidAutomaton, match="equal"):
        validate(aut)


def test_accepts_fifo2():
    aut = fifo2_automaton()
    assert accepts(aut, fifo_word(("push", 3), ("pop", 3)))
    assert not accepts(aut, fifo_word(("push", 3), ("pop", 4)))
    assert accepts(aut, fifo_word(("push", 1), ("push", 2), ("pop", 1), ("pop", 2)))
    assert not accepts(aut, fifo_word(("push", 1), ("push", 2), ("pop", 2)))
    assert not accepts(aut, fifo_word(("pop", 0),))


def test_accepts_fig2():
    aut = fig2_automaton()
    assert accepts(aut, atom_word((0, 1)))
    assert not accepts(aut, atom_word((0, 0)))
    assert accepts(aut, atom_word((0, 1, 2)))
    assert not accepts(aut, atom_word((0, 1, 1)))


def test_accepts_leq_nfa():
    aut = leq_automaton()
    assert accepts(aut, atom_word((0, 1, 0)))
    assert not accepts(aut, atom_word((0, 1, 2)))
    assert not accepts(aut, ())
    assert accepts(aut, atom_word((5, 5)))


def test_step_dfa_examples():
    aut = fifo2_automaton()
    c = step_dfa(aut, Config("q0", ()), ("push", 3))
    assert c == Config("q1", (3,))
    # fresh letter loops on the two-register orbit of fig2
    f2 = fig2_automaton()
    assert step_dfa(f2, Config("q2", (0, 1)), (ATOM_TAG, 7)) == Config("q2", (0, 1))


def test_step_nfa_example():
    aut = leq_automaton()
    succ = step_nfa(aut, [Config("q0", ())], (ATOM_TAG, 4), context=frozenset())
    assert succ == frozenset({Config("q0", ()), Config("q1", (4,))})


def test_canonical_config_set_examples():
    acc = AutomatonAcceptor(fifo2_automaton())
    key1, ren1 = canonical_config_set(acc, [Config("q1", (7,))])
    key2, _ = canonical_config_set(acc, [Config("q1", (0,))])
    assert key1 == key2
    assert ren1[7] == 0

    sym = group_closure([(1, 0)], 2)
    aut = SymbolicAutomaton(
        "nfa",
        AlphabetSpec.pure_atoms(),
        (OrbitDecl("p", 2, True, sym),),
        (),
        (),
    )
    pacc = AutomatonAcceptor(aut)
    ka, _ = canonical_config_set(pacc, [Config("p", (5, 3))])
    kb, _ = canonical_config_set(pacc, [Config("p", (3, 5))])
    assert ka == kb

    k2, _ = canonical_config_set(acc, [Config("q1", (4,)), Config("q1", (9,))])
    k3, _ = canonical_config_set(acc, [Config("q1", (9,)), Config("q1", (4,))])
    assert k2 == k3


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_accepts_permutation_invariant(data):
    aut = fig2_automaton()
    word = data.draw(st.lists(st.integers(0, 5), max_size=6))
    rng = random.Random(data.draw(st.integers(0, 2**31)))
    pi = Perm.random(range(8), rng)
    w = atom_word(word)
    assert accepts(aut, pi.word(w)) == accepts(aut, w)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_step_equivariance(data):
    aut = fifo2_automaton()
    acc = AutomatonAcceptor(aut)
    regs = data.draw(st.sampled_from([(), (0,), (0, 1)]))
    orbit = {0: "q0", 1: "q1", 2: "q2"}[len(regs)]
    c = Config(orbit, regs)
    tag = data.draw(st.sampled_from(["push", "pop"]))
    x = data.draw(st.integers(0, 3))
    rng = random.Random(data.draw(st.integers(0, 2**31)))
    pi = Perm.random(range(6), rng)
    c_pi = Config(orbit, pi.atoms(regs))
    left = acc.step(c_pi, (tag, pi(x)))
    right = frozenset(Config(d.orbit, pi.atoms(d.regs)) for d in acc.step(c, (tag, x)))
    k1, _ = canonical_config_set(acc, left)
    k2, _ = canonical_config_set(acc, right)
    assert k1 == k2


def test_canonical_config_tuple_joint_renaming():
    acc = AutomatonAcceptor(fifo2_automaton())
    t1 = canonical_config_tuple([(acc, Config("q1", (7,))), (acc, Config("q1", (7,)))])
    t2 = canonical_config_tuple([(acc, Config("q1", (2,))), (acc, Config("q1", (2,)))])
    t3 = canonical_config_tuple([(acc, Config("q1", (2,))), (acc, Config("q1", (4,)))])
    assert t1 == t2
    assert t1 != t3
