"""Hand-coded symbolic automata used as fixtures and cross-checks.

These mirror the bounded-queue automaton, the two-distinct-letters
example DFA and the repeated-letter NFA; the programmatic targets in
`targets` must be language-equivalent to them.
"""

from __future__ import annotations

from .automata import (
    FRESH,
    INPUT,
    AlphabetSpec,
    OrbitDecl,
    Rule,
    SymbolicAutomaton,
    validate,
)
from .kernel import ATOM_TAG, SymGroup
from .targets import FIFO_ALPHABET


def _orbit(name, dim, accepting=False, sym=None):
    return OrbitDecl(name, dim, accepting, sym or SymGroup.trivial(dim))


def fifo2_automaton() -> SymbolicAutomaton:
    """Bounded queue of size 2: 5 orbits (queue shapes of length <= 2 plus sink)."""
    R = Rule
    aut = SymbolicAutomaton(
        kind="dfa",
        alphabet=FIFO_ALPHABET,
        orbits=(
            _orbit("q0", 0, accepting=True),
            _orbit("q1", 1, accepting=True),
            _orbit("q2", 2, accepting=True),   # queue xy with x != y
            _orbit("q2e", 1, accepting=True),  # queue xx
            _orbit("bot", 0),
        ),
        initial=("q0",),
        rules=(
            R("q0", "push", FRESH, "q1", (INPUT,)),
            R("q0", "pop", FRESH, "bot", ()),
            R("q1", "push", ("reg", 0), "q2e", (("reg", 0),)),
            R("q1", "push", FRESH, "q2", (("reg", 0), INPUT)),
            R("q1", "pop", ("reg", 0), "q0", ()),
            R("q1", "pop", FRESH, "bot", ()),
            R("q2", "push", ("reg", 0), "bot", ()),
            R("q2", "push", ("reg", 1), "bot", ()),
            R("q2", "push", FRESH, "bot", ()),
            R("q2", "pop", ("reg", 0), "q1", (("reg", 1),)),
            R("q2", "pop", ("reg", 1), "bot", ()),
            R("q2", "pop", FRESH, "bot", ()),
            R("q2e", "push", ("reg", 0), "bot", ()),
            R("q2e", "push", FRESH, "bot", ()),
            R("q2e", "pop", ("reg", 0), "q1", (("reg", 0),)),
            R("q2e", "pop", FRESH, "bot", ()),
            R("bot", "push", FRESH, "bot", ()),
            R("bot", "pop", FRESH, "bot", ()),
        ),
    )
    validate(aut)
    return aut


def fig2_automaton() -> SymbolicAutomaton:
    """Accepts words reaching the two-register orbit: x then a distinct y,
    looping on fresh letters, dropping back on register hits."""
    R = Rule
    A = ATOM_TAG
    aut = SymbolicAutomaton(
        kind="dfa",
        alphabet=AlphabetSpec.pure_atoms(),
        orbits=(
            _orbit("q0", 0),
            _orbit("q1", 1),
            _orbit("q2", 2, accepting=True),
        ),
        initial=("q0",),
        rules=(
            R("q0", A, FRESH, "q1", (INPUT,)),
            R("q1", A, ("reg", 0), "q0", ()),
            R("q1", A, FRESH, "q2", (("reg", 0), INPUT)),
            R("q2", A, ("reg", 0), "q0", ()),
            R("q2", A, ("reg", 1), "q1", (("reg", 0),)),
            R("q2", A, FRESH, "q2", (("reg", 0), ("reg", 1))),
        ),
    )
    validate(aut)
    return aut


def leq_automaton() -> SymbolicAutomaton:
    """Repeated-letter NFA: guess the letter that will repeat."""
    R = Rule
    A = ATOM_TAG
    aut = SymbolicAutomaton(
        kind="nfa",
        alphabet=AlphabetSpec.pure_atoms(),
        orbits=(
            _orbit("q0", 0),
            _orbit("q1", 1),
            _orbit("q2", 0, accepting=True),
        ),
        initial=("q0",),
        rules=(
            R("q0", A, FRESH, "q0", ()),
            R("q0", A, FRESH, "q1", (INPUT,)),
            R("q1", A, ("reg", 0), "q1", (("reg", 0),)),
            R("q1", A, ("reg", 0), "q2", ()),
            R("q1", A, FRESH, "q1", (("reg", 0),)),
            R("q2", A, FRESH, "q2", ()),
        ),
    )
    validate(aut)
    return aut
