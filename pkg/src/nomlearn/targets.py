"""Built-in benchmark languages: acceptors plus direct membership oracles.

Targets are programmatic (step functions over explicit configurations),
so their orbit structure is discovered by the equivalence search rather
than declared up front.  Membership oracles are separate, simpler
formulations of the same languages where one exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Optional, Tuple

from .automata import Acceptor, AlphabetSpec
from .kernel import ATOM_TAG, Atom, Letter, Word, shape_of, word_atoms

SINK = ("sink",)

FIFO_ALPHABET = AlphabetSpec((("push", 1), ("pop", 1)))


def _support(atoms) -> Tuple[Atom, ...]:
    seen = {}
    for a in atoms:
        if a not in seen:
            seen[a] = None
    return tuple(seen)


class FifoAcceptor(Acceptor):
    """Valid traces of push/pop on a bounded queue of size n.

    A configuration is the queue contents (repeats allowed) or the sink;
    pop must match the head, overflow and pop-on-empty sink.  Every
    non-sink configuration is accepting, so the language is prefix-closed.
    """

    deterministic = True

    def __init__(self, capacity: int):
        if capacity < 0:
            raise ValueError("capacity must be >= 0")
        self.capacity = capacity
        self.alphabet = FIFO_ALPHABET
        self.max_dim = capacity

    def initial(self) -> FrozenSet:
        return frozenset([()])

    def step(self, config, letter: Letter, context=frozenset()) -> FrozenSet:
        tag, x = letter
        if config == SINK:
            return frozenset([SINK])
        if tag == "push":
            if len(config) < self.capacity:
                return frozenset([config + (x,)])
            return frozenset([SINK])
        if tag == "pop":
            if config and config[0] == x:
                return frozenset([config[1:]])
            return frozenset([SINK])
        raise KeyError("unknown tag %r" % (tag,))

    def is_accepting(self, config) -> bool:
        return config != SINK

    def config_forms(self, config):
        if config == SINK:
            return [(("sink",), ())]
        return [(("queue", shape_of(config)), _support(config))]


def fifo_membership(capacity: int) -> Callable[[Word], bool]:
    def member(word: Word) -> bool:
        queue: List[Atom] = []
        for tag, x in word:
            if tag == "push":
                if len(queue) == capacity:
                    return False
                queue.append(x)
            elif tag == "pop":
                if not queue or queue[0] != x:
                    return False
                queue.pop(0)
            else:
                raise KeyError("unknown tag %r" % (tag,))
        return True
    return member


class DoubleWordAcceptor(Acceptor):
    """Words ww with |w| = n: read n letters, then match them in order."""

    deterministic = True

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        self.alphabet = AlphabetSpec.pure_atoms()
        self.max_dim = n

    def initial(self) -> FrozenSet:
        if self.n == 0:
            return frozenset([("match", ())])
        return frozenset([("read", ())])

    def step(self, config, letter: Letter, context=frozenset()) -> FrozenSet:
        _, x = letter
        if config == SINK:
            return frozenset([SINK])
        phase, data = config
        if phase == "read":
            data = data + (x,)
            if len(data) == self.n:
                return frozenset([("match", data)])
            return frozenset([("read", data)])
        if not data or data[0] != x:
            return frozenset([SINK])
        return frozenset([("match", data[1:])])

    def is_accepting(self, config) -> bool:
        return config == ("match", ())

    def config_forms(self, config):
        if config == SINK:
            return [(("sink",), ())]
        phase, data = config
        return [((phase, len(data), shape_of(data)), _support(data))]


def double_word_membership(n: int) -> Callable[[Word], bool]:
    def member(word: Word) -> bool:
        if len(word) != 2 * n:
            return False
        return word[:n] == word[n:]
    return member


class NLastAcceptor(Acceptor):
    """Words whose first letter reappears exactly n positions from the end.

    Remembers the first letter and a sliding window of the last up to
    n+1 letters' equality with it.
    """

    deterministic = True

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        self.alphabet = AlphabetSpec.pure_atoms()
        self.max_dim = 1

    def initial(self) -> FrozenSet:
        return frozenset([("start",)])

    def step(self, config, letter: Letter, context=frozenset()) -> FrozenSet:
        _, x = letter
        if config == ("start",):
            return frozenset([("win", x, ())])
        _, first, bits = config
        bits = (bits + (x == first,))[-(self.n + 1):]
        return frozenset([("win", first, bits)])

    def is_accepting(self, config) -> bool:
        if config == ("start",):
            return False
        _, _, bits = config
        return len(bits) == self.n + 1 and bits[0]

    def config_forms(self, config):
        if config == ("start",):
            return [(("start",), ())]
        _, first, bits = config
        return [(("win", bits), (first,))]


def nlast_membership(n: int) -> Callable[[Word], bool]:
    def member(word: Word) -> bool:
        if len(word) < n + 2:
            return False
        return word[len(word) - 1 - n][1] == word[0][1]
    return member


class RepeatedLetterAcceptor(Acceptor):
    """Words in which some letter occurs twice (not DFA-recognisable).

    Three state orbits: scanning, guessed-letter-pending, and accepted.
    """

    deterministic = False

    def __init__(self):
        self.alphabet = AlphabetSpec.pure_atoms()
        self.max_dim = 1

    def initial(self) -> FrozenSet:
        return frozenset([("scan",)])

    def step(self, config, letter: Letter, context=frozenset()) -> FrozenSet:
        _, x = letter
        if config == ("scan",):
            return frozenset([("scan",), ("seen", x)])
        if config == ("done",):
            return frozenset([("done",)])
        _, a = config
        out = {("seen", a)}
        if x == a:
            out.add(("done",))
        return frozenset(out)

    def is_accepting(self, config) -> bool:
        return config == ("done",)

    def config_forms(self, config):
        if config in (("scan",), ("done",)):
            return [(config, ())]
        return [(("seen",), (config[1],))]


def repeated_letter_membership(word: Word) -> bool:
    atoms = [x for _, x in word]
    return len(set(atoms)) < len(atoms)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Target:
    name: str
    acceptor: Acceptor
    membership: Callable[[Word], bool]
    deterministic: bool
    orbit_hint: int  # orbit count of the smallest known acceptor


def make_fifo(n: int) -> Target:
    bell = [1, 1, 2, 5, 15, 52, 203]
    hint = sum(bell[: n + 1]) + 1 if n < len(bell) else 2 * n
    return Target("fifo:%d" % n, FifoAcceptor(n), fifo_membership(n), True, hint)


def make_double_word(n: int) -> Target:
    return Target(
        "ww:%d" % n, DoubleWordAcceptor(n), double_word_membership(n), True, 3 * n + 1
    )


def make_nlast(n: int) -> Target:
    return Target(
        "nlast:%d" % n, NLastAcceptor(n), nlast_membership(n), True, 2 ** (n + 1) + 1
    )


def make_leq() -> Target:
    return Target("leq", RepeatedLetterAcceptor(), repeated_letter_membership, False, 3)


def get_target(name: str) -> Target:
    kind, _, arg = name.partition(":")
    if kind == "fifo":
        return make_fifo(int(arg))
    if kind == "ww":
        return make_double_word(int(arg))
    if kind == "nlast":
        return make_nlast(int(arg))
    if kind == "leq" and not arg:
        return make_leq()
    raise KeyError("unknown target %r" % (name,))
