"""Equivalence oracles: orbit-wise bisimulation over canonical configurations.

For deterministic acceptors the product search is exact and returns a
shortest separating word.  For non-deterministic ones the search runs on
determinized configuration sets up to a word-length bound, discharging
pairs implied by the union-congruence of already visited pairs
(HKC-style); the verdict is then only "equal up to depth".

Letters are instantiated per tag with the atoms of the current
configurations (registers in index order) plus one fresh atom, which is
exhaustive up to equivariance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .automata import Acceptor, accepts, canonical_groups
from .kernel import Atom, Letter, Word, fresh_atoms


@dataclass(frozen=True)
class Equal:
    pass


@dataclass(frozen=True)
class EqualUpToDepth:
    depth: int


@dataclass(frozen=True)
class Counterexample:
    word: Word


class SearchLimit(Exception):
    """Raised when the canonical-configuration cap is exceeded."""


class OracleError(Exception):
    """A produced counterexample failed its direct-execution self-check."""


DEFAULT_MAX_CONFIGS = 10**6


def _joint_letters(
    alphabet, atom_lists: Sequence[Sequence[Atom]], n_fresh: int
) -> List[Letter]:
    """Letters to probe from a configuration tuple: known atoms, then fresh."""
    atoms: List[Atom] = []
    seen: Set[Atom] = set()
    for lst in atom_lists:
        for a in lst:
            if a not in seen:
                seen.add(a)
                atoms.append(a)
    atoms.extend(fresh_atoms(n_fresh, seen))
    letters: List[Letter] = []
    for tag, arity in alphabet.tags:
        if arity == 0:
            letters.append((tag, None))
        else:
            letters.extend((tag, a) for a in atoms)
    return letters


def _canonical_groups(groups: Sequence[Tuple[Acceptor, Iterable]]):
    key, _ = canonical_groups(groups)
    return key


def dfa_equiv(
    a: Acceptor,
    b: Acceptor,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    extra_fresh: int = 1,
):
    """Exact language equivalence of two deterministic acceptors.

    Breadth-first search over canonical product configurations; returns
    Equal or a shortest word in the symmetric difference.
    """
    if not (a.deterministic and b.deterministic):
        raise ValueError("dfa_equiv requires deterministic acceptors")
    ca, cb = a.initial_one(), b.initial_one()
    if a.is_accepting(ca) != b.is_accepting(cb):
        word: Word = ()
        _self_check(a, b, word)
        return Counterexample(word)
    key0 = _canonical_groups([(a, [ca]), (b, [cb])])
    visited = {key0}
    queue = [(ca, cb, ())]
    while queue:
        next_queue = []
        for ca, cb, path in queue:
            letters = _joint_letters(
                a.alphabet, [a.config_atoms(ca), b.config_atoms(cb)], extra_fresh
            )
            for letter in letters:
                da = a.step_one(ca, letter)
                db = b.step_one(cb, letter)
                word = path + (letter,)
                if a.is_accepting(da) != b.is_accepting(db):
                    _self_check(a, b, word)
                    return Counterexample(word)
                key = _canonical_groups([(a, [da]), (b, [db])])
                if key not in visited:
                    visited.add(key)
                    if len(visited) > max_configs:
                        raise SearchLimit(
                            "more than %d canonical product configurations" % max_configs
                        )
                    next_queue.append((da, db, word))
        queue = next_queue
    return Equal()


def _self_check(a: Acceptor, b: Acceptor, word: Word) -> None:
    if accepts(a, word) == accepts(b, word):
        raise OracleError(
            "counterexample %r does not separate the acceptors" % (word,)
        )


# ---------------------------------------------------------------------------
# bounded equivalence for non-deterministic acceptors


def _step_set(acc: Acceptor, configs: FrozenSet, letter: Letter, context: FrozenSet[Atom]) -> FrozenSet:
    out = set()
    for c in configs:
        out.update(acc.step(c, letter, context))
    return frozenset(out)


def _set_atoms(acc: Acceptor, configs: Iterable) -> List[Atom]:
    atoms: List[Atom] = []
    seen: Set[Atom] = set()
    for c in configs:
        for a in acc.config_atoms(c):
            if a not in seen:
                seen.add(a)
                atoms.append(a)
    return atoms


def _tagged_side(side: str, acc: Acceptor, configs: FrozenSet, renaming: Dict[Atom, int]) -> FrozenSet:
    out = set()
    for c in configs:
        forms = []
        for skeleton, atoms in acc.config_forms(c):
            codes = tuple(renaming[x] for x in atoms)
            forms.append((skeleton, codes))
        out.add((side, min(forms)))
    return frozenset(out)


def _congruent(pair, relation) -> bool:
    """Whether the pair is implied by the union-congruence of the relation.

    Saturates both sides under the rewriting Z ∪= V when U ⊆ Z for known
    pairs (U, V) in either orientation, then compares.
    """
    x, y = pair
    x, y = set(x), set(y)
    changed = True
    while changed:
        changed = False
        for u, v in relation:
            for src, dst in ((u, v), (v, u)):
                if src <= x and not dst <= x:
                    x |= dst
                    changed = True
                if src <= y and not dst <= y:
                    y |= dst
                    changed = True
    return x == y


def nfa_equiv_bounded(
    a: Acceptor,
    b: Acceptor,
    depth: int,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    use_congruence: bool = True,
):
    """Bounded-depth equivalence on determinized configuration sets.

    Compares acceptance of all words up to the given length; `any`
    registers are instantiated with a fresh budget of max dimension.
    Returns EqualUpToDepth(depth) or a counterexample of length <= depth.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    budget = max(a.max_dim, b.max_dim)
    sa, sb = a.initial(), b.initial()
    if a.accepts_set(sa) != b.accepts_set(sb):
        _self_check(a, b, ())
        return Counterexample(())
    visited = set()
    relation: List[Tuple[FrozenSet, FrozenSet]] = []
    queue = [(sa, sb, ())]
    level = 0
    while queue and level < depth:
        next_queue = []
        for sa, sb, path in queue:
            atom_lists = [_set_atoms(a, sa), _set_atoms(b, sb)]
            letters = _joint_letters(a.alphabet, atom_lists, 1)
            known = set(atom_lists[0]) | set(atom_lists[1])
            for letter in letters:
                letter_atoms = {letter[1]} if letter[1] is not None else set()
                context = frozenset(letter_atoms) | frozenset(
                    fresh_atoms(budget, known | letter_atoms)
                )
                da = _step_set(a, sa, letter, context)
                db = _step_set(b, sb, letter, context)
                word = path + (letter,)
                if a.accepts_set(da) != b.accepts_set(db):
                    _self_check(a, b, word)
                    return Counterexample(word)
                key = _canonical_groups([(a, da), (b, db)])
                if key in visited:
                    continue
                renaming: Dict[Atom, int] = {}
                for code_atoms in (_set_atoms(a, da), _set_atoms(b, db)):
                    for atom in code_atoms:
                        renaming.setdefault(atom, len(renaming))
                tagged = (
                    _tagged_side("A", a, da, renaming),
                    _tagged_side("B", b, db, renaming),
                )
                if use_congruence and _congruent(tagged, relation):
                    continue
                visited.add(key)
                if len(visited) > max_configs:
                    raise SearchLimit(
                        "more than %d canonical set pairs" % max_configs
                    )
                relation.append(tagged)
                next_queue.append((da, db, word))
        queue = next_queue
        level += 1
    return EqualUpToDepth(depth)


def reachable_orbit_count(acc: Acceptor, max_configs: int = DEFAULT_MAX_CONFIGS) -> int:
    """Number of canonical configurations reachable in a deterministic acceptor."""
    if not acc.deterministic:
        raise ValueError("reachable_orbit_count requires a deterministic acceptor")
    c0 = acc.initial_one()
    visited = {_canonical_groups([(acc, [c0])])}
    queue = [c0]
    while queue:
        c = queue.pop()
        for letter in _joint_letters(acc.alphabet, [acc.config_atoms(c)], 1):
            d = acc.step_one(c, letter)
            key = _canonical_groups([(acc, [d])])
            if key not in visited:
                visited.add(key)
                if len(visited) > max_configs:
                    raise SearchLimit("too many canonical configurations")
                queue.append(d)
    return len(visited)
