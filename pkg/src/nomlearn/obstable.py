"""Symbolic observation table over equivariant row and column sets.

Rows and columns are stored as word shapes (one per orbit); a cell holds
the membership bit of one orbit of concatenations, keyed by the joint
shape of row word and column word.  All row comparisons are decided on a
finite probe set: instantiations of the column shapes over the atoms at
hand plus ordered fresh atoms, which determines the full row function by
equivariance.

Deterministic enumeration order everywhere: shapes sorted by length then
code sequence, placements with fresh atoms before bound ones.  Witnesses
are the first hits in that order, which pins down the exact tables the
learner walks through.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .automata import AlphabetSpec
from .kernel import (
    Atom,
    Letter,
    SymGroup,
    Word,
    WordShape,
    fresh_atoms,
    identity_perm,
    instantiations,
    joint_word_shapes,
    shape_of_word,
    shape_sort_key,
    word_atoms,
    word_of_shape,
    word_prefix_shapes,
    word_shape_classes,
    word_suffix_shapes,
    fmt_word,
)

EMPTY: WordShape = ()


class TableError(Exception):
    """Internal invariant violation (e.g. a cell read before fill)."""


@dataclass
class RowClass:
    """One orbit of upper rows: representative plus derived state data."""

    shape: WordShape
    word: Word
    members: List[WordShape]
    supp: Tuple[Atom, ...]
    sym: SymGroup
    accepting: bool


class ObservationTable:
    def __init__(self, alphabet: AlphabetSpec, oracle: Callable[[Word], bool]):
        self.alphabet = alphabet
        self.oracle = oracle
        self.S: Set[WordShape] = {EMPTY}
        self.E: Set[WordShape] = {EMPTY}
        self.cells: Dict[WordShape, bool] = {}
        self.orbit_queries = 0
        self._filled: Set[Tuple[WordShape, WordShape]] = set()
        self._version = 0
        self._classes: Optional[List[RowClass]] = None
        self._prime: Dict[WordShape, bool] = {}
        self._supports: Dict[Word, Tuple[Atom, ...]] = {}

    # -- shape bookkeeping --------------------------------------------------

    def _bump(self) -> None:
        self._version += 1
        self._classes = None
        self._prime.clear()
        self._supports.clear()

    def upper_shapes(self) -> List[WordShape]:
        return sorted(self.S, key=shape_sort_key)

    def extension_shapes(self, shape: WordShape) -> List[WordShape]:
        """One-letter extensions of a shape, all atom cases per tag."""
        k = word_shape_classes(shape)
        out = []
        for tag, arity in self.alphabet.tags:
            if arity == 0:
                out.append(shape + ((tag, None),))
            else:
                out.extend(shape + ((tag, c),) for c in range(k + 1))
        return out

    def lower_shapes(self) -> List[WordShape]:
        seen = set()
        for s in self.S:
            seen.update(self.extension_shapes(s))
        return sorted(seen, key=shape_sort_key)

    def all_shapes(self) -> List[WordShape]:
        seen = set(self.S)
        for s in self.S:
            seen.update(self.extension_shapes(s))
        return sorted(seen, key=shape_sort_key)

    def column_shapes(self) -> List[WordShape]:
        return sorted(self.E, key=shape_sort_key)

    def max_classes(self) -> int:
        return max(word_shape_classes(s) for s in self.all_shapes())

    # -- filling -------------------------------------------------------------

    def fill(self) -> "ObservationTable":
        """Ensure a cell for every joint shape of (S u S.A) x E."""
        cols = self.column_shapes()
        for sigma in self.all_shapes():
            for tau in cols:
                pair = (sigma, tau)
                if pair in self._filled:
                    continue
                for rho in joint_word_shapes(sigma, tau):
                    if rho not in self.cells:
                        self.cells[rho] = bool(self.oracle(word_of_shape(rho)))
                        self.orbit_queries += 1
                self._filled.add(pair)
        return self

    def add_row_orbit(self, shape: WordShape) -> "ObservationTable":
        new = word_prefix_shapes(shape) - self.S
        if new:
            self.S.update(new)
            self._bump()
        self.fill()
        return self

    def add_column_orbit(self, shape: WordShape) -> "ObservationTable":
        new = word_suffix_shapes(shape) - self.E
        if new:
            self.E.update(new)
            self._bump()
        self.fill()
        return self

    # -- row evaluation -------------------------------------------------------

    def row_value(self, u: Word, e: Word) -> bool:
        key = shape_of_word(u + e)
        try:
            return self.cells[key]
        except KeyError:
            raise TableError(
                "cell missing for %s . %s (table not filled?)" % (fmt_word(u), fmt_word(e))
            )

    def probes(self, pool: Tuple[Atom, ...]) -> Iterator[Word]:
        """Concrete column words determining rows over the given atoms."""
        for tau in self.column_shapes():
            yield from instantiations(tau, pool)

    @staticmethod
    def _merge_atoms(*words: Word) -> Tuple[Atom, ...]:
        seen: Dict[Atom, None] = {}
        for w in words:
            for a in word_atoms(w):
                if a not in seen:
                    seen[a] = None
        return tuple(seen)

    def rows_equal(self, u: Word, v: Word) -> bool:
        if u == v:
            return True
        pool = self._merge_atoms(u, v)
        for e in self.probes(pool):
            if self.row_value(u, e) != self.row_value(v, e):
                return False
        return True

    def rows_leq(self, u: Word, v: Word) -> bool:
        pool = self._merge_atoms(u, v)
        for e in self.probes(pool):
            if self.row_value(u, e) and not self.row_value(v, e):
                return False
        return True

    def row_join(self, words: Iterable[Word], pool: Tuple[Atom, ...]) -> Tuple[bool, ...]:
        vec = None
        for u in words:
            cur = tuple(self.row_value(u, e) for e in self.probes(pool))
            vec = cur if vec is None else tuple(a or b for a, b in zip(vec, cur))
        if vec is None:
            vec = tuple(False for _ in self.probes(pool))
        return vec

    # -- supports and symmetries ----------------------------------------------

    def row_support(self, u: Word) -> Tuple[Atom, ...]:
        """Atoms of u the row function depends on, in first-occurrence order."""
        if u in self._supports:
            return self._supports[u]
        atoms = word_atoms(u)
        out = []
        if atoms:
            b = fresh_atoms(1, atoms)[0]
            for a in atoms:
                swapped = tuple(
                    (lab, b if x == a else x) for lab, x in u
                )
                if not self.rows_equal(u, swapped):
                    out.append(a)
        supp = tuple(out)
        self._supports[u] = supp
        return supp

    def row_symmetries(self, u: Word) -> SymGroup:
        """Permutations of the support tuple fixing the row."""
        supp = self.row_support(u)
        k = len(supp)
        elements = set()
        for g in itertools.permutations(range(k)):
            mapping = {supp[i]: supp[g[i]] for i in range(k)}
            v = tuple((lab, mapping.get(x, x)) for lab, x in u)
            if self.rows_equal(u, v):
                elements.add(g)
        return SymGroup(k, frozenset(elements))

    # -- orbit matching --------------------------------------------------------

    def find_orbit_match(self, u: Word, candidates: Iterable[WordShape]) -> Optional[Word]:
        """First candidate-shape instantiation with the same row as u."""
        atoms = word_atoms(u)
        for shape in sorted(candidates, key=shape_sort_key):
            for v in instantiations(shape, atoms):
                if self.rows_equal(u, v):
                    return v
        return None

    def _match_class(self, u: Word, cls: RowClass, supp_u: Tuple[Atom, ...]) -> Optional[Word]:
        """Fast orbit match: non-support registers can be taken fresh."""
        if len(supp_u) != len(cls.supp):
            return None
        for v in instantiations(
            cls.shape, supp_u, avoid=word_atoms(u), require_all_pool=True
        ):
            if self.rows_equal(u, v):
                return v
        return None

    def classes(self) -> List[RowClass]:
        """Orbits of upper rows with representative state data."""
        if self._classes is not None:
            return self._classes
        out: List[RowClass] = []
        for shape in self.upper_shapes():
            u = word_of_shape(shape)
            supp_u = self.row_support(u)
            for cls in out:
                if self._match_class(u, cls, supp_u) is not None:
                    cls.members.append(shape)
                    break
            else:
                out.append(
                    RowClass(
                        shape=shape,
                        word=u,
                        members=[shape],
                        supp=supp_u,
                        sym=self.row_symmetries(u),
                        accepting=self.row_value(u, ()),
                    )
                )
        self._classes = out
        return out

    def class_of(self, u: Word) -> Optional[Tuple[int, Word]]:
        """Index and aligned instantiation of the class matching row(u)."""
        supp_u = self.row_support(u)
        for i, cls in enumerate(self.classes()):
            v = self._match_class(u, cls, supp_u)
            if v is not None:
                return i, v
        return None

    # -- closedness and consistency ---------------------------------------------

    def find_unclosed(self) -> Optional[WordShape]:
        classes = self.classes()
        for shape in self.lower_shapes():
            if shape in self.S:
                continue
            u = word_of_shape(shape)
            supp_u = self.row_support(u)
            if not any(self._match_class(u, cls, supp_u) is not None for cls in classes):
                return shape
        return None

    def _letters(self, pool: Tuple[Atom, ...]) -> List[Letter]:
        f = fresh_atoms(1, pool)
        letters: List[Letter] = []
        for tag, arity in self.alphabet.tags:
            if arity == 0:
                letters.append((tag, None))
            else:
                letters.extend((tag, x) for x in pool + f)
        return letters

    def _equal_pairs(self) -> Iterator[Tuple[Word, Word]]:
        """Orbit representatives of pairs of row-equal upper rows."""
        for cls in self.classes():
            for shape1 in cls.members:
                s1 = word_of_shape(shape1)
                atoms1 = word_atoms(s1)
                for shape2 in cls.members:
                    for s2 in instantiations(shape2, atoms1):
                        if s2 == s1:
                            continue
                        if self.rows_equal(s1, s2):
                            yield s1, s2

    def find_inconsistent(self) -> Optional[Tuple[Word, Word, Letter, Word]]:
        for s1, s2 in self._equal_pairs():
            pool = self._merge_atoms(s1, s2)
            for letter in self._letters(pool):
                u1 = s1 + (letter,)
                u2 = s2 + (letter,)
                probe_pool = self._merge_atoms(u1, u2)
                for e in self.probes(probe_pool):
                    if self.row_value(u1, e) != self.row_value(u2, e):
                        return s1, s2, letter, e
        return None

    # -- prime rows (residual automaton machinery) --------------------------------

    def is_prime(self, shape: WordShape) -> bool:
        """Primality of the row orbit: not the join of strictly smaller rows.

        A join needs at least one component, so the all-zero row (with
        nothing strictly below it) is prime.  Components range over
        instantiations of all table shapes on the row's atoms plus a
        fresh budget (one atom per possible register).
        """
        if shape in self._prime:
            return self._prime[shape]
        u = word_of_shape(shape)
        atoms = word_atoms(u)
        budget = fresh_atoms(self.max_classes(), atoms)
        pool = atoms + budget
        probe_list = list(self.probes(pool))
        vec_u = [self.row_value(u, e) for e in probe_list]
        need = {i for i, val in enumerate(vec_u) if val}
        if not need:
            self._prime[shape] = True  # nothing lies strictly below
            return True
        zeros = [i for i, val in enumerate(vec_u) if not val]
        remaining = set(need)
        for other in self.all_shapes():
            for v in instantiations(other, pool, extra_fresh=0):
                if v == u:
                    continue
                if any(self.row_value(v, probe_list[i]) for i in zeros):
                    continue  # not below row(u)
                ones = {i for i in need if self.row_value(v, probe_list[i])}
                if ones == need:
                    continue  # equal row, not a strict component
                remaining -= ones
                if not remaining:
                    self._prime[shape] = False
                    return False
        self._prime[shape] = True
        return True

    def prime_rows(self) -> Tuple[FrozenSet[WordShape], FrozenSet[WordShape]]:
        """(PR, PR_top): prime shapes of the whole table, and the prime
        upper-class representatives."""
        pr = frozenset(s for s in self.all_shapes() if self.is_prime(s))
        pr_top = frozenset(
            cls.shape for cls in self.classes() if self.is_prime(cls.shape)
        )
        return pr, pr_top

    def prime_top_classes(self) -> List[Tuple[int, RowClass]]:
        return [
            (i, cls)
            for i, cls in enumerate(self.classes())
            if self.is_prime(cls.shape)
        ]

    def find_rfsa_unclosed(self) -> Optional[WordShape]:
        tops = [cls for _, cls in self.prime_top_classes()]
        for shape in self.lower_shapes():
            if shape in self.S:
                continue
            if not self.is_prime(shape):
                continue
            u = word_of_shape(shape)
            supp_u = self.row_support(u)
            if not any(self._match_class(u, cls, supp_u) is not None for cls in tops):
                return shape
        return None

    def find_rfsa_inconsistent(self) -> Optional[Tuple[Word, Word, Letter, Word]]:
        uppers = self.upper_shapes()
        for shape1 in uppers:
            s1 = word_of_shape(shape1)
            atoms1 = word_atoms(s1)
            for shape2 in uppers:
                for s2 in instantiations(shape2, atoms1):
                    if s2 == s1 or not self.rows_leq(s1, s2):
                        continue
                    pool = self._merge_atoms(s1, s2)
                    for letter in self._letters(pool):
                        u1 = s1 + (letter,)
                        u2 = s2 + (letter,)
                        probe_pool = self._merge_atoms(u1, u2)
                        for e in self.probes(probe_pool):
                            if self.row_value(u1, e) and not self.row_value(u2, e):
                                return s1, s2, letter, e
        return None

    # -- debugging ----------------------------------------------------------------

    def dump(self) -> str:
        lines = []
        cols = self.column_shapes()
        for part, shapes in (("S", self.upper_shapes()),
                             ("SA", [s for s in self.lower_shapes() if s not in self.S])):
            for sigma in shapes:
                for tau in cols:
                    entries = []
                    for rho in sorted(joint_word_shapes(sigma, tau), key=shape_sort_key):
                        entries.append("%s=%d" % (fmt_word(rho), self.cells[rho]))
                    lines.append(
                        "%s %s | %s : %s"
                        % (part, fmt_word(sigma), fmt_word(tau), " ".join(entries))
                    )
        return "\n".join(lines) + "\n"


class RowView:
    """Concrete row of the table; all evaluation goes through the cells."""

    def __init__(self, table: ObservationTable, word: Word):
        self.table = table
        self.word = word

    def value(self, e: Word) -> bool:
        return self.table.row_value(self.word, e)

    def equals(self, other: "RowView") -> bool:
        return self.table.rows_equal(self.word, other.word)

    def leq(self, other: "RowView") -> bool:
        return self.table.rows_leq(self.word, other.word)

    def support(self) -> Tuple[Atom, ...]:
        return self.table.row_support(self.word)

    def symmetries(self) -> SymGroup:
        return self.table.row_symmetries(self.word)

    def __repr__(self) -> str:
        return "RowView(%s)" % fmt_word(self.word)
