"""Atoms, permutations, word shapes and small permutation groups.

Atoms are plain non-negative ints that are only ever compared for
equality.  A word is a tuple of letters ``(label, atom-or-None)``; a
pure-atom alphabet uses the single anonymous label ``"a"``.  The orbit
of a word under atom permutations is represented by its *shape*: the
word with every atom replaced by its first-occurrence index.  Shapes of
plain atom tuples are restricted-growth sequences (one per set
partition), shapes of tagged words keep the labels in place.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

Atom = int
Letter = Tuple[str, Optional[Atom]]
Word = Tuple[Letter, ...]
Shape = Tuple[int, ...]
WordShape = Tuple[Letter, ...]

ATOM_TAG = "a"


def fresh_atoms(count: int, avoid: Iterable[Atom]) -> Tuple[Atom, ...]:
    """The `count` smallest naturals not in `avoid`, in increasing order."""
    taken = set(avoid)
    out = []
    candidate = 0
    while len(out) < count:
        if candidate not in taken:
            out.append(candidate)
        candidate += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# permutations of atoms (finite support)


class Perm:
    """Finite-support permutation of atoms; identity outside its mapping."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Dict[Atom, Atom] | Iterable[Tuple[Atom, Atom]] = ()):
        m = dict(mapping)
        m = {k: v for k, v in m.items() if k != v}
        if set(m.keys()) != set(m.values()):
            raise ValueError("mapping is not a finite-support bijection: %r" % (m,))
        self._map = m

    @staticmethod
    def swap(a: Atom, b: Atom) -> "Perm":
        if a == b:
            return Perm()
        return Perm({a: b, b: a})

    @staticmethod
    def random(atoms: Sequence[Atom], rng) -> "Perm":
        """Random permutation of the given atoms (identity elsewhere)."""
        atoms = list(atoms)
        image = list(atoms)
        rng.shuffle(image)
        return Perm(dict(zip(atoms, image)))

    def __call__(self, a: Atom) -> Atom:
        return self._map.get(a, a)

    def word(self, word: Word) -> Word:
        return tuple((lab, None if x is None else self(x)) for lab, x in word)

    def atoms(self, atoms: Sequence[Atom]) -> Tuple[Atom, ...]:
        return tuple(self(a) for a in atoms)

    def inverse(self) -> "Perm":
        return Perm({v: k for k, v in self._map.items()})

    def compose(self, other: "Perm") -> "Perm":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        domain = set(self._map) | set(other._map)
        return Perm({d: self(other(d)) for d in domain})

    @property
    def mapping(self) -> Dict[Atom, Atom]:
        return dict(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        return "Perm(%r)" % (self._map,)


# ---------------------------------------------------------------------------
# permutation groups of small degree, stored extensionally

PermTuple = Tuple[int, ...]


def identity_perm(degree: int) -> PermTuple:
    return tuple(range(degree))


def compose_perms(p: PermTuple, q: PermTuple) -> PermTuple:
    """p after q: i -> p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert_perm(p: PermTuple) -> PermTuple:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class SymGroup:
    """Subgroup of S_k with all elements listed (k is small, <= 5 here)."""

    degree: int
    elements: frozenset

    def __post_init__(self):
        if identity_perm(self.degree) not in self.elements:
            raise ValueError("group without identity")

    @staticmethod
    def trivial(degree: int) -> "SymGroup":
        return SymGroup(degree, frozenset([identity_perm(degree)]))

    @staticmethod
    def full(degree: int) -> "SymGroup":
        return SymGroup(degree, frozenset(itertools.permutations(range(degree))))

    def sorted_elements(self) -> List[PermTuple]:
        return sorted(self.elements)

    def __contains__(self, p: PermTuple) -> bool:
        return p in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def group_closure(generators: Iterable[PermTuple], degree: int) -> SymGroup:
    """Smallest subgroup of S_degree containing the generators."""
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise ValueError("not a permutation of 0..%d: %r" % (degree - 1, g))
    elements = {identity_perm(degree)}
    frontier = list(gens)
    elements.update(frontier)
    while frontier:
        nxt = []
        for p in frontier:
            for q in list(elements):
                for r in (compose_perms(p, q), compose_perms(q, p), invert_perm(p)):
                    if r not in elements:
                        elements.add(r)
                        nxt.append(r)
        frontier = nxt
    return SymGroup(degree, frozenset(elements))


# ---------------------------------------------------------------------------
# shapes of plain atom tuples (restricted-growth sequences)


def shape_of(atoms: Sequence[Atom]) -> Shape:
    """First-occurrence renaming of an atom sequence."""
    seen: Dict[Atom, int] = {}
    return tuple(seen.setdefault(a, len(seen)) for a in atoms)


def is_shape(codes: Sequence[int]) -> bool:
    mx = -1
    for c in codes:
        if c < 0 or c > mx + 1:
            return False
        mx = max(mx, c)
    return True


def canonical_word(shape: Shape) -> Tuple[Atom, ...]:
    """The representative word of a shape: the codes read as atoms."""
    if not is_shape(shape):
        raise ValueError("malformed shape: %r" % (shape,))
    return tuple(shape)


def enumerate_shapes(n: int) -> Set[Shape]:
    """All shapes of length n; there are Bell(n) of them."""
    out = {()}
    for _ in range(n):
        nxt = set()
        for s in out:
            k = (max(s) + 1) if s else 0
            for c in range(k + 1):
                nxt.add(s + (c,))
        out = nxt
    return out


def num_classes(shape: Shape) -> int:
    return (max(shape) + 1) if shape else 0


def placements(
    n_classes: int,
    pool: Sequence[Atom],
    fresh: Sequence[Atom],
    require_all_pool: bool = False,
) -> Iterator[Tuple[Atom, ...]]:
    """Injective assignments of `n_classes` classes to pool or fresh atoms.

    Fresh atoms are consumed in the given order and tried before pool
    atoms, so the fully-generic placement comes first.  With
    `require_all_pool`, only assignments covering every pool atom are
    produced.
    """
    pool = tuple(pool)

    def rec(i: int, used: int, next_fresh: int):
        if i == n_classes:
            if not require_all_pool or used == (1 << len(pool)) - 1:
                yield ()
            return
        if require_all_pool:
            # not enough slots left to cover the pool -> prune
            missing = len(pool) - bin(used).count("1")
            if missing > n_classes - i:
                return
        if next_fresh < len(fresh):
            for rest in rec(i + 1, used, next_fresh + 1):
                yield (fresh[next_fresh],) + rest
        for j, a in enumerate(pool):
            if not used & (1 << j):
                for rest in rec(i + 1, used | (1 << j), next_fresh):
                    yield (a,) + rest

    return rec(0, 0, 0)


def joint_shapes(sigma: Shape, tau: Shape) -> Set[Shape]:
    """Shapes of concatenations u.v with shape(u)=sigma and shape(v)=tau."""
    k1 = num_classes(sigma)
    k2 = num_classes(tau)
    base = canonical_word(sigma)
    fresh = tuple(range(k1, k1 + k2))
    out = set()
    for assign in placements(k2, tuple(range(k1)), fresh):
        out.add(shape_of(base + tuple(assign[c] for c in tau)))
    return out


def count_product_orbits(dims: Sequence[int]) -> int:
    """Orbit count of a product of distinct-tuple spaces A^(k1) x ... x A^(kn).

    Counts equality patterns of the concatenated tuple where positions
    inside one block are pairwise distinct.
    """
    blocks = []
    for i, k in enumerate(dims):
        if k < 0:
            raise ValueError("negative dimension")
        blocks.extend([i] * k)

    def rec(pos: int, codes: Tuple[int, ...]) -> int:
        if pos == len(blocks):
            return 1
        k = (max(codes) + 1) if codes else 0
        total = 0
        for c in range(k + 1):
            # same block and same code would collapse two distinct registers
            clash = any(
                codes[j] == c and blocks[j] == blocks[pos] for j in range(pos)
            )
            if not clash:
                total += rec(pos + 1, codes + (c,))
        return total

    return rec(0, ())


def prefixes_of(s: Shape) -> Set[Shape]:
    return {tuple(s[:i]) for i in range(len(s) + 1)}


def suffixes_of(s: Shape) -> Set[Shape]:
    return {shape_of(s[i:]) for i in range(len(s) + 1)}


# ---------------------------------------------------------------------------
# tagged words: the same machinery with labels carried along


def shape_of_word(word: Word) -> WordShape:
    seen: Dict[Atom, int] = {}
    out = []
    for lab, x in word:
        out.append((lab, None if x is None else seen.setdefault(x, len(seen))))
    return tuple(out)


def is_word_shape(ws: WordShape) -> bool:
    return is_shape([c for _, c in ws if c is not None])


def word_of_shape(ws: WordShape) -> Word:
    if not is_word_shape(ws):
        raise ValueError("malformed word shape: %r" % (ws,))
    return tuple(ws)


def word_atoms(word: Word) -> Tuple[Atom, ...]:
    """Distinct atoms of a word in first-occurrence order."""
    seen: Dict[Atom, None] = {}
    for _, x in word:
        if x is not None and x not in seen:
            seen[x] = None
    return tuple(seen)


def word_shape_classes(ws: WordShape) -> int:
    codes = [c for _, c in ws if c is not None]
    return (max(codes) + 1) if codes else 0


def word_labels(word: Word) -> Tuple[str, ...]:
    return tuple(lab for lab, _ in word)


def instantiations(
    ws: WordShape,
    pool: Sequence[Atom],
    avoid: Iterable[Atom] = (),
    extra_fresh: Optional[int] = None,
    require_all_pool: bool = False,
) -> Iterator[Word]:
    """Concrete words of shape `ws` with atoms drawn from pool or fresh ones.

    Fresh atoms are the smallest naturals outside pool+avoid.  With
    extra_fresh=0 only pool atoms are used.
    """
    k = word_shape_classes(ws)
    n_fresh = k if extra_fresh is None else min(extra_fresh, k)
    fresh = fresh_atoms(n_fresh, set(pool) | set(avoid))
    for assign in placements(k, pool, fresh, require_all_pool=require_all_pool):
        yield tuple(
            (lab, None if c is None else assign[c]) for lab, c in ws
        )


def joint_word_shapes(ws1: WordShape, ws2: WordShape) -> Set[WordShape]:
    """Shapes of concatenations u.v with shape(u)=ws1 and shape(v)=ws2."""
    base = word_of_shape(ws1)
    k1 = word_shape_classes(ws1)
    out = set()
    for w2 in instantiations(ws2, tuple(range(k1))):
        out.add(shape_of_word(base + w2))
    return out


def word_prefix_shapes(ws: WordShape) -> Set[WordShape]:
    return {shape_of_word(ws[:i]) for i in range(len(ws) + 1)}


def word_suffix_shapes(ws: WordShape) -> Set[WordShape]:
    return {shape_of_word(ws[i:]) for i in range(len(ws) + 1)}


def shape_sort_key(ws: WordShape):
    return (len(ws), tuple((lab, -1 if c is None else c) for lab, c in ws))


def atom_word(atoms: Sequence[Atom]) -> Word:
    """Wrap a plain atom sequence as a word over the anonymous tag."""
    return tuple((ATOM_TAG, a) for a in atoms)


def fmt_word(word: Word) -> str:
    if not word:
        return "<e>"
    parts = []
    for lab, x in word:
        parts.append(lab if x is None else "%s%d" % (lab, x))
    return ".".join(parts)
