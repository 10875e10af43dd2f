"""Orbit-wise symbolic nominal automata and a uniform acceptor interface.

A symbolic automaton lists state *orbits* (name, register count, local
symmetry group, accepting flag) and guarded transition rules.  Concrete
states are configurations: an orbit name plus a tuple of pairwise
distinct register atoms; two configurations denote the same state iff
one's registers are a local-symmetry permutation of the other's.

Rules read one letter ``(tag, atom)``.  For arity-1 tags the guard is
either ``("reg", i)`` (atom equals register i) or ``"fresh"`` (atom
differs from all registers).  Destination registers are filled from
``("reg", i)``, ``"in"`` (the letter's atom) or ``"any"``; an ``any``
register ranges over all atoms distinct from the source registers and
the input atom (NFAs only), so together with explicit reg/in rules a
rule set can denote transitions over the whole atom set.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .kernel import (
    ATOM_TAG,
    Atom,
    Letter,
    SymGroup,
    Word,
    fresh_atoms,
    identity_perm,
    word_atoms,
)

Guard = Optional[object]  # ("reg", i) | "fresh" | None (arity-0 tags)
AssignSource = object  # ("reg", i) | "in" | "any"

FRESH = "fresh"
INPUT = "in"
ANY = "any"


class InvalidAutomaton(Exception):
    """Raised by validate() with a description of the first violation."""


@dataclass(frozen=True)
class AlphabetSpec:
    """Finitely many tags, each reading zero or one atom."""

    tags: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.tags]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate tag labels: %r" % (labels,))
        for lab, ar in self.tags:
            if ar not in (0, 1):
                raise ValueError("tag %s has unsupported arity %d" % (lab, ar))

    @staticmethod
    def pure_atoms() -> "AlphabetSpec":
        return AlphabetSpec(((ATOM_TAG, 1),))

    def arity(self, label: str) -> int:
        for lab, ar in self.tags:
            if lab == label:
                return ar
        raise KeyError("unknown tag %r" % (label,))

    def has(self, label: str) -> bool:
        return any(lab == label for lab, _ in self.tags)


@dataclass(frozen=True)
class OrbitDecl:
    name: str
    dim: int
    accepting: bool
    sym: SymGroup

    def __post_init__(self):
        if self.sym.degree != self.dim:
            raise ValueError("orbit %s: sym degree %d != dim %d" % (self.name, self.sym.degree, self.dim))


@dataclass(frozen=True)
class Rule:
    src: str
    tag: str
    guard: Guard
    dst: str
    assign: Tuple[AssignSource, ...]


@dataclass(frozen=True)
class Config:
    orbit: str
    regs: Tuple[Atom, ...]


@dataclass(frozen=True)
class SymbolicAutomaton:
    kind: str  # "dfa" | "nfa"
    alphabet: AlphabetSpec
    orbits: Tuple[OrbitDecl, ...]
    initial: Tuple[str, ...]
    rules: Tuple[Rule, ...]

    def orbit(self, name: str) -> OrbitDecl:
        for o in self.orbits:
            if o.name == name:
                return o
        raise KeyError("unknown orbit %r" % (name,))

    @property
    def max_dim(self) -> int:
        return max((o.dim for o in self.orbits), default=0)

    def rules_from(self, src: str, tag: str) -> List[Rule]:
        return [r for r in self.rules if r.src == src and r.tag == tag]


# ---------------------------------------------------------------------------
# raw execution


def _guard_applies(guard: Guard, regs: Tuple[Atom, ...], x: Optional[Atom]) -> bool:
    if guard is None:
        return True
    if guard == FRESH:
        return x not in regs
    kind, i = guard
    return x == regs[i]


def _apply_rule(
    aut: SymbolicAutomaton,
    rule: Rule,
    regs: Tuple[Atom, ...],
    x: Optional[Atom],
    context: Iterable[Atom],
) -> List[Config]:
    """All successor configurations of one rule instance.

    `context` supplies the candidate atoms for `any` registers; atoms
    equal to a source register or the input are excluded (those cases
    are covered by explicit reg/in rules).
    """
    dst_dim = aut.orbit(rule.dst).dim
    slots: List[Optional[Atom]] = []
    any_positions = []
    for j, src in enumerate(rule.assign):
        if src == INPUT:
            slots.append(x)
        elif src == ANY:
            slots.append(None)
            any_positions.append(j)
        else:
            _, i = src
            slots.append(regs[i])
    if not any_positions:
        out = tuple(slots)
        if len(set(out)) != len(out):
            return []
        return [Config(rule.dst, out)]
    banned = set(regs)
    if x is not None:
        banned.add(x)
    candidates = [a for a in context if a not in banned]
    results = []
    for combo in itertools.permutations(candidates, len(any_positions)):
        filled = list(slots)
        for pos, a in zip(any_positions, combo):
            filled[pos] = a
        out = tuple(filled)
        if len(set(out)) == len(out):
            results.append(Config(rule.dst, out))
    return results


def step_configs(
    aut: SymbolicAutomaton,
    config: Config,
    letter: Letter,
    context: Iterable[Atom] = (),
) -> List[Config]:
    """Successors of one configuration on one concrete letter."""
    tag, x = letter
    if not aut.alphabet.has(tag):
        raise KeyError("unknown tag %r" % (tag,))
    if (x is None) != (aut.alphabet.arity(tag) == 0):
        raise ValueError("arity mismatch for tag %r" % (tag,))
    out = []
    for rule in aut.rules_from(config.orbit, tag):
        if _guard_applies(rule.guard, config.regs, x):
            out.extend(_apply_rule(aut, rule, config.regs, x, context))
    return out


def normalize_config(aut: SymbolicAutomaton, c: Config) -> Config:
    """Minimal register tuple under the orbit's local symmetries."""
    sym = aut.orbit(c.orbit).sym
    if sym.is_trivial():
        return c
    best = min(tuple(c.regs[g[i]] for i in range(len(c.regs))) for g in sym.elements)
    return Config(c.orbit, best)


def step_dfa(aut: SymbolicAutomaton, c: Config, letter: Letter) -> Config:
    if aut.kind != "dfa":
        raise ValueError("step_dfa on a %s" % aut.kind)
    succ = step_configs(aut, c, letter)
    if len(succ) != 1:
        raise InvalidAutomaton(
            "non-deterministic step from %r on %r: %r" % (c, letter, succ)
        )
    return normalize_config(aut, succ[0])


def step_nfa(
    aut: SymbolicAutomaton,
    configs: Iterable[Config],
    letter: Letter,
    context: Iterable[Atom],
) -> FrozenSet[Config]:
    out = set()
    for c in configs:
        for d in step_configs(aut, c, letter, context):
            out.add(normalize_config(aut, d))
    return frozenset(out)


# ---------------------------------------------------------------------------
# acceptor interface: symbolic automata and programmatic targets


class Acceptor(ABC):
    """Uniform execution interface used by teachers and search.

    A configuration is an opaque hashable value.  `config_forms` lists
    the equivalent presentations of a configuration as (skeleton,
    ordered atom tuple): one per local symmetry.  Two configurations
    denote the same state iff some forms match after renaming atoms.
    """

    alphabet: AlphabetSpec
    deterministic: bool
    max_dim: int

    @abstractmethod
    def initial(self) -> FrozenSet:
        ...

    @abstractmethod
    def step(self, config, letter: Letter, context: FrozenSet[Atom] = frozenset()) -> FrozenSet:
        ...

    @abstractmethod
    def is_accepting(self, config) -> bool:
        ...

    @abstractmethod
    def config_forms(self, config) -> List[Tuple[object, Tuple[Atom, ...]]]:
        ...

    def config_atoms(self, config) -> Tuple[Atom, ...]:
        return self.config_forms(config)[0][1]

    def accepts_set(self, configs: Iterable) -> bool:
        return any(self.is_accepting(c) for c in configs)

    def initial_one(self):
        init = self.initial()
        if len(init) != 1:
            raise ValueError("acceptor is not deterministic at the start")
        return next(iter(init))

    def step_one(self, config, letter: Letter):
        succ = self.step(config, letter)
        if len(succ) != 1:
            raise ValueError("non-deterministic step from %r" % (config,))
        return next(iter(succ))


class AutomatonAcceptor(Acceptor):
    """Acceptor view of a symbolic automaton."""

    def __init__(self, aut: SymbolicAutomaton):
        self.aut = aut
        self.alphabet = aut.alphabet
        self.deterministic = aut.kind == "dfa"
        self.max_dim = aut.max_dim

    def initial(self) -> FrozenSet[Config]:
        return frozenset(Config(name, ()) for name in self.aut.initial)

    def step(self, config: Config, letter: Letter, context: FrozenSet[Atom] = frozenset()) -> FrozenSet[Config]:
        return frozenset(
            normalize_config(self.aut, d)
            for d in step_configs(self.aut, config, letter, context)
        )

    def is_accepting(self, config: Config) -> bool:
        return self.aut.orbit(config.orbit).accepting

    def config_forms(self, config: Config):
        sym = self.aut.orbit(config.orbit).sym
        regs = config.regs
        return [
            (config.orbit, tuple(regs[g[i]] for i in range(len(regs))))
            for g in sym.sorted_elements()
        ]


def accepts(acc, word: Word, max_configs: int = 10**6) -> bool:
    """Whether some run over the word ends in an accepting configuration.

    `any` registers are instantiated over the atoms of the remaining
    suffix plus max_dim fresh atoms, which is exhaustive up to
    equivariance.
    """
    if isinstance(acc, SymbolicAutomaton):
        acc = AutomatonAcceptor(acc)
    current = set(acc.initial())
    all_word_atoms = set(word_atoms(word))
    for i, letter in enumerate(word):
        suffix_atoms = set(word_atoms(word[i + 1 :]))
        config_atoms: Set[Atom] = set()
        for c in current:
            config_atoms.update(acc.config_atoms(c))
        budget = fresh_atoms(acc.max_dim, all_word_atoms | config_atoms)
        context = frozenset(suffix_atoms) | frozenset(budget)
        nxt = set()
        for c in current:
            nxt.update(acc.step(c, letter, context))
        current = nxt
        if len(current) > max_configs:
            raise RuntimeError("configuration set exceeded cap")
        if not current:
            return False
    return acc.accepts_set(current)


# ---------------------------------------------------------------------------
# canonical forms of configuration tuples and sets


def canonical_config_tuple(parts: Sequence[Tuple[Acceptor, object]]):
    """Canonical key of an ordered tuple of configurations.

    Atoms are renamed in order of first use; each configuration
    contributes the lexicographically best of its symmetry forms.  Two
    tuples in the same orbit of the joint permutation action get the
    same key.
    """
    best = None
    choices = [acc.config_forms(c) for acc, c in parts]
    for combo in itertools.product(*choices):
        renaming: Dict[Atom, int] = {}
        key = []
        for skeleton, atoms in combo:
            codes = tuple(renaming.setdefault(a, len(renaming)) for a in atoms)
            key.append((skeleton, codes))
        key_t = tuple(key)
        if best is None or key_t < best:
            best = key_t
    return best


def canonical_groups(groups: Sequence[Tuple["Acceptor", Iterable]]):
    """Canonical key (plus renaming) of a sequence of configuration sets
    sharing one atom renaming.

    Greedy lexicographic minimisation over element order, symmetry forms
    and first-use renaming, exploring tying prefixes.  A tying candidate
    is skipped when the positionwise atom swap against an already-taken
    candidate is an automorphism of the whole collection (it then leads
    to the same minimum); this keeps sets of interchangeable
    configurations linear instead of factorial.
    """
    flat: List[List[Tuple[int, object, List]]] = []
    by_atom: Dict[Atom, List[Tuple[int, frozenset]]] = {}
    group_form_sets: List[Set[frozenset]] = []
    for gi, (acc, configs) in enumerate(groups):
        bucket = []
        form_sets: Set[frozenset] = set()
        for c in configs:
            forms = acc.config_forms(c)
            bucket.append((gi, c, forms))
            fs = frozenset(forms)
            form_sets.add(fs)
            for a in forms[0][1]:
                by_atom.setdefault(a, []).append((gi, fs))
        flat.append(bucket)
        group_form_sets.append(form_sets)

    # renaming-invariant occurrence fingerprint per atom; breaks most ties
    # between structurally different atoms before any branching happens
    profile: Dict[Atom, tuple] = {}
    for a, occs in by_atom.items():
        entries = []
        for gi, fs in occs:
            for skeleton, atoms in sorted(fs, key=lambda f: (repr(f[0]), len(f[1]))):
                positions = tuple(i for i, x in enumerate(atoms) if x == a)
                if positions:
                    entries.append((gi, repr(skeleton), positions))
        profile[a] = tuple(sorted(entries))

    def symmetric(prev_atoms, atoms) -> bool:
        """Is swapping prev_atoms/atoms positionwise an automorphism?"""
        swap: Dict[Atom, Atom] = {}
        for a, b in zip(prev_atoms, atoms):
            for x, y in ((a, b), (b, a)):
                if swap.setdefault(x, y) != y:
                    return False
        moved = {a for a, b in swap.items() if a != b}
        if not moved:
            return True
        affected = set()
        for a in moved:
            affected.update(by_atom.get(a, ()))
        for gi, fs in affected:
            image = frozenset(
                (skeleton, tuple(swap.get(x, x) for x in at)) for skeleton, at in fs
            )
            if image not in group_form_sets[gi]:
                return False
        return True

    best: List[Optional[tuple]] = [None]
    best_renaming: List[Optional[Dict[Atom, int]]] = [None]

    def rec(gi: int, remaining: List, renaming: Dict[Atom, int], acc_key: tuple):
        if best[0] is not None and acc_key > best[0][: len(acc_key)]:
            return
        if not remaining:
            if gi + 1 == len(flat):
                if best[0] is None or acc_key < best[0]:
                    best[0] = acc_key
                    best_renaming[0] = dict(renaming)
            else:
                rec(gi + 1, list(flat[gi + 1]), renaming, acc_key + ("|",))
            return
        candidates = []
        for item in remaining:
            _, _, forms = item
            for skeleton, atoms in forms:
                ext = dict(renaming)
                codes = tuple(ext.setdefault(a, len(ext)) for a in atoms)
                fingerprints = tuple(
                    () if a in renaming else profile[a] for a in atoms
                )
                candidates.append(((skeleton, codes, fingerprints), item, ext, atoms))
        min_key = min(k for k, _, _, _ in candidates)
        taken: List[Tuple] = []
        seen_exts = set()
        for k, item, ext, atoms in candidates:
            if k != min_key:
                continue
            sig = (id(item), tuple(sorted(ext.items())))
            if sig in seen_exts:
                continue
            seen_exts.add(sig)
            if any(symmetric(prev, atoms) for prev in taken):
                continue
            taken.append(atoms)
            rec(gi, [x for x in remaining if x is not item], ext, acc_key + (k,))

    if not flat:
        return (), {}
    rec(0, list(flat[0]), {}, ())
    return best[0], best_renaming[0]


def canonical_config_set(acc: Acceptor, configs: Iterable):
    """Canonical key (plus renaming) of an unordered configuration set."""
    return canonical_groups([(acc, configs)])


# ---------------------------------------------------------------------------
# validation


def _letter_cases(dim: int, arity: int) -> List[Guard]:
    if arity == 0:
        return [None]
    return [("reg", i) for i in range(dim)] + [FRESH]


def validate(aut: SymbolicAutomaton) -> None:
    """Check well-formedness; raises InvalidAutomaton on the first violation."""
    if aut.kind not in ("dfa", "nfa"):
        raise InvalidAutomaton("unknown kind %r" % (aut.kind,))
    names = [o.name for o in aut.orbits]
    if len(set(names)) != len(names):
        raise InvalidAutomaton("duplicate orbit names")
    by_name = {o.name: o for o in aut.orbits}

    for o in aut.orbits:
        if o.dim < 0:
            raise InvalidAutomaton("orbit %s: negative dim" % o.name)
        for g in o.sym.elements:
            if sorted(g) != list(range(o.dim)):
                raise InvalidAutomaton("orbit %s: bad symmetry element %r" % (o.name, g))
        for p in o.sym.elements:
            for q in o.sym.elements:
                comp = tuple(p[q[i]] for i in range(o.dim))
                if comp not in o.sym.elements:
                    raise InvalidAutomaton("orbit %s: symmetries not a group" % o.name)

    if aut.kind == "dfa" and len(aut.initial) != 1:
        raise InvalidAutomaton("dfa must have exactly one initial orbit")
    for name in aut.initial:
        if name not in by_name:
            raise InvalidAutomaton("initial orbit %r not declared" % (name,))
        if by_name[name].dim != 0:
            raise InvalidAutomaton("initial orbit %s has dim > 0" % name)

    for r in aut.rules:
        if r.src not in by_name:
            raise InvalidAutomaton("rule references unknown orbit %r" % (r.src,))
        if r.dst not in by_name:
            raise InvalidAutomaton("rule references unknown orbit %r" % (r.dst,))
        if not aut.alphabet.has(r.tag):
            raise InvalidAutomaton("rule references unknown tag %r" % (r.tag,))
        src, dst = by_name[r.src], by_name[r.dst]
        arity = aut.alphabet.arity(r.tag)
        if arity == 0 and r.guard is not None:
            raise InvalidAutomaton("rule %r: guard on arity-0 tag" % (r,))
        if arity == 1:
            if r.guard != FRESH and not (
                isinstance(r.guard, tuple) and r.guard[0] == "reg" and 0 <= r.guard[1] < src.dim
            ):
                raise InvalidAutomaton("rule %r: bad guard" % (r,))
        if len(r.assign) != dst.dim:
            raise InvalidAutomaton("rule %r: assign arity != dst dim" % (r,))
        for a in r.assign:
            if a == INPUT:
                if arity != 1:
                    raise InvalidAutomaton("rule %r: 'in' with arity-0 tag" % (r,))
            elif a == ANY:
                if aut.kind != "nfa":
                    raise InvalidAutomaton("rule %r: 'any' register in a dfa" % (r,))
            elif not (isinstance(a, tuple) and a[0] == "reg" and 0 <= a[1] < src.dim):
                raise InvalidAutomaton("rule %r: bad assign source %r" % (r, a))
        _check_distinctness(r, src, arity)

    if aut.kind == "dfa":
        for o in aut.orbits:
            for tag, arity in aut.alphabet.tags:
                for case in _letter_cases(o.dim, arity):
                    matching = [r for r in aut.rules_from(o.name, tag) if r.guard == case]
                    if len(matching) != 1:
                        raise InvalidAutomaton(
                            "orbit %s, tag %s, case %r: %d rules (dfa totality/determinism)"
                            % (o.name, tag, case, len(matching))
                        )

    _check_symmetry_coherence(aut)


def _check_distinctness(r: Rule, src: OrbitDecl, arity: int) -> None:
    """Two destination registers must not be provably equal."""
    for j1 in range(len(r.assign)):
        for j2 in range(j1 + 1, len(r.assign)):
            a1, a2 = r.assign[j1], r.assign[j2]
            if a1 == a2 and a1 != ANY:
                raise InvalidAutomaton("rule %r: registers %d,%d always equal" % (r, j1, j2))
            pair = {a1, a2}
            if INPUT in pair and isinstance(r.guard, tuple):
                other = (pair - {INPUT}).pop() if len(pair) == 2 else INPUT
                if other == ("reg", r.guard[1]):
                    raise InvalidAutomaton(
                        "rule %r: 'in' equals guarded register %d" % (r, r.guard[1])
                    )


def _check_symmetry_coherence(aut: SymbolicAutomaton) -> None:
    """Extensional check that rules respect each orbit's local symmetries.

    Configurations related by a source symmetry must have identical
    successor state sets on every letter case.
    """
    acc = AutomatonAcceptor(aut)
    for o in aut.orbits:
        if o.sym.is_trivial():
            continue
        base = tuple(range(o.dim))
        budget = fresh_atoms(aut.max_dim + 1, range(o.dim + 1))
        for g in o.sym.sorted_elements():
            if g == identity_perm(o.dim):
                continue
            permuted = tuple(base[g[i]] for i in range(o.dim))
            for tag, arity in aut.alphabet.tags:
                xs: List[Optional[Atom]] = [None] if arity == 0 else list(base) + [o.dim]
                for x in xs:
                    letter = (tag, x)
                    context = frozenset(budget)
                    s1 = acc.step(Config(o.name, base), letter, context)
                    s2 = acc.step(Config(o.name, permuted), letter, context)
                    if s1 != s2:
                        raise InvalidAutomaton(
                            "orbit %s: rules not coherent with symmetry %r "
                            "(tag %s, input %r)" % (o.name, g, tag, x)
                        )
