"""Learning loops for nominal DFAs and RFSAs, plus hypothesis construction.

`learn_dfa` runs the classic closed/consistent loop with counterexamples
added as row-prefix orbits ("rows" mode) or column-suffix orbits ("cols"
mode); `learn_nfa` runs the residual-automaton variant where
counterexamples always extend the columns.  Hypotheses are built from
row-orbit classes: supports become registers, row symmetries become the
orbit's local symmetry group.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from .automata import (
    ANY,
    FRESH,
    INPUT,
    AutomatonAcceptor,
    OrbitDecl,
    Rule,
    SymbolicAutomaton,
    accepts,
    validate,
)
from .equivalence import (
    DEFAULT_MAX_CONFIGS,
    Counterexample,
    Equal,
    EqualUpToDepth,
    dfa_equiv,
    nfa_equiv_bounded,
)
from .kernel import Word, fmt_word, fresh_atoms, shape_of_word, word_atoms
from .obstable import ObservationTable
from .targets import Target


class LearnerError(Exception):
    pass


class TeacherError(Exception):
    pass


@dataclass
class LearnReport:
    automaton: SymbolicAutomaton
    orbits: int
    dimension: int
    eq_queries: int
    orbit_membership_queries: int
    concrete_membership_queries: int
    wall_ms: float
    algo: str = ""
    target: str = ""
    depth: Optional[int] = None


class Teacher:
    """Membership plus equivalence oracle with query counters.

    Counterexamples are self-checked: they must separate hypothesis and
    target under direct execution.
    """

    def __init__(self, alphabet, membership: Callable[[Word], bool], equivalence, name=""):
        self.alphabet = alphabet
        self._member = membership
        self._equiv = equivalence
        self.name = name
        self.membership_calls = 0
        self.eq_queries = 0
        self.counterexamples: List[Word] = []
        self.depth: Optional[int] = None

    def membership(self, word: Word) -> bool:
        self.membership_calls += 1
        return bool(self._member(word))

    def equivalence(self, hypothesis: SymbolicAutomaton):
        self.eq_queries += 1
        res = self._equiv(hypothesis)
        if isinstance(res, Counterexample):
            if accepts(hypothesis, res.word) == self.membership(res.word):
                raise TeacherError(
                    "counterexample %s does not separate hypothesis and target"
                    % fmt_word(res.word)
                )
            self.counterexamples.append(res.word)
        return res


def default_nfa_depth(target: Target) -> int:
    return 3 * (target.orbit_hint + 1)


def teacher_for_target(
    target: Target,
    algo: str,
    depth: Optional[int] = None,
    max_configs: int = DEFAULT_MAX_CONFIGS,
) -> Teacher:
    alphabet = target.acceptor.alphabet
    if algo in ("lstar", "lstarcol"):
        if not target.deterministic:
            raise LearnerError("target %s has no deterministic acceptor" % target.name)

        def equiv(hyp):
            return dfa_equiv(AutomatonAcceptor(hyp), target.acceptor, max_configs)

        teacher = Teacher(alphabet, target.membership, equiv, target.name)
    elif algo == "nlstar":
        d = default_nfa_depth(target) if depth is None else depth

        def equiv(hyp):
            return nfa_equiv_bounded(
                AutomatonAcceptor(hyp), target.acceptor, d, max_configs
            )

        teacher = Teacher(alphabet, target.membership, equiv, target.name)
        teacher.depth = d
    else:
        raise LearnerError("unknown algorithm %r" % algo)
    return teacher


def eq_query_bound(n: int, k: int) -> int:
    """Worst-case equivalence queries for a learned automaton with n
    orbits of dimension at most k."""
    logk = math.log2(k) if k > 1 else 0.0
    return math.ceil(n + n * (k + k * logk))


# ---------------------------------------------------------------------------
# hypothesis construction


def _state_cases(table: ObservationTable, cls):
    """(guard, letter) cases for one state class: one per support register
    plus the fresh case, per tag."""
    cases = []
    for tag, arity in table.alphabet.tags:
        if arity == 0:
            cases.append((tag, None, None))
        else:
            for j, atom in enumerate(cls.supp):
                cases.append((tag, ("reg", j), atom))
            fresh = fresh_atoms(1, word_atoms(cls.word))[0]
            cases.append((tag, FRESH, fresh))
    return cases


def build_hypothesis_dfa(table: ObservationTable, check: bool = True) -> SymbolicAutomaton:
    if check:
        if table.find_unclosed() is not None:
            raise LearnerError("table is not closed")
        if table.find_inconsistent() is not None:
            raise LearnerError("table is not consistent")
    classes = table.classes()
    names = ["q%d" % i for i in range(len(classes))]
    orbits = tuple(
        OrbitDecl(names[i], len(c.supp), c.accepting, c.sym)
        for i, c in enumerate(classes)
    )
    init = next(i for i, c in enumerate(classes) if () in c.members)
    if classes[init].supp != ():
        raise LearnerError("initial row has non-empty support")
    rules = []
    for i, cls in enumerate(classes):
        for tag, guard, x in _state_cases(table, cls):
            letter = (tag, x)
            u = cls.word + (letter,)
            supp_u = table.row_support(u)
            allowed = set(cls.supp) | ({x} if x is not None else set())
            if not set(supp_u) <= allowed:
                raise LearnerError(
                    "successor support of %s escapes the case analysis" % fmt_word(u)
                )
            match = table.class_of(u)
            if match is None:
                raise LearnerError("no class for extension row %s" % fmt_word(u))
            j, v = match
            assignment = word_atoms(v)
            sources = []
            for code in classes[j].supp:
                beta = assignment[code]
                if beta in cls.supp:
                    sources.append(("reg", cls.supp.index(beta)))
                elif x is not None and beta == x:
                    sources.append(INPUT)
                else:
                    raise LearnerError(
                        "register of %s not derivable from %s" % (names[j], fmt_word(u))
                    )
            rules.append(Rule(names[i], tag, guard, names[j], tuple(sources)))
    aut = SymbolicAutomaton("dfa", table.alphabet, orbits, (names[init],), tuple(rules))
    validate(aut)
    return aut


def build_hypothesis_nfa(table: ObservationTable, check: bool = True) -> SymbolicAutomaton:
    from .kernel import instantiations

    if check:
        if table.find_rfsa_unclosed() is not None:
            raise LearnerError("table is not residual-closed")
        if table.find_rfsa_inconsistent() is not None:
            raise LearnerError("table is not residual-consistent")
    tops = table.prime_top_classes()
    names = {ci: "q%d" % pos for pos, (ci, _) in enumerate(tops)}
    orbits = tuple(
        OrbitDecl(names[ci], len(cls.supp), cls.accepting, cls.sym)
        for ci, cls in tops
    )
    initial = []
    for ci, cls in tops:
        if table.rows_leq(cls.word, ()):
            if cls.supp != ():
                raise LearnerError("initial prime row has non-empty support")
            initial.append(names[ci])
    rules = set()
    for ci, cls in tops:
        for tag, guard, x in _state_cases(table, cls):
            letter = (tag, x)
            u = cls.word + (letter,)
            supp_u = table.row_support(u)
            allowed = set(cls.supp) | ({x} if x is not None else set())
            if not set(supp_u) <= allowed:
                raise LearnerError(
                    "successor support of %s escapes the case analysis" % fmt_word(u)
                )
            pool = cls.supp + ((x,) if x is not None and x not in cls.supp else ())
            for cj, cls2 in tops:
                for v in instantiations(cls2.shape, pool, avoid=word_atoms(u)):
                    if not table.rows_leq(v, u):
                        continue
                    assignment = word_atoms(v)
                    sources = []
                    for code in cls2.supp:
                        beta = assignment[code]
                        if beta in cls.supp:
                            sources.append(("reg", cls.supp.index(beta)))
                        elif x is not None and beta == x:
                            sources.append(INPUT)
                        else:
                            sources.append(ANY)
                    rules.add(Rule(names[ci], tag, guard, names[cj], tuple(sources)))
    rules = tuple(sorted(rules, key=repr))
    aut = SymbolicAutomaton("nfa", table.alphabet, orbits, tuple(initial), rules)
    validate(aut)
    return aut


# ---------------------------------------------------------------------------
# learning loops


def _trace(trace, kind, **data):
    if trace is not None:
        data["event"] = kind
        trace.append(data)


def _row_stats(table: ObservationTable):
    stats = {}
    for shape in table.upper_shapes():
        from .kernel import word_of_shape

        u = word_of_shape(shape)
        stats[shape] = (len(table.row_support(u)), len(table.row_symmetries(u)))
    return stats


def _measure(table: ObservationTable):
    classes = table.classes()
    n = len(classes)
    total_dim = sum(len(c.supp) for c in classes)
    sym_penalty = -sum(math.log2(len(c.sym)) for c in classes if len(c.sym) > 1)
    return (n, total_dim, sym_penalty)


def _stabilize(table: ObservationTable, rfsa: bool, trace) -> None:
    while True:
        unclosed = table.find_rfsa_unclosed() if rfsa else table.find_unclosed()
        if unclosed is not None:
            _trace(trace, "add_row", shape=unclosed)
            table.add_row_orbit(unclosed)
            continue
        witness = (
            table.find_rfsa_inconsistent() if rfsa else table.find_inconsistent()
        )
        if witness is not None:
            s1, s2, letter, e = witness
            col = shape_of_word((letter,) + e)
            if col in table.E:
                raise LearnerError(
                    "consistency witness produced an existing column %s" % fmt_word(col)
                )
            _trace(trace, "add_col", shape=col, witness=(s1, s2, letter, e))
            table.add_column_orbit(col)
            if trace is not None:
                _trace(trace, "row_stats", stats=_row_stats(table))
            continue
        return


def _finish(
    teacher: Teacher,
    table: ObservationTable,
    hyp: SymbolicAutomaton,
    started: float,
    algo: str,
) -> LearnReport:
    return LearnReport(
        automaton=hyp,
        orbits=len(hyp.orbits),
        dimension=hyp.max_dim,
        eq_queries=teacher.eq_queries,
        orbit_membership_queries=table.orbit_queries,
        concrete_membership_queries=teacher.membership_calls,
        wall_ms=(time.monotonic() - started) * 1000.0,
        algo=algo,
        target=teacher.name,
        depth=teacher.depth,
    )


def _check_eq_bound(teacher: Teacher, hyp: SymbolicAutomaton) -> None:
    bound = eq_query_bound(len(hyp.orbits), hyp.max_dim)
    if teacher.eq_queries > bound:
        raise LearnerError(
            "equivalence queries %d exceed the bound %d for (n=%d, k=%d)"
            % (teacher.eq_queries, bound, len(hyp.orbits), hyp.max_dim)
        )


def learn_dfa(
    teacher: Teacher,
    counterexample_mode: str = "rows",
    trace: Optional[list] = None,
    assert_bounds: bool = False,
) -> LearnReport:
    if counterexample_mode not in ("rows", "cols"):
        raise LearnerError("unknown counterexample mode %r" % counterexample_mode)
    started = time.monotonic()
    table = ObservationTable(teacher.alphabet, teacher.membership)
    table.fill()
    prev = None
    algo = "lstar" if counterexample_mode == "rows" else "lstarcol"
    while True:
        _stabilize(table, rfsa=False, trace=trace)
        hyp = build_hypothesis_dfa(table, check=False)
        measure = _measure(table)
        if assert_bounds and prev is not None and not measure > prev:
            raise LearnerError(
                "hypothesis did not progress: %r -> %r" % (prev, measure)
            )
        prev = measure
        _trace(
            trace,
            "hypothesis",
            orbits=len(hyp.orbits),
            dimension=hyp.max_dim,
            accepting=sorted(o.name for o in hyp.orbits if o.accepting),
            measure=measure,
        )
        res = teacher.equivalence(hyp)
        if not isinstance(res, Counterexample):
            if assert_bounds:
                _check_eq_bound(teacher, hyp)
            return _finish(teacher, table, hyp, started, algo)
        _trace(trace, "counterexample", word=res.word)
        shape = shape_of_word(res.word)
        if counterexample_mode == "rows":
            table.add_row_orbit(shape)
        else:
            table.add_column_orbit(shape)
        if trace is not None:
            _trace(trace, "row_stats", stats=_row_stats(table))


def learn_nfa(
    teacher: Teacher,
    trace: Optional[list] = None,
    assert_bounds: bool = False,
) -> LearnReport:
    started = time.monotonic()
    table = ObservationTable(teacher.alphabet, teacher.membership)
    table.fill()
    while True:
        _stabilize(table, rfsa=True, trace=trace)
        hyp = build_hypothesis_nfa(table, check=False)
        _trace(
            trace,
            "hypothesis",
            orbits=len(hyp.orbits),
            dimension=hyp.max_dim,
            accepting=sorted(o.name for o in hyp.orbits if o.accepting),
        )
        res = teacher.equivalence(hyp)
        if not isinstance(res, Counterexample):
            if assert_bounds:
                _check_eq_bound(teacher, hyp)
            return _finish(teacher, table, hyp, started, "nlstar")
        _trace(trace, "counterexample", word=res.word)
        table.add_column_orbit(shape_of_word(res.word))
        if trace is not None:
            _trace(trace, "row_stats", stats=_row_stats(table))


def learn(
    target: Target,
    algo: str,
    depth: Optional[int] = None,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    trace: Optional[list] = None,
    assert_bounds: bool = False,
) -> LearnReport:
    """Learn a registered target with the chosen algorithm."""
    teacher = teacher_for_target(target, algo, depth, max_configs)
    if algo == "lstar":
        report = learn_dfa(teacher, "rows", trace, assert_bounds)
    elif algo == "lstarcol":
        report = learn_dfa(teacher, "cols", trace, assert_bounds)
    elif algo == "nlstar":
        report = learn_nfa(teacher, trace, assert_bounds)
    else:
        raise LearnerError("unknown algorithm %r" % algo)
    report.target = target.name
    return report
