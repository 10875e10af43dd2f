"""Line-oriented textual format for symbolic automata.

    nomaut 1
    kind dfa
    alphabet push/1 pop/1
    orbit q0 dim 0 accepting
    orbit q1 dim 2 accepting sym (1 0)
    init q0
    rule q0 push(fresh) -> q1(in,any)
    rule q1 pop(=r0) -> q0()

Symmetry groups list their non-identity elements as image tuples; rules
carry the guard in parentheses after the tag (absent for arity-0 tags)
and one register source per destination register.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from .automata import (
    ANY,
    FRESH,
    INPUT,
    AlphabetSpec,
    InvalidAutomaton,
    OrbitDecl,
    Rule,
    SymbolicAutomaton,
    validate,
)
from .kernel import SymGroup, group_closure, identity_perm


class ParseError(Exception):
    pass


def print_automaton(aut: SymbolicAutomaton) -> str:
    """Deterministic canonical rendering; parse(print(a)) reproduces a."""
    lines = ["nomaut 1", "kind %s" % aut.kind]
    lines.append(
        "alphabet " + " ".join("%s/%d" % (lab, ar) for lab, ar in aut.alphabet.tags)
    )
    for o in aut.orbits:
        parts = ["orbit", o.name, "dim", str(o.dim)]
        if o.accepting:
            parts.append("accepting")
        nontrivial = [g for g in o.sym.sorted_elements() if g != identity_perm(o.dim)]
        if nontrivial:
            parts.append("sym")
            parts.extend("(%s)" % " ".join(map(str, g)) for g in nontrivial)
        lines.append(" ".join(parts))
    for name in aut.initial:
        lines.append("init %s" % name)
    orbit_index = {o.name: i for i, o in enumerate(aut.orbits)}
    tag_index = {lab: i for i, (lab, _) in enumerate(aut.alphabet.tags)}

    def guard_rank(g):
        if g is None:
            return (0, 0)
        if g == FRESH:
            return (2, 0)
        return (1, g[1])

    def fmt_assign(a):
        if a == INPUT:
            return "in"
        if a == ANY:
            return "any"
        return "r%d" % a[1]

    def rule_line(r: Rule) -> str:
        guard = ""
        if r.guard is not None:
            guard = "(fresh)" if r.guard == FRESH else "(=r%d)" % r.guard[1]
        return "rule %s %s%s -> %s(%s)" % (
            r.src,
            r.tag,
            guard,
            r.dst,
            ",".join(fmt_assign(a) for a in r.assign),
        )

    for r in sorted(
        aut.rules,
        key=lambda r: (
            orbit_index[r.src],
            tag_index[r.tag],
            guard_rank(r.guard),
            orbit_index[r.dst],
            rule_line(r),
        ),
    ):
        lines.append(rule_line(r))
    return "\n".join(lines) + "\n"


_RULE_RE = re.compile(
    r"^rule\s+(\S+)\s+([A-Za-z_][\w]*)"
    r"(?:\(\s*(fresh|=r\d+)\s*\))?"
    r"\s*->\s*(\S+?)\(([^)]*)\)\s*$"
)


def parse_automaton(text: str) -> SymbolicAutomaton:
    """Parse and validate; errors carry the offending line number."""
    kind = None
    alphabet = None
    orbits: List[OrbitDecl] = []
    initial: List[str] = []
    rules: List[Rule] = []
    saw_header = False

    def err(lineno, msg):
        raise ParseError("line %d: %s" % (lineno, msg))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not saw_header:
            if tokens != ["nomaut", "1"]:
                err(lineno, "expected header 'nomaut 1'")
            saw_header = True
            continue
        head = tokens[0]
        if head == "kind":
            if len(tokens) != 2 or tokens[1] not in ("dfa", "nfa"):
                err(lineno, "expected 'kind dfa' or 'kind nfa'")
            kind = tokens[1]
        elif head == "alphabet":
            tags = []
            for tok in tokens[1:]:
                m = re.fullmatch(r"([A-Za-z_]\w*)/([01])", tok)
                if not m:
                    err(lineno, "bad tag %r (want label/0 or label/1)" % tok)
                tags.append((m.group(1), int(m.group(2))))
            if not tags:
                err(lineno, "empty alphabet")
            try:
                alphabet = AlphabetSpec(tuple(tags))
            except ValueError as e:
                err(lineno, str(e))
        elif head == "orbit":
            m = re.fullmatch(
                r"orbit\s+(\S+)\s+dim\s+(\d+)(\s+accepting)?(\s+sym\s+(.*))?", line
            )
            if not m:
                err(lineno, "bad orbit declaration")
            name, dim = m.group(1), int(m.group(2))
            accepting = m.group(3) is not None
            gens = []
            if m.group(5):
                for part in re.findall(r"\(([^)]*)\)", m.group(5)):
                    try:
                        gens.append(tuple(int(t) for t in part.split()))
                    except ValueError:
                        err(lineno, "bad permutation %r" % part)
            try:
                sym = group_closure(gens, dim)
            except ValueError as e:
                err(lineno, str(e))
            orbits.append(OrbitDecl(name, dim, accepting, sym))
        elif head == "init":
            if len(tokens) != 2:
                err(lineno, "expected 'init <orbit>'")
            initial.append(tokens[1])
        elif head == "rule":
            m = _RULE_RE.match(line)
            if not m:
                err(lineno, "bad rule syntax")
            src, tag, guard_tok, dst, assign_tok = m.groups()
            guard = None
            if guard_tok == "fresh":
                guard = FRESH
            elif guard_tok:
                guard = ("reg", int(guard_tok[2:]))
            assign = []
            body = assign_tok.strip()
            if body:
                for tok in body.split(","):
                    tok = tok.strip()
                    if tok == "in":
                        assign.append(INPUT)
                    elif tok == "any":
                        assign.append(ANY)
                    elif re.fullmatch(r"r\d+", tok):
                        assign.append(("reg", int(tok[1:])))
                    else:
                        err(lineno, "bad register source %r" % tok)
            rules.append(Rule(src, tag, guard, dst, tuple(assign)))
        else:
            err(lineno, "unknown directive %r" % head)

    if not saw_header:
        raise ParseError("line 1: empty file")
    if kind is None:
        raise ParseError("line 1: missing 'kind'")
    if alphabet is None:
        raise ParseError("line 1: missing 'alphabet'")
    known = {o.name for o in orbits}
    for lineno_0, name in enumerate(initial):
        if name not in known:
            raise ParseError("init references undeclared orbit %r" % name)
    for r in rules:
        for name in (r.src, r.dst):
            if name not in known:
                raise ParseError("rule references undeclared orbit %r" % name)
    aut = SymbolicAutomaton(kind, alphabet, tuple(orbits), tuple(initial), tuple(rules))
    try:
        validate(aut)
    except InvalidAutomaton as e:
        raise ParseError("invalid automaton: %s" % e)
    return aut
