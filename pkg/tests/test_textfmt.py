import pytest

from nomlearn.automata import accepts
from nomlearn.figures import fifo2_automaton, fig2_automaton, leq_automaton
from nomlearn.kernel import atom_word
from nomlearn.textfmt import ParseError, parse_automaton, print_automaton


def test_roundtrip_fifo2():
    aut = fifo2_automaton()
    text = print_automaton(aut)
    again = parse_automaton(text)
    assert print_automaton(again) == text
    assert again == parse_automaton(print_automaton(again))


def test_roundtrip_preserves_language():
    aut = fig2_automaton()
    again = parse_automaton(print_automaton(aut))
    for w in [(), (0,), (0, 1), (0, 0), (0, 1, 2), (0, 1, 1)]:
        assert accepts(again, atom_word(w)) == accepts(aut, atom_word(w))


def test_roundtrip_nfa_any():
    aut = leq_automaton()
    text = print_automaton(aut)
    assert parse_automaton(text) == parse_automaton(print_automaton(parse_automaton(text)))


def test_parse_error_undeclared_orbit():
    text = """nomaut 1
kind dfa
alphabet a/1
orbit q0 dim 0
init q0
rule q0 a(fresh) -> mystery()
"""
    with pytest.raises(ParseError, match="mystery"):
        parse_automaton(text)


def test_parse_error_line_numbers():
    text = "nomaut 1\nkind dfa\nalphabet a/1\norbit q0 dim nope\n"
    with pytest.raises(ParseError, match="line 4"):
        parse_automaton(text)


def test_parse_error_invalid_automaton():
    # missing fresh rule -> totality violation surfaces through the parser
    text = """nomaut 1
kind dfa
alphabet a/1
orbit q0 dim 0 accepting
init q0
"""
    with pytest.raises(ParseError, match="totality"):
        parse_automaton(text)


def test_parse_sym_and_comments():
    text = """nomaut 1
# toy automaton
kind nfa
alphabet a/1
orbit p dim 2 accepting sym (1 0)
orbit s dim 0
init s
rule s a(fresh) -> p(in,any)
rule p a(=r0) -> s()
rule p a(=r1) -> s()
rule p a(fresh) -> p(r0,r1)
"""
    aut = parse_automaton(text)
    assert len(aut.orbit("p").sym) == 2
    assert print_automaton(parse_automaton(print_automaton(aut))) == print_automaton(aut)
