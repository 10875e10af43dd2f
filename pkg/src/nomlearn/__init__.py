"""Learning of nominal automata over equality atoms from queries."""

__version__ = "0.1.0"
