import io
import os

from nomlearn.automata import accepts
from nomlearn.cli import main
from nomlearn.kernel import atom_word
from nomlearn.textfmt import parse_automaton


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def test_cli_fifo2_stats():
    code, out = run(["--target", "fifo:2", "--algo", "lstar", "--stats"])
    assert code == 0
    assert "orbits=5" in out
    assert "dimension=2" in out
    assert "eq_queries=" in out and "wall_ms=" in out


def test_cli_unknown_target():
    code, out = run(["--target", "nope", "--algo", "lstar"])
    assert code == 1
    assert "usage error" in out


def test_cli_unknown_algo():
    code, out = run(["--target", "ww:1", "--algo", "zigzag"])
    assert code == 1


def test_cli_nlstar_default_depth_notice(tmp_path):
    out_file = tmp_path / "leq.nomaut"
    code, out = run(
        ["--target", "leq", "--algo", "nlstar", "--depth", "12", "--out", str(out_file)]
    )
    assert code == 0
    text = out_file.read_text()
    aut = parse_automaton(text)
    assert len(aut.orbits) == 3
    assert "any" in text  # register states over every atom
    assert accepts(aut, atom_word((1, 2, 1)))

    code2, out2 = run(["--target", "ww:0", "--algo", "nlstar"])
    assert code2 == 0
    assert "note: --depth not given" in out2


def test_cli_trace_golden_ww1():
    code, out = run(["--target", "ww:1", "--algo", "lstarcol", "--trace"])
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("trace: hypothesis")]
    assert lines[0] == "trace: hypothesis with 1 orbits, dimension 0"
    assert "learned ww:1" in out


def test_cli_assert_bounds():
    code, out = run(
        ["--target", "fifo:1", "--algo", "lstar", "--stats", "--assert-bounds"]
    )
    assert code == 0


def test_cli_max_configs_failure():
    code, out = run(
        ["--target", "fifo:2", "--algo", "lstar", "--max-configs", "2"]
    )
    assert code == 2
    assert "error" in out
