"""Command-line benchmark runner.

    nomlearn --target fifo:2 --algo lstar --stats
    nomlearn --target leq --algo nlstar --depth 12 --out leq.nomaut

Exit codes: 0 success, 1 usage error, 2 learner or teacher failure,
3 bound-assertion failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .equivalence import OracleError, SearchLimit
from .kernel import fmt_word
from .learners import LearnerError, LearnReport, TeacherError, learn
from .targets import get_target
from .textfmt import print_automaton

USAGE_ERROR = 1
FAILURE = 2
ASSERTION_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="nomlearn",
        description="Learn nominal automata over equality atoms from built-in targets.",
    )
    p.add_argument("--target", required=True, help="fifo:N, ww:N, nlast:N or leq")
    p.add_argument(
        "--algo",
        required=True,
        choices=["lstar", "lstarcol", "nlstar"],
        help="learning algorithm",
    )
    p.add_argument("--depth", type=int, default=None, help="bisimulation depth (nlstar)")
    p.add_argument("--out", default=None, help="write the learned automaton here")
    p.add_argument("--stats", action="store_true", help="print the stats block")
    p.add_argument("--trace", action="store_true", help="print per-iteration trace")
    p.add_argument(
        "--assert-bounds",
        action="store_true",
        help="enforce the equivalence-query bound and progress assertions",
    )
    p.add_argument("--max-configs", type=int, default=10**6)
    p.add_argument(
        "--seed", type=int, default=0, help="unused by the deterministic learners"
    )
    return p


def _fmt_shape(shape) -> str:
    return fmt_word(shape)


def print_trace(events: List[dict], out) -> None:
    for ev in events:
        kind = ev["event"]
        if kind == "add_row":
            out.write("trace: add row orbit %s\n" % _fmt_shape(ev["shape"]))
        elif kind == "add_col":
            out.write("trace: add column orbit %s\n" % _fmt_shape(ev["shape"]))
        elif kind == "hypothesis":
            out.write(
                "trace: hypothesis with %d orbits, dimension %d\n"
                % (ev["orbits"], ev["dimension"])
            )
        elif kind == "counterexample":
            out.write("trace: counterexample %s\n" % fmt_word(ev["word"]))
        elif kind == "row_stats":
            stats = ev["stats"]
            parts = [
                "%s:(supp=%d,sym=%d)" % (_fmt_shape(s), d, g)
                for s, (d, g) in sorted(stats.items(), key=lambda kv: kv[0])
            ]
            out.write("trace: rows %s\n" % " ".join(parts))


def stats_lines(report: LearnReport) -> List[str]:
    lines = [
        "target=%s" % report.target,
        "algo=%s" % report.algo,
        "orbits=%d" % report.orbits,
        "dimension=%d" % report.dimension,
        "eq_queries=%d" % report.eq_queries,
        "orbit_membership_queries=%d" % report.orbit_membership_queries,
        "concrete_membership_queries=%d" % report.concrete_membership_queries,
        "wall_ms=%d" % round(report.wall_ms),
    ]
    if report.depth is not None:
        lines.append("depth=%d" % report.depth)
    return lines


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        out.write("usage error: %s\n" % e)
        return USAGE_ERROR
    try:
        target = get_target(args.target)
    except (KeyError, ValueError) as e:
        out.write("usage error: %s\n" % e)
        return USAGE_ERROR

    if args.algo == "nlstar" and args.depth is None:
        from .learners import default_nfa_depth

        out.write(
            "note: --depth not given; using default %d\n" % default_nfa_depth(target)
        )

    trace: Optional[list] = [] if args.trace else None
    try:
        report = learn(
            target,
            args.algo,
            depth=args.depth,
            max_configs=args.max_configs,
            trace=trace,
            assert_bounds=args.assert_bounds,
        )
    except (LearnerError, TeacherError, OracleError, SearchLimit) as e:
        if args.assert_bounds and isinstance(e, LearnerError) and "bound" in str(e).lower():
            out.write("assertion failure: %s\n" % e)
            return ASSERTION_FAILURE
        if args.assert_bounds and "progress" in str(e).lower():
            out.write("assertion failure: %s\n" % e)
            return ASSERTION_FAILURE
        out.write("error: %s\n" % e)
        return FAILURE

    if trace is not None:
        print_trace(trace, out)

    out.write(
        "learned %s with %s: %d orbits, dimension %d\n"
        % (report.target, report.algo, report.orbits, report.dimension)
    )
    if args.stats:
        out.write("-- stats --\n")
        for line in stats_lines(report):
            out.write(line + "\n")
    if args.out:
        text = print_automaton(report.automaton)
        with open(args.out, "w") as fh:
            fh.write(text)
        out.write("wrote %s\n" % args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
