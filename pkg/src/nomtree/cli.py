"""Command-line interface: ``nomtree {learn,run,minimize,equiv,orbits}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from importlib import resources

from nomtree.automaton import AutomatonError, equivalent, minimize, parse_automaton, run, serialize
from nomtree.learner import GuardViolation, learn
from nomtree.nominal import NominalError
from nomtree.symmetry import SymmetryKind
from nomtree.teacher import Teacher
from nomtree.trees import TermSyntaxError, parse_term, print_term

EXIT_OK, EXIT_DIFFERENT, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


def bundled_examples() -> list[str]:
    return sorted(p.name for p in resources.files("nomtree.data").iterdir() if p.name.endswith(".aut"))


def resolve(path: str) -> str:
    """``path`` itself if it exists, else the bundled example with the same file name."""
    if os.path.exists(path):
        return path
    name = os.path.basename(path)
    if name in bundled_examples():
        return str(resources.files("nomtree.data") / name)
    raise InputError(f"{path}: no such file")


def load(path: str, symmetry: str | None = None):
    real = resolve(path)
    with open(real) as fh:
        text = fh.read()
    try:
        A = parse_automaton(text)
    except (AutomatonError, NominalError) as e:
        raise InputError(f"{path}: {e}") from None
    if symmetry is not None and A.kind is not SymmetryKind.parse(symmetry):
        raise InputError(f"{path}: declares symmetry {A.kind.value}, --symmetry says {symmetry}")
    return A


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_learn(args) -> int:
    A = load(args.target, args.symmetry)
    trace = open(args.trace_queries, "a") if args.trace_queries else None
    try:
        teacher = Teacher(A, trace=trace)
        try:
            H, runlog = learn(teacher, dump_tables=bool(args.dump_tables))
        except GuardViolation as e:
            print(f"GUARD_VIOLATION: {e}", file=sys.stderr)
            return EXIT_GUARD
    finally:
        if trace is not None:
            trace.close()
    if args.dump_tables:
        with open(args.dump_tables, "w") as fh:
            for i, snap in enumerate(runlog.snapshots):
                fh.write(f"== table {i}\n{snap}\n")
    log_text = runlog.text() + f"QUERIES {teacher.stats()}\n"
    if args.log:
        _write(log_text, args.log)
    else:
        sys.stderr.write(log_text)
    _write(serialize(H), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    A = load(args.automaton, args.symmetry)
    try:
        t = parse_term(args.term, A.alphabet, A.kind)
        r = run(A, t)
    except (TermSyntaxError, NominalError) as e:
        raise InputError(f"term {args.term!r}: {e}") from None
    except AutomatonError as e:
        raise InputError(str(e)) from None
    print(f"{r.state} {'accept' if r.accepted else 'reject'}")
    return EXIT_OK


def cmd_minimize(args) -> int:
    A = load(args.automaton, args.symmetry)
    _write(serialize(minimize(A)), args.output)
    return EXIT_OK


def cmd_equiv(args) -> int:
    A = load(args.first, args.symmetry)
    B = load(args.second, args.symmetry)
    try:
        cex = equivalent(A, B)
    except AutomatonError as e:
        raise InputError(str(e)) from None
    if cex is None:
        print("yes")
        return EXIT_OK
    print(f"counterexample {print_term(cex)}")
    return EXIT_DIFFERENT


def cmd_orbits(args) -> int:
    A = load(args.automaton, args.symmetry)
    print(f"{len(A.states)} state orbits")
    for o in A.states:
        mark = " accepting" if o.name in A.accepting else ""
        print(f"{o.name} degree {o.degree} sym {o.sym.order}{mark}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--symmetry", choices=[k.value for k in SymmetryKind],
                        help="must agree with the symmetry declared in the file")
    common.add_argument("--max-fresh", type=int, default=1, metavar="N",
                        help="atom-budget slack (default 1); checked but unused, since enumeration adds exactly the fresh atoms each orbit needs")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducible drivers; unused")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="nomtree", description="Nominal tree automata: learn, run, compare.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("learn", parents=[common], help="learn the language of a target automaton")
    s.add_argument("target")
    s.add_argument("-o", "--output")
    s.add_argument("--trace-queries", metavar="PATH")
    s.add_argument("--dump-tables", metavar="PATH")
    s.add_argument("--log", metavar="PATH", help="write the run log here instead of stderr")
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("run", parents=[common], help="run an automaton on a tree term")
    s.add_argument("automaton")
    s.add_argument("term")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("minimize", parents=[common], help="print the minimal automaton")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("equiv", parents=[common], help="decide language equivalence")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("orbits", parents=[common], help="list state orbits")
    s.add_argument("automaton")
    s.set_defaults(func=cmd_orbits)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.max_fresh < 0:
        print("error: --max-fresh must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
