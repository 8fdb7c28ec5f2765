"""Command-line driver.

Loads one or more program files, runs a query (from ``-q`` or the last
embedded ``?-`` directive), and prints each answer as a justification
tree, model, and variable bindings — or as one JSON record per answer
with ``--json-lines``.  ``--dump-compiled`` prints the compiled program
instead of solving; ``--oracle`` prints the stable models of a small
ground program computed by the brute-force reference semantics.

Exit codes: 0 when at least one answer was found (or ``-n 0`` exhausted
an empty search without error), 1 when answers were requested but none
exist, 2 for usage, file, parse, compile, or solver-restriction errors.
"""

from __future__ import annotations

import argparse
import sys

from .compiler import compile_program, dump_compiled
from .engine import Engine
from .errors import CompileError, SolverError
from .oracle import atom_key, ground, stable_models
from .parser import ParseError, parse_program, parse_query
from .render import render_answer, render_answer_json
from .terms import Program, format_goal, format_term

__all__ = ["main"]


def _build_parser():
    p = argparse.ArgumentParser(
        prog="scasp",
        description="Goal-directed answer set solver over dense domains.",
    )
    p.add_argument("files", nargs="+", help="program file(s)")
    p.add_argument("-q", "--query", help="query text, overriding any ?- in the files")
    p.add_argument(
        "-n", "--answers", type=int, default=0,
        help="maximum number of answers (0 = all; default 0)",
    )
    p.add_argument("--no-just", action="store_true", help="omit justification trees")
    p.add_argument("--no-model", action="store_true", help="omit models")
    p.add_argument(
        "--json-lines", action="store_true",
        help="print one JSON record per answer instead of text blocks",
    )
    p.add_argument(
        "--dump-compiled", action="store_true",
        help="print the compiled program (duals and consistency checks) and exit",
    )
    p.add_argument(
        "--oracle", action="store_true",
        help="enumerate stable models with the brute-force ground semantics",
    )
    return p


def _load(paths):
    program = Program()
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        part = parse_program(text, filename=path)
        program.rules.extend(part.rules)
        program.shows.update(part.shows)
        if part.query is not None:
            program.query = part.query
    return program


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if args.answers < 0:
        print("scasp: -n must be >= 0", file=sys.stderr)
        return 2
    try:
        program = _load(args.files)
    except OSError as e:
        print(f"scasp: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return 2

    if args.oracle:
        try:
            models = stable_models(ground(program))
        except SolverError as e:
            print(str(e), file=sys.stderr)
            return 2
        for m in models:
            atoms = [
                "%s(%s)" % (p, ",".join(format_term(a) for a in t)) if t else p
                for p, t in sorted(m, key=atom_key)
            ]
            print("{ %s }" % ", ".join(atoms))
        if not models:
            print("no")
            return 1
        return 0

    try:
        cp = compile_program(program)
    except CompileError as e:
        name = args.files[0] if len(args.files) == 1 else "input"
        print(f"{name}:{e.line}:{e.col}: {e.message}", file=sys.stderr)
        return 2

    if args.dump_compiled:
        sys.stdout.write(dump_compiled(cp))
        return 0

    if args.query:
        try:
            query = parse_query(args.query)
        except ParseError as e:
            print(str(e), file=sys.stderr)
            return 2
    else:
        query = cp.query
    if query is None:
        print("scasp: no query (use -q or an embedded ?- directive)", file=sys.stderr)
        return 2

    if not args.json_lines:
        print("?- %s." % ", ".join(format_goal(g) for g in query.goals))
        print()
    count = 0
    try:
        engine = Engine(cp)
        for ans in engine.run_query(query, args.answers):
            count += 1
            if args.json_lines:
                print(render_answer_json(
                    ans, cp.pred_info, cp.shows,
                    with_model=not args.no_model,
                    with_justification=not args.no_just,
                ))
            else:
                print(render_answer(
                    ans, cp.pred_info, cp.shows,
                    with_model=not args.no_model,
                    with_justification=not args.no_just,
                ))
                print()
    except SolverError as e:
        print(str(e), file=sys.stderr)
        return 2
    exhausted = args.answers == 0 or count < args.answers
    if exhausted and not args.json_lines:
        print("no")
    if count:
        return 0
    return 0 if args.answers == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
