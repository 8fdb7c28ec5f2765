"""Goal-directed answer set programming with constraints over rationals.

Evaluate non-ground logic programs under the stable-model semantics
without grounding: negation is compiled into constructive duals, global
consistency is enforced by synthesized checks, and dense-domain
constraints are decided by a linear-arithmetic store, so answers come
back as partial models with constrained (possibly unbound) variables and
a justification tree for each.

Typical use:

    from scasp import compile_program, parse_program, parse_query, Engine

    cp = compile_program(parse_program(text))
    for answer in Engine(cp).run_query(parse_query("?- p(X)."), max_answers=2):
        ...
"""

from .compiler import CompiledProgram, compile_program, dump_compiled
from .engine import Answer, Engine, run_query
from .errors import CompileError, ScaspError, SolverError
from .oracle import ground, stable_models
from .parser import ParseError, parse_program, parse_query
from .render import render_answer, render_answer_json
from .terms import (
    CmpLit,
    Const,
    Forall,
    Lit,
    Program,
    Query,
    Rule,
    Struct,
    Var,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "CmpLit",
    "CompileError",
    "CompiledProgram",
    "Const",
    "Engine",
    "Forall",
    "Lit",
    "ParseError",
    "Program",
    "Query",
    "Rule",
    "ScaspError",
    "SolverError",
    "Struct",
    "Var",
    "compile_program",
    "dump_compiled",
    "ground",
    "parse_program",
    "parse_query",
    "render_answer",
    "render_answer_json",
    "run_query",
    "stable_models",
    "__version__",
]
