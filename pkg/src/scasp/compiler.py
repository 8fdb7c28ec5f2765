"""Compilation of programs into an executable rule database.

Three passes:

1. Head normalization: every rule head gets distinct fresh variables, with
   the original argument terms re-established by prepended `=` atoms.  The
   count of prepended atoms is kept so justification trees can omit them.

2. Dual synthesis: for every predicate an umbrella rule
   `not_p(V...) :- not_p__1(V...), ..., not_p__k(V...)` plus one sub-rule
   per clause.  A clause's dual has one alternative per body literal: the
   positive prefix of the body up to that literal, then the literal's
   negation (comparison operators flip; `.=.` splits into `.<.` and `.>.`).
   Variables appearing only in a clause body are universally quantified
   inside the sub-rule through a `..._body` helper predicate.

3. Global consistency checks: denials and rules that can reach their own
   head through an odd number of negations become `chk_i` predicates built
   the same way as duals (plus a re-derivation alternative for headed
   rules), all called from `nmr_check`, which is appended to every query.

After compilation every body literal is a positive call; negated user
literals are rewritten to their `not_`-prefixed duals.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import CompileError
from .terms import (
    CmpLit,
    Forall,
    Lit,
    Program,
    Query,
    Rule,
    Var,
    format_term,
    fresh_var,
    goal_vars,
    term_vars,
)

__all__ = [
    "CompiledRule",
    "CompiledProgram",
    "PredInfo",
    "compile_program",
    "dualize_predicate",
    "generate_nmr_checks",
    "rewrite_goal",
    "dump_compiled",
    "RESERVED_NOTE",
]

RESERVED_NOTE = (
    "names 'nmr_check', 'forall', 'chk_<n>', and the prefix 'not_' are reserved"
)

_DUAL_OP = {
    "=": ("\\=",),
    "\\=": ("=",),
    ".<.": (".>=.",),
    ".>.": (".=<.",),
    ".=<.": (".>.",),
    ".>=.": (".<.",),
    ".=.": (".<.", ".>."),
    ".\\=.": (".=.",),
}


@dataclass(frozen=True)
class CompiledRule:
    head: Lit
    body: tuple = ()
    hide_prefix: int = 0  # leading unification atoms hidden from justifications


@dataclass(frozen=True)
class PredInfo:
    kind: str  # 'user' | 'umbrella' | 'dual' | 'chk' | 'nmr'
    base: str  # display name without the negation wrapper
    negated: bool  # displayed behind 'not'
    marker: bool  # counts as a negation boundary on the call path


@dataclass
class CompiledProgram:
    rules: dict = field(default_factory=dict)  # (name, arity) -> [CompiledRule]
    source_rules: list = field(default_factory=list)
    dual_rules: list = field(default_factory=list)
    nmr_rules: list = field(default_factory=list)
    pred_info: dict = field(default_factory=dict)
    shows: set = field(default_factory=set)
    query: Optional[Query] = None

    def user_pred(self, name: str) -> Optional[PredInfo]:
        return self.pred_info.get(name)


def _is_reserved(name: str) -> bool:
    if name in ("nmr_check", "forall", "not"):
        return True
    if name.startswith("not_"):
        return True
    if name.startswith("chk_"):
        tail = name[4:]
        return tail.isdigit()
    return False


def _check_reserved(program: Program):
    for rule in program.rules:
        lits = []
        if rule.head is not None:
            lits.append(rule.head)
        lits.extend(g for g in rule.body if isinstance(g, Lit))
        for lit in lits:
            if _is_reserved(lit.pred):
                raise CompileError(
                    f"predicate name {lit.pred!r} is reserved ({RESERVED_NOTE})",
                    rule.line,
                    rule.col,
                )


def normalize_rule(rule: Rule):
    """Give the head distinct fresh variables; returns (rule, hidden count)."""
    if rule.head is None or not rule.head.args:
        return rule, 0
    seen = set()
    new_args = []
    prefix = []
    for arg in rule.head.args:
        if isinstance(arg, Var) and arg.id not in seen:
            seen.add(arg.id)
            new_args.append(arg)
        else:
            v = fresh_var("_")
            prefix.append(CmpLit("=", v, arg))
            new_args.append(v)
    if not prefix:
        return rule, 0
    head = Lit(rule.head.pred, tuple(new_args))
    return Rule(head, tuple(prefix) + rule.body, rule.line, rule.col), len(prefix)


def _positive_prefix(body, upto=None):
    """Positive user literals and comparisons before position upto."""
    stop = len(body) if upto is None else upto
    return [g for g in body[:stop] if isinstance(g, CmpLit) or (isinstance(g, Lit) and not g.neg)]


def _dual_goal(goal):
    """The alternatives whose disjunction negates one body goal."""
    if isinstance(goal, Lit):
        return [Lit(goal.pred, goal.args, not goal.neg)]
    return [CmpLit(op, goal.lhs, goal.rhs) for op in _DUAL_OP[goal.op]]


def _wrap_foralls(vs, goal):
    for v in reversed(vs):
        goal = Forall(v, goal)
    return goal


def _clause_pieces(body):
    """One negated alternative per body goal, each with its positive prefix."""
    pieces = []
    for j, goal in enumerate(body):
        prefix = _positive_prefix(body, j)
        for alt in _dual_goal(goal):
            pieces.append(prefix + [alt])
    return pieces


def _emit_pieces(head_name, head_vars, body_vars, pieces, out, allow_inline=False):
    """Emit clauses for a dual-style predicate, quantifying body variables.

    head_vars are the predicate's arguments; body_vars get wrapped in
    forall() -- through a '<name>_body' helper unless a lone single-literal
    alternative can sit in the forall directly.
    """
    head = Lit(head_name, tuple(head_vars))
    if not body_vars:
        for piece in pieces:
            out.append(CompiledRule(head, tuple(piece)))
        return [head_name]
    if allow_inline and len(pieces) == 1 and len(pieces[0]) == 1:
        out.append(CompiledRule(head, (_wrap_foralls(body_vars, pieces[0][0]),)))
        return [head_name]
    body_name = head_name + "_body"
    inner = Lit(body_name, tuple(head_vars) + tuple(body_vars))
    out.append(CompiledRule(head, (_wrap_foralls(body_vars, inner),)))
    for piece in pieces:
        out.append(CompiledRule(inner, tuple(piece)))
    return [head_name, body_name]


def _clause_body_vars(head_vars, body):
    head_ids = {v.id for v in head_vars}
    seen = set(head_ids)
    out = []
    for goal in body:
        for v in goal_vars(goal):
            if v.id not in seen:
                seen.add(v.id)
                out.append(v)
    return out


def dualize_predicate(name, arity, clauses, mangled):
    """Dual rules for one predicate: an umbrella plus per-clause sub-duals.

    clauses are normalized rules.  Returns (rules, generated names) with the
    umbrella first; a predicate without clauses gets an umbrella fact.
    """
    out = []
    names = []
    umbrella_vars = [fresh_var("_") for _ in range(arity)]
    umbrella_head = Lit("not_" + mangled, tuple(umbrella_vars))
    if not clauses:
        out.append(CompiledRule(umbrella_head))
        return out, ["not_" + mangled]
    sub_names = [f"not_{mangled}__{i}" for i in range(1, len(clauses) + 1)]
    umbrella_body = tuple(Lit(sub, tuple(umbrella_vars)) for sub in sub_names)
    out.append(CompiledRule(umbrella_head, umbrella_body))
    names.append("not_" + mangled)
    for sub, rule in zip(sub_names, clauses):
        head_vars = [a for a in rule.head.args]  # distinct vars after normalization
        body_vars = _clause_body_vars(head_vars, rule.body)
        pieces = _clause_pieces(rule.body)
        names.extend(_emit_pieces(sub, head_vars, body_vars, pieces, out))
    return out, names


def _dependency_graph(rules):
    adj = {}
    for rule in rules:
        if rule.head is None:
            continue
        for goal in rule.body:
            if isinstance(goal, Lit):
                adj.setdefault(rule.head.key, []).append((goal.key, 1 if goal.neg else 0))
    return adj


def _odd_loop(adj, neg_key, head_key) -> bool:
    """Can neg_key reach head_key through an even number of negations?"""
    if neg_key == head_key:
        return True
    seen = {(neg_key, 0)}
    queue = deque(seen)
    while queue:
        key, par = queue.popleft()
        for nxt, edge in adj.get(key, ()):
            state = (nxt, (par + edge) % 2)
            if state in seen:
                continue
            if state == (head_key, 0):
                return True
            seen.add(state)
            queue.append(state)
    return False


def generate_nmr_checks(normalized, adj):
    """chk_i rules for denials and odd-loop rules, plus the nmr_check rule."""
    out = []
    names = []
    chk_calls = []
    idx = 0
    for rule in normalized:
        if rule.head is None:
            constrained = True
        else:
            constrained = any(
                isinstance(g, Lit) and g.neg and _odd_loop(adj, g.key, rule.head.key)
                for g in rule.body
            )
        if not constrained:
            continue
        idx += 1
        chk_name = f"chk_{idx}"
        head_vars = [a for a in rule.head.args] if rule.head is not None else []
        body_vars = _clause_body_vars(head_vars, rule.body)
        pieces = _clause_pieces(rule.body)
        if rule.head is not None:
            rederive = not any(
                isinstance(g, Lit)
                and g.neg
                and g.key == rule.head.key
                and g.args == rule.head.args
                for g in rule.body
            )
            if rederive:
                pieces.append(_positive_prefix(rule.body) + [Lit(rule.head.pred, rule.head.args)])
        names.extend(_emit_pieces(chk_name, head_vars, body_vars, pieces, out, allow_inline=True))
        call_vars = [fresh_var("_") for _ in head_vars]
        chk_calls.append(_wrap_foralls(call_vars, Lit(chk_name, tuple(call_vars))))
    out.append(CompiledRule(Lit("nmr_check"), tuple(chk_calls)))
    names.append("nmr_check")
    return out, names


def _mangler(pred_keys):
    arities = {}
    for name, ar in pred_keys:
        arities.setdefault(name, set()).add(ar)

    def mangled(name, ar):
        return name if len(arities.get(name, {ar})) == 1 else f"{name}_{ar}"

    return mangled


def compile_program(program: Program) -> CompiledProgram:
    """Compile a parsed program into the executable rule database."""
    _check_reserved(program)
    cp = CompiledProgram(shows=set(program.shows), query=program.query)

    normalized = []
    for rule in program.rules:
        nrule, hidden = normalize_rule(rule)
        normalized.append((nrule, hidden))

    # Every predicate mentioned anywhere needs a dual, including undefined
    # ones (their negation simply holds).
    pred_keys = []
    seen_keys = set()

    def note(key):
        if key not in seen_keys:
            seen_keys.add(key)
            pred_keys.append(key)

    for nrule, _ in normalized:
        if nrule.head is not None:
            note(nrule.head.key)
        for g in nrule.body:
            if isinstance(g, Lit):
                note(g.key)
    if program.query is not None:
        for g in program.query.goals:
            if isinstance(g, Lit):
                note(g.key)

    mangled = _mangler(pred_keys)
    for name, ar in pred_keys:
        cp.pred_info.setdefault(name, PredInfo("user", name, False, False))

    clauses_of = {}
    for nrule, hidden in normalized:
        if nrule.head is not None:
            clauses_of.setdefault(nrule.head.key, []).append(nrule)
        cp.source_rules.append(CompiledRule(nrule.head, nrule.body, hidden))

    # Dual rules.
    for key in pred_keys:
        name, ar = key
        rules, gen_names = dualize_predicate(name, ar, clauses_of.get(key, []), mangled(name, ar))
        cp.dual_rules.extend(rules)
        for gname in gen_names:
            kind = "umbrella" if gname == "not_" + mangled(name, ar) else "dual"
            base = gname[len("not_"):]
            if kind == "umbrella":
                base = name
            cp.pred_info.setdefault(gname, PredInfo(kind, base, True, True))

    # Consistency checks.
    adj = _dependency_graph([r for r, _ in normalized])
    nmr, nmr_names = generate_nmr_checks([r for r, _ in normalized], adj)
    cp.nmr_rules.extend(nmr)
    for gname in nmr_names:
        if gname == "nmr_check":
            cp.pred_info.setdefault(gname, PredInfo("nmr", gname, False, False))
        else:
            cp.pred_info.setdefault(gname, PredInfo("chk", gname, False, False))

    # Rewrite all bodies to positive calls and index the database.
    def rewrite(goal):
        return rewrite_goal(goal, mangled)

    def add_rule(cr: CompiledRule):
        body = tuple(rewrite(g) for g in cr.body)
        cp.rules.setdefault(cr.head.key, []).append(
            CompiledRule(cr.head, body, cr.hide_prefix)
        )

    for cr in cp.source_rules:
        if cr.head is not None:
            add_rule(cr)
    for cr in cp.dual_rules:
        add_rule(cr)
        cp.rules.setdefault(cr.head.key, [])
    for cr in cp.nmr_rules:
        add_rule(cr)

    # Generated predicates referenced but never given clauses still need a
    # database entry so calls to them fail rather than look undefined.
    for key, rs in list(cp.rules.items()):
        for cr in rs:
            for g in cr.body:
                for lit in _goal_lits(g):
                    if lit.pred in cp.pred_info and cp.pred_info[lit.pred].kind != "user":
                        cp.rules.setdefault(lit.key, [])
    return cp


def _goal_lits(goal):
    if isinstance(goal, Lit):
        yield goal
    elif isinstance(goal, Forall):
        yield from _goal_lits(goal.goal)


def rewrite_goal(goal, mangled):
    """Replace negated literals with calls to their dual predicates."""
    if isinstance(goal, Lit):
        if goal.neg:
            return Lit("not_" + mangled(goal.pred, len(goal.args)), goal.args)
        return goal
    if isinstance(goal, Forall):
        return Forall(goal.var, rewrite_goal(goal.goal, mangled))
    return goal


def rewrite_query(query: Query, cp: CompiledProgram) -> Query:
    """Rewrite a query's negated goals against a compiled program."""

    def mg(name, ar):
        # Prefer whichever dual name the compiled program actually defines.
        plain = f"not_{name}"
        if (plain, ar) in cp.rules:
            return name
        suffixed = f"not_{name}_{ar}"
        if (suffixed, ar) in cp.rules:
            return f"{name}_{ar}"
        return name

    return Query(tuple(rewrite_goal(g, mg) for g in query.goals), query.vars)


# ---------------------------------------------------------------------------
# Dumping.  The output parses back to an equivalent program: source rules and
# #show directives verbatim, generated rules as comments.


def _display_names(rules):
    names = {}

    def visit_term(t):
        for v in term_vars(t):
            if v.id not in names:
                idx = len(names)
                names[v.id] = chr(65 + idx) if idx < 26 else f"V{idx + 1}"

    def visit_goal(g):
        if isinstance(g, Lit):
            for a in g.args:
                visit_term(a)
        elif isinstance(g, CmpLit):
            visit_term(g.lhs)
            visit_term(g.rhs)
        else:
            visit_term(g.var)
            visit_goal(g.goal)

    for cr in rules:
        if cr.head is not None:
            visit_goal(cr.head)
        for g in cr.body:
            visit_goal(g)
    return names


def display_goal(goal, pred_info, names=None):
    """Render a goal using user-facing predicate names."""
    if isinstance(goal, Lit):
        info = pred_info.get(goal.pred)
        shown = info.base if info is not None else goal.pred
        neg = goal.neg or (info.negated if info is not None else False)
        atom = shown
        if goal.args:
            atom += "(" + ",".join(format_term(a, names) for a in goal.args) + ")"
        return f"not {atom}" if neg else atom
    if isinstance(goal, CmpLit):
        return format_term(goal.lhs, names, 1) + goal.op + format_term(goal.rhs, names, 1)
    return (
        f"forall({format_term(goal.var, names)},"
        f"{display_goal(goal.goal, pred_info, names)})"
    )


def display_rule(cr: CompiledRule, pred_info) -> str:
    names = _display_names([cr])
    body = ", ".join(display_goal(g, pred_info, names) for g in cr.body)
    if cr.head is None:
        return f":- {body}."
    head = display_goal(cr.head, pred_info, names)
    return f"{head} :- {body}." if body else f"{head}."


def dump_compiled(cp: CompiledProgram) -> str:
    """Text form of a compiled program; feeding it back reproduces itself."""
    lines = []
    for cr in cp.source_rules:
        lines.append(display_rule(cr, cp.pred_info))
    for name, ar in sorted(cp.shows):
        lines.append(f"#show {name}/{ar}.")
    lines.append("")
    lines.append("% dual rules:")
    for cr in cp.dual_rules:
        lines.append("% " + display_rule(cr, cp.pred_info))
    lines.append("")
    lines.append("% global consistency checks:")
    for cr in cp.nmr_rules:
        lines.append("% " + display_rule(cr, cp.pred_info))
    return "\n".join(lines) + "\n"
