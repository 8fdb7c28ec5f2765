"""Text and JSON presentation of answers.

Variables are renamed per answer: the justification tree is walked first,
then the model, then the query bindings, and each distinct unbound variable
gets the next name in A..Z, AA, AB, ...  A variable with an attached
constraint view prints inline as its store, e.g. ``{A.>.2, A.<.3}`` or
``{A.\\=.[a,b]}``, so every occurrence shows the knowledge active in the
answer.  Bound variables print as their value.

The justification layout writes one node per line: a node with children
ends in `` :-`` and indents its children three further columns; a leaf ends
in ``,`` when a sibling follows and in ``.`` when it closes its group.
"""

from __future__ import annotations

import json

from .engine import Answer, Node
from .terms import CmpLit, Lit, Struct, Var, format_number, format_term

__all__ = ["Renderer", "render_answer", "render_answer_json"]

_LIN_TEXT = {"<": ".<.", "<=": ".=<.", ">": ".>.", ">=": ".>=.", "!=": ".\\=."}


def _display_pred(pred, pred_info):
    """User-facing spelling of a predicate: duals show as 'not' goals."""
    info = pred_info.get(pred) if pred_info else None
    if info is not None and info.negated:
        return "not ", pred[len("not_"):]
    if info is None and pred.startswith("not_"):
        return "not ", pred[len("not_"):]
    return "", pred


class _StoreNames:
    """Dict-like view handing format_term the store-annotated variable text."""

    def __init__(self, renderer):
        self.renderer = renderer

    def __contains__(self, vid):
        return True

    def __getitem__(self, vid):
        return self.renderer._var_text(vid)


class Renderer:
    """Renders one answer; holds the per-answer variable naming."""

    def __init__(self, answer: Answer, pred_info=None, shows=None):
        self.answer = answer
        self.pred_info = pred_info or {}
        self.shows = shows or set()
        self.names = {}
        self._store_names = _StoreNames(self)
        for node in answer.justification:
            self._walk_node(node)
        for lit in answer.model:
            for a in lit.args:
                self._walk_term(a)
        for _, t in answer.bindings:
            self._walk_term(t)

    # -- naming ------------------------------------------------------------

    def _walk_term(self, t):
        if isinstance(t, Var):
            if t.id not in self.names:
                self.names[t.id] = _name_for(len(self.names))
        elif isinstance(t, Struct):
            for a in t.args:
                self._walk_term(a)

    def _walk_goal(self, g):
        if isinstance(g, Lit):
            for a in g.args:
                self._walk_term(a)
        elif isinstance(g, CmpLit):
            self._walk_term(g.lhs)
            self._walk_term(g.rhs)
        else:
            self._walk_term(g.var)
            self._walk_goal(g.goal)

    def _walk_node(self, node: Node):
        if node.kind == "forall":
            var, goal = node.payload
            self._walk_term(var)
            self._walk_goal(goal)
        elif node.kind == "constraint":
            self._walk_term(node.payload[1])
            self._walk_term(node.payload[2])
        else:
            for a in node.payload[0].args:
                self._walk_term(a)
        for child in node.children:
            self._walk_node(child)

    # -- terms with inline stores -------------------------------------------

    def _var_text(self, vid):
        name = self.names.get(vid)
        if name is None:
            name = self.names[vid] = _name_for(len(self.names))
        view = self.answer.views.get(vid, ("top",))
        if view[0] == "neq":
            items = sorted((self.term_str(t) for t in view[1]))
            return "{%s.\\=.[%s]}" % (name, ",".join(items))
        if view[0] == "lin":
            parts = [
                "%s%s%s" % (name, _LIN_TEXT[op], format_number(val))
                for op, val in view[1]
            ]
            return "{%s}" % ", ".join(parts)
        return name

    def term_str(self, t):
        return format_term(t, names=self._store_names)

    def goal_str(self, g):
        if isinstance(g, Lit):
            prefix, shown = _display_pred(g.pred, self.pred_info)
            if not g.args:
                return prefix + shown
            return "%s%s(%s)" % (prefix, shown, ",".join(self.term_str(a) for a in g.args))
        if isinstance(g, CmpLit):
            return "%s%s%s" % (self.term_str(g.lhs), g.op, self.term_str(g.rhs))
        return "forall(%s,%s)" % (self.term_str(g.var), self.goal_str(g.goal))

    # -- sections -----------------------------------------------------------

    def _node_label(self, node: Node):
        if node.kind == "atom":
            return self.goal_str(node.payload[0])
        if node.kind == "constraint":
            op, l, r = node.payload
            return "%s%s%s" % (self.term_str(l), op, self.term_str(r))
        if node.kind == "chs":
            return "chs(%s)" % self.goal_str(node.payload[0])
        if node.kind == "proved":
            return "proved(%s)" % self.goal_str(node.payload[0])
        var, goal = node.payload
        return "forall(%s,%s)" % (self.term_str(var), self.goal_str(goal))

    def _node_lines(self, node: Node, depth, last, out):
        pad = "   " * depth
        label = self._node_label(node)
        if node.children:
            out.append("%s%s :-" % (pad, label))
            for i, child in enumerate(node.children):
                self._node_lines(child, depth + 1, i == len(node.children) - 1, out)
        else:
            out.append("%s%s%s" % (pad, label, "." if last else ","))

    def justification_text(self):
        out = []
        roots = self.answer.justification
        for i, node in enumerate(roots):
            self._node_lines(node, 0, i == len(roots) - 1, out)
        return "\n".join(out)

    def _shown_model(self):
        atoms = self.answer.model
        if self.shows:
            return [
                lit
                for lit in atoms
                if (_display_pred(lit.pred, self.pred_info)[1], len(lit.args))
                in self.shows
            ]
        return atoms

    def model_text(self):
        parts = [self.goal_str(lit) for lit in self._shown_model()]
        return "[ %s ]" % ", ".join(parts)

    def bindings_text(self):
        items = [(n, t) for n, t in self.answer.bindings if not n.startswith("_")]
        if not items:
            return ""
        lines = []
        for i, (name, t) in enumerate(items):
            end = " ? " if i == len(items) - 1 else ","
            lines.append("%s = %s%s" % (name, self.term_str(t), end))
        return "\n".join(lines)

    def json_object(self, with_model=True, with_justification=True):
        obj = {
            "answer": self.answer.number,
            "time_ms": round(self.answer.time_ms, 3),
            "bindings": {
                n: self.term_str(t)
                for n, t in self.answer.bindings
                if not n.startswith("_")
            },
        }
        if with_model:
            obj["model"] = [self.goal_str(lit) for lit in self._shown_model()]
        if with_justification:
            obj["justification"] = [
                self._json_node(n) for n in self.answer.justification
            ]
        return obj

    def _json_node(self, node: Node):
        out = {"label": self._node_label(node)}
        if node.children:
            out["children"] = [self._json_node(c) for c in node.children]
        return out


def _name_for(i):
    letters = ""
    while True:
        letters = chr(ord("A") + i % 26) + letters
        i = i // 26 - 1
        if i < 0:
            return letters


def render_answer(answer: Answer, pred_info=None, shows=None,
                  with_model=True, with_justification=True):
    """Full text block for one answer."""
    r = Renderer(answer, pred_info, shows)
    parts = ["Answer %d\t(in %.3f ms):" % (answer.number, answer.time_ms), ""]
    if with_justification:
        parts.append(r.justification_text())
        parts.append("")
    if with_model:
        parts.append(r.model_text())
        parts.append("")
    b = r.bindings_text()
    if b:
        parts.append(b)
    while parts and parts[-1] == "":
        parts.pop()
    return "\n".join(parts)


def render_answer_json(answer: Answer, pred_info=None, shows=None,
                       with_model=True, with_justification=True):
    r = Renderer(answer, pred_info, shows)
    return json.dumps(r.json_object(with_model, with_justification))
