"""Conjunctions of linear constraints over exact rationals.

A store keeps a triangular substitution for solved equalities, normalized
weak/strict inequalities, and held disequalities.  Satisfiability, variable
bounds, and projection all run through Fourier-Motzkin elimination, which is
exact over the rationals, so every constraint the solver reports has been
decided rather than approximated.

Linear forms are plain tuples ``(constant, ((vid, coeff), ...))`` with the
variable ids sorted; an inequality entry ``(form, strict)`` means
``form <= 0`` (or ``form < 0`` when strict), and a disequality entry means
``form != 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

__all__ = [
    "LinearStore", "complement", "form_const", "form_var", "form_add",
    "form_sub", "form_neg", "form_scale", "form_vars", "form_is_const",
    "ZERO",
]

_F0 = Fraction(0)
_F1 = Fraction(1)

ZERO = (_F0, ())


def form_const(c) -> tuple:
    return (Fraction(c), ())


def form_var(vid: int) -> tuple:
    return (_F0, ((vid, _F1),))


def form_add(a: tuple, b: tuple) -> tuple:
    terms = dict(a[1])
    for vid, coef in b[1]:
        c = terms.get(vid, _F0) + coef
        if c == 0:
            terms.pop(vid, None)
        else:
            terms[vid] = c
    return (a[0] + b[0], tuple(sorted(terms.items())))


def form_scale(a: tuple, k: Fraction) -> tuple:
    if k == 0:
        return ZERO
    return (a[0] * k, tuple((vid, coef * k) for vid, coef in a[1]))


def form_neg(a: tuple) -> tuple:
    return form_scale(a, Fraction(-1))


def form_sub(a: tuple, b: tuple) -> tuple:
    return form_add(a, form_neg(b))


def form_vars(a: tuple):
    return {vid for vid, _ in a[1]}


def form_coef(a: tuple, vid: int) -> Fraction:
    for v, coef in a[1]:
        if v == vid:
            return coef
    return _F0


def form_is_const(a: tuple) -> bool:
    return not a[1]


def form_apply(a: tuple, subst: dict) -> tuple:
    """Replace every substituted variable in a form by its solved value."""
    out = (a[0], tuple((v, c) for v, c in a[1] if v not in subst))
    for vid, coef in a[1]:
        repl = subst.get(vid)
        if repl is not None:
            out = form_add(out, form_scale(repl, coef))
    return out


def complement(op: str):
    """Operators whose disjunction is the exact negation of op."""
    return {
        "<": (">=",),
        "<=": (">",),
        ">": ("<=",),
        ">=": ("<",),
        "=": ("<", ">"),
        "!=": ("=",),
    }[op]


# -- Fourier-Motzkin machinery ------------------------------------------------


def _ground_split(cons):
    """Partition constraints into live ones and a contradiction flag."""
    live = []
    for form, strict in cons:
        if form_is_const(form):
            if form[0] > 0 or (form[0] == 0 and strict):
                return None
            continue
        live.append((form, strict))
    return live


def _fm_step(cons, vid):
    lowers, uppers, rest = [], [], []
    for form, strict in cons:
        coef = form_coef(form, vid)
        if coef == 0:
            rest.append((form, strict))
        elif coef > 0:
            uppers.append((form, strict, coef))
        else:
            lowers.append((form, strict, coef))
    for lf, ls, lc in lowers:
        for uf, us, uc in uppers:
            comb = form_add(form_scale(uf, -lc), form_scale(lf, uc))
            rest.append((comb, ls or us))
    return rest


def _fm_sat(cons) -> bool:
    cons = list(cons)
    while True:
        cons = _ground_split(cons)
        if cons is None:
            return False
        if not cons:
            return True
        vs = set()
        for form, _ in cons:
            vs |= form_vars(form)
        cons = _fm_step(cons, min(vs))


def _bounds(cons, vid):
    """Tightest (lower, upper) bounds on vid entailed by cons.

    Each bound is (value, strict) or None when unbounded on that side.
    cons must be satisfiable.
    """
    cons = list(cons)
    while True:
        cons = _ground_split(cons) or []
        others = set()
        for form, _ in cons:
            others |= form_vars(form)
        others.discard(vid)
        if not others:
            break
        cons = _fm_step(cons, min(others))
    lo = hi = None
    for form, strict in cons:
        coef = form_coef(form, vid)
        if coef == 0:
            continue
        val = -form[0] / coef
        if coef > 0:
            if hi is None or val < hi[0] or (val == hi[0] and strict):
                hi = (val, strict)
        else:
            if lo is None or val > lo[0] or (val == lo[0] and strict):
                lo = (val, strict)
    return lo, hi


def _canonical(form, strict):
    k = abs(form[1][0][1])
    if k != 1:
        form = form_scale(form, _F1 / k)
    return (form, strict)


def _tighten(cons):
    """Keep only the tightest bound per scaled variable part."""
    best = {}
    for form, strict in cons:
        form, strict = _canonical(form, strict)
        key = form[1]
        cur = best.get(key)
        if cur is None or form[0] > cur[0] or (form[0] == cur[0] and strict):
            best[key] = (form[0], strict)
    return sorted((((c, key), s) for key, (c, s) in best.items()))


class LinearStore:
    """Immutable conjunction of linear constraints."""

    __slots__ = ("subst", "ineqs", "neqs")

    def __init__(self, subst=None, ineqs=(), neqs=()):
        self.subst = subst or {}
        self.ineqs = tuple(ineqs)
        self.neqs = tuple(neqs)

    @classmethod
    def empty(cls) -> "LinearStore":
        return _EMPTY

    def vars(self) -> set:
        out = set(self.subst)
        for form in self.subst.values():
            out |= form_vars(form)
        for form, _ in self.ineqs:
            out |= form_vars(form)
        for form in self.neqs:
            out |= form_vars(form)
        return out

    def is_empty(self) -> bool:
        return not (self.subst or self.ineqs or self.neqs)

    # -- assertion ----------------------------------------------------------

    def assert_constraint(self, op: str, lhs: tuple, rhs: tuple):
        """Conjoin ``lhs op rhs``; returns (store, determined) or None.

        determined lists (vid, value) pairs for every variable the new store
        fixes to a single rational, including ones fixed before this call.
        """
        diff = form_apply(form_sub(lhs, rhs), self.subst)
        subst = dict(self.subst)
        ineqs = list(self.ineqs)
        neqs = list(self.neqs)
        if op == "=":
            if form_is_const(diff):
                return (self, self._determined()) if diff[0] == 0 else None
            _solve_eq(subst, diff)
        elif op == "!=":
            if form_is_const(diff):
                return (self, self._determined()) if diff[0] != 0 else None
            neqs.append(diff)
        else:
            if op == "<":
                entry = (diff, True)
            elif op == "<=":
                entry = (diff, False)
            elif op == ">":
                entry = (form_neg(diff), True)
            elif op == ">=":
                entry = (form_neg(diff), False)
            else:
                raise ValueError(f"unknown linear operator {op!r}")
            form, strict = entry
            if form_is_const(form):
                if form[0] < 0 or (form[0] == 0 and not strict):
                    return (self, self._determined())
                return None
            ineqs.append(entry)
        store = _normalize(subst, ineqs, neqs)
        if store is None:
            return None
        return store, store._determined()

    def _determined(self):
        return [(vid, form[0]) for vid, form in self.subst.items() if form_is_const(form)]

    # -- queries --------------------------------------------------------------

    def value_of(self, vid: int) -> Optional[Fraction]:
        form = self.subst.get(vid)
        if form is not None and form_is_const(form):
            return form[0]
        return None

    def entails(self, op: str, lhs: tuple, rhs: tuple) -> bool:
        """True when every solution of the store satisfies ``lhs op rhs``."""
        for cop in complement(op):
            if self.assert_constraint(cop, lhs, rhs) is not None:
                return False
        return True

    def project(self, vid: int):
        """Constraints on a single variable, as ordered (op, value) pairs.

        An exactly-determined variable yields ``[('=', v)]``; otherwise the
        tightest lower bound, tightest upper bound, and excluded points are
        listed in that order.  Unconstrained variables yield [].
        """
        cons = list(self.ineqs)
        sub = self.subst.get(vid)
        if sub is not None:
            diff = form_sub(form_var(vid), form_apply(sub, self.subst))
            cons.append((diff, False))
            cons.append((form_neg(diff), False))
        lo, hi = _bounds(cons, vid)
        if lo and hi and lo[0] == hi[0]:
            if lo[1] or hi[1]:
                return []  # unsatisfiable point; callers check store validity first
            return [("=", lo[0])]
        excluded = set()
        for form in self.neqs:
            if form_vars(form) == {vid}:
                excluded.add(-form[0] / form_coef(form, vid))
            else:
                excluded |= self._forced_zero_points(cons, vid, form)
        # An excluded point sitting on a closed bound just strictens the bound.
        if lo and not lo[1] and lo[0] in excluded:
            excluded.discard(lo[0])
            lo = (lo[0], True)
        if hi and not hi[1] and hi[0] in excluded:
            excluded.discard(hi[0])
            hi = (hi[0], True)
        out = []
        if lo:
            out.append((">" if lo[1] else ">=", lo[0]))
        if hi:
            out.append(("<" if hi[1] else "<=", hi[0]))
        for val in sorted(excluded):
            if lo and (val < lo[0] or (val == lo[0] and lo[1])):
                continue
            if hi and (val > hi[0] or (val == hi[0] and hi[1])):
                continue
            out.append(("!=", val))
        return out

    def _forced_zero_points(self, cons, vid, form):
        """Values of vid at which the inequalities force ``form = 0``.

        Such a value is excluded by the disequality ``form != 0`` even though
        form mentions other variables.  The forced set is finite (an interval
        of forced values would mean form = 0 everywhere, which normalization
        already rejects), and each forced value shows up as a vid-bound of one
        of the systems {form = 0}, {form > 0}, {form < 0}, so those endpoints
        are a complete candidate list; each candidate is then verified.
        """
        candidates = set()
        extensions = (
            [(form, False), (form_neg(form), False)],
            [(form, True)],
            [(form_neg(form), True)],
        )
        for extra in extensions:
            if not _fm_sat(cons + extra):
                continue
            lo, hi = _bounds(cons + extra, vid)
            if lo:
                candidates.add(lo[0])
            if hi:
                candidates.add(hi[0])
        forced = set()
        for val in candidates:
            point = form_sub(form_var(vid), form_const(val))
            pinned = cons + [(point, False), (form_neg(point), False)]
            if not _fm_sat(pinned):
                continue  # vid cannot take this value at all; bounds cover it
            if not _fm_sat(pinned + [(form, True)]) and not _fm_sat(
                pinned + [(form_neg(form), True)]
            ):
                forced.add(val)
        return forced


def _solve_eq(subst, diff):
    """Extend the substitution with diff = 0 solved for its smallest variable."""
    vid, coef = diff[1][0]
    rest = (diff[0], diff[1][1:])
    repl = form_scale(rest, _F1 / -coef)
    for k in list(subst):
        subst[k] = form_subst_one(subst[k], vid, repl)
    subst[vid] = repl


def form_subst_one(form, vid, repl):
    coef = form_coef(form, vid)
    if coef == 0:
        return form
    base = (form[0], tuple((v, c) for v, c in form[1] if v != vid))
    return form_add(base, form_scale(repl, coef))


def _normalize(subst, ineqs, neqs):
    """Re-establish store invariants; None when the conjunction is empty."""
    while True:
        cons = [(form_apply(f, subst), s) for f, s in ineqs]
        cons = _ground_split(cons)
        if cons is None:
            return None
        cons = _tighten(cons)
        if not _fm_sat(cons):
            return None
        fixed = None
        for vid in sorted({v for form, _ in cons for v in form_vars(form)}):
            lo, hi = _bounds(cons, vid)
            if lo and hi and lo[0] == hi[0] and not lo[1] and not hi[1]:
                fixed = (vid, lo[0])
                break
        if fixed is None:
            ineqs = cons
            break
        _solve_eq(subst, form_sub(form_var(fixed[0]), form_const(fixed[1])))
        ineqs = cons
    out_neqs = []
    for form in neqs:
        form = form_apply(form, subst)
        if form_is_const(form):
            if form[0] == 0:
                return None
            continue
        eq_pair = [(form, False), (form_neg(form), False)]
        if not _fm_sat(list(ineqs) + eq_pair):
            continue  # already impossible to be zero: entailed
        if not _fm_sat(list(ineqs) + [(form, True)]) and not _fm_sat(
            list(ineqs) + [(form_neg(form), True)]
        ):
            return None  # the store forces form = 0
        canon, _ = _canonical(form, False)
        if canon[1][0][1] < 0:
            canon = form_neg(canon)
        out_neqs.append(canon)
    seen = set()
    uniq = []
    for form in sorted(out_neqs):
        if form not in seen:
            seen.add(form)
            uniq.append(form)
    return LinearStore(subst, tuple(ineqs), tuple(uniq))


_EMPTY = LinearStore()
