"""Capture-avoiding substitution, forgetful substitution, freshness."""
from __future__ import annotations

from typing import Iterable, Optional

from ..errors import SubstitutionError
from .ast import (
    And, Atom, Bot, Bowtie, ContextVar, Correlated, Eq, Exists, Forall,
    Formula, Member, Neq, Or, Sequent, Sharp, Star, Term, Var,
    bound_vars, free_vars, is_closed, sharp_domain_name, sharp_pred_name,
)


def fresh_var(avoid: Iterable[str]) -> str:
    """Deterministic fresh-name supply: z, y, z1, z2, ..."""
    taken = set(avoid)
    for name in ("z", "y"):
        if name not in taken:
            return name
    i = 1
    while f"z{i}" in taken:
        i += 1
    return f"z{i}"


def subst_term(t: Term, v: str, replacement: Term) -> Term:
    if isinstance(t, Var) and t.name == v:
        return replacement
    return t


def subst_formula(f: Formula, v: str, t: Term) -> Formula:
    """Replace free occurrences of v by t, renaming binders that would capture."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, v, t) for a in f.args))
    if isinstance(f, Member):
        return Member(subst_term(f.term, v, t), f.domain)
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, Neq):
        return Neq(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, And):
        return And(subst_formula(f.left, v, t), subst_formula(f.right, v, t))
    if isinstance(f, Or):
        return Or(subst_formula(f.left, v, t), subst_formula(f.right, v, t))
    if isinstance(f, Star):
        return Star(subst_formula(f.left, v, t), subst_formula(f.right, v, t))
    if isinstance(f, Bot):
        return f
    if isinstance(f, (Forall, Exists)):
        cls = type(f)
        if f.var == v:
            return f
        if v not in free_vars(f):
            return f
        body = f.body
        var = f.var
        if isinstance(t, Var) and t.name == var:
            new = fresh_var(free_vars(body) | {v, t.name})
            body = subst_formula(body, var, Var(new))
            var = new
        return cls(var, f.domain, subst_formula(body, v, t))
    if isinstance(f, Bowtie):
        if f.var == v or v not in free_vars(f):
            return f
        left, right, var = f.left, f.right, f.var
        if isinstance(t, Var) and t.name == var:
            new = fresh_var(free_vars(left) | free_vars(right) | {v, t.name})
            left = subst_formula(left, var, Var(new))
            right = subst_formula(right, var, Var(new))
            var = new
        return Bowtie(var, f.domain, subst_formula(left, v, t),
                      subst_formula(right, v, t))
    raise TypeError(f"subst_formula: unsupported formula {f!r}")


def substitute(f: Formula, v: str, t: Term, mode: str = "plain") -> Formula:
    """Public substitution operation.

    ``plain`` replaces free occurrences of v by the closed term t.
    ``forgetful`` additionally requires t sharp: memberships of v move to
    the sharp companion set and predicates applied to v gain the ^f mark,
    modelling a selective measurement.
    """
    if mode not in ("plain", "forgetful"):
        raise SubstitutionError(f"unknown substitution mode {mode!r}")
    if not is_closed(t):
        raise SubstitutionError(f"substituted term must be closed, got {t!r}")
    if mode == "plain":
        return subst_formula(f, v, t)
    if not isinstance(t, Sharp):
        raise SubstitutionError("forgetful substitution requires a sharp term")
    return forgetful_formula(f, v, t)


def forgetful_formula(f: Formula, v: str, t: Sharp) -> Formula:
    if isinstance(f, Atom):
        if any(isinstance(a, Var) and a.name == v for a in f.args):
            return Atom(sharp_pred_name(f.pred),
                        tuple(subst_term(a, v, t) for a in f.args))
        return f
    if isinstance(f, Member):
        if isinstance(f.term, Var) and f.term.name == v:
            return Member(t, sharp_domain_name(f.domain))
        return f
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, Neq):
        return Neq(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, And):
        return And(forgetful_formula(f.left, v, t), forgetful_formula(f.right, v, t))
    if isinstance(f, Or):
        return Or(forgetful_formula(f.left, v, t), forgetful_formula(f.right, v, t))
    if isinstance(f, Star):
        return Star(forgetful_formula(f.left, v, t), forgetful_formula(f.right, v, t))
    if isinstance(f, Bot):
        return f
    if isinstance(f, (Forall, Exists)):
        if f.var == v:
            return f
        return type(f)(f.var, f.domain, forgetful_formula(f.body, v, t))
    if isinstance(f, Bowtie):
        if f.var == v:
            return f
        return Bowtie(f.var, f.domain, forgetful_formula(f.left, v, t),
                      forgetful_formula(f.right, v, t))
    raise TypeError(f"forgetful_formula: unsupported formula {f!r}")


def _map_item(item, fn):
    if isinstance(item, ContextVar):
        return item
    if isinstance(item, Correlated):
        return Correlated(item.label, fn(item.left), fn(item.right))
    return fn(item)


def subst_sequent(s: Sequent, v: str, t: Term, mode: str = "plain") -> Sequent:
    """Substitute throughout a sequent; context metavariables pass unchanged
    (the contexts they stand for do not depend on the variable)."""
    if mode == "plain":
        fn = lambda f: subst_formula(f, v, t)
    else:
        if not isinstance(t, Sharp):
            raise SubstitutionError("forgetful substitution requires a sharp term")
        fn = lambda f: forgetful_formula(f, v, t)
    return Sequent(tuple(_map_item(i, fn) for i in s.antecedent),
                   tuple(_map_item(i, fn) for i in s.succedent))


def fresh_for(node, extra: Iterable[str] = ()) -> str:
    return fresh_var(free_vars(node) | bound_vars(node) | set(extra))


# ---------------------------------------------------------------------------
# occurrence-indexed replacement (used by the equality equation)

def replace_term_occurrences(s: Sequent, old: Term, new: Term,
                             positions: Optional[Iterable[int]] = None) -> Sequent:
    """Replace occurrences of ``old`` throughout the sequent.

    Positions are 1-based over the occurrences of ``old`` in reading order
    (antecedent before succedent, left to right); None means all.  Spots
    where ``old`` is a variable bound by an enclosing quantifier do not
    count as occurrences.
    """
    wanted = None if positions is None else set(positions)
    counter = [0]

    def replace_at(t, shadowed):
        if isinstance(old, Var) and old.name in shadowed:
            return t
        if t == old:
            counter[0] += 1
            if wanted is None or counter[0] in wanted:
                return new
        return t

    def visit(f, shadowed):
        if isinstance(f, Atom):
            return Atom(f.pred, tuple(replace_at(a, shadowed) for a in f.args))
        if isinstance(f, Member):
            return Member(replace_at(f.term, shadowed), f.domain)
        if isinstance(f, Eq):
            return Eq(replace_at(f.left, shadowed), replace_at(f.right, shadowed))
        if isinstance(f, Neq):
            return Neq(replace_at(f.left, shadowed), replace_at(f.right, shadowed))
        if isinstance(f, And):
            return And(visit(f.left, shadowed), visit(f.right, shadowed))
        if isinstance(f, Or):
            return Or(visit(f.left, shadowed), visit(f.right, shadowed))
        if isinstance(f, Star):
            return Star(visit(f.left, shadowed), visit(f.right, shadowed))
        if isinstance(f, Bot):
            return f
        if isinstance(f, (Forall, Exists)):
            return type(f)(f.var, f.domain, visit(f.body, shadowed | {f.var}))
        if isinstance(f, Bowtie):
            inner = shadowed | {f.var}
            return Bowtie(f.var, f.domain, visit(f.left, inner), visit(f.right, inner))
        raise TypeError(f"replace_term_occurrences: unsupported {f!r}")

    def map_item(item):
        if isinstance(item, ContextVar):
            return item
        if isinstance(item, Correlated):
            return Correlated(item.label, visit(item.left, set()),
                              visit(item.right, set()))
        return visit(item, set())

    return Sequent(tuple(map_item(i) for i in s.antecedent),
                   tuple(map_item(i) for i in s.succedent))
