"""Derivation trees and the proof checker.

A derivation is a tree (shared subtrees allowed) of rule applications.
``check`` walks it bottom-up, validates every node under a theory
configuration and a domain declaration table, and reports the first
failure, the open assumptions, and the axioms used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import RuleError
from ..syntax.ast import (
    ContextVar, DomainTable, Eq, Exists, Forall, Formula, Member, Or,
    Sequent, Sharp, Var, alpha_eq, alpha_eq_all, free_vars, is_closed,
    is_singleton_literal, sharp_domain_name, term_state,
)
from ..syntax.printer import render_sequent
from ..syntax.subst import subst_formula, subst_sequent
from .rules import (
    AXIOMS, BACKWARD, EQUATIONS, FORWARD, RuleId, TheoryConfig, Verdict,
    _element_matches, _DECOMPOSE, dualize, flatten_or,
)


@dataclass(frozen=True)
class Derivation:
    """One rule application; leaves are identities, axioms or hypotheses."""

    conclusion: Sequent
    rule: RuleId
    direction: Optional[str] = None
    params: dict = field(default_factory=dict)
    premises: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def walk(self):
        """Post-order walk, visiting shared nodes once."""
        seen = set()

        def go(node):
            if id(node) in seen:
                return
            seen.add(id(node))
            for p in node.premises:
                yield from go(p)
            yield node

        yield from go(self)


@dataclass
class StepReport:
    index: int
    rule: RuleId
    direction: Optional[str]
    conclusion: Sequent
    ok: bool
    reason: Optional[str] = None


@dataclass
class CheckReport:
    accepted: bool
    steps: list
    first_failure: Optional[StepReport]
    assumptions: list
    axioms_used: list
    notes: list

    def summary(self) -> str:
        if self.accepted:
            return "ACCEPTED"
        f = self.first_failure
        return (f"REJECTED: {f.reason} at step {f.index} "
                f"({f.rule.value} :: {render_sequent(f.conclusion)})")


# ---------------------------------------------------------------------------
# node validation

def _require(cond: bool, message: str):
    if not cond:
        raise RuleError(message)


def _conc_of(premises) -> list:
    return [p.conclusion if isinstance(p, Derivation) else p for p in premises]


def _validate_equation(conclusion: Sequent, rule: RuleId, direction: str,
                       premises: Sequence[Sequent], params: dict,
                       cfg: TheoryConfig) -> None:
    if direction == FORWARD:
        # the conclusion carries the connective: decomposing it must give
        # back exactly the stated premises
        attempts = _decompose_attempts(conclusion, rule, params, cfg, premises)
        for attempt in attempts:
            if len(attempt) == len(premises) and alpha_eq_all(attempt, premises):
                return
        raise RuleError("premises are not the decomposition of the conclusion")
    _require(direction == BACKWARD, f"equation needs a direction, got {direction!r}")
    _require(len(premises) == 1, "backward equation step takes one premise")
    attempts = _decompose_attempts(premises[0], rule, params, cfg, [conclusion])
    pick = params.get("pick")
    for attempt in attempts:
        if pick == "left" and alpha_eq(attempt[0], conclusion):
            return
        if pick == "right" and alpha_eq(attempt[-1], conclusion):
            return
        if pick is None and any(alpha_eq(s, conclusion) for s in attempt):
            return
    raise RuleError("conclusion is not among the decompositions of the premise")


def _decompose_attempts(s: Sequent, rule: RuleId, params: dict,
                        cfg: TheoryConfig, targets: Sequence[Sequent]) -> list:
    """Decompositions of s to compare against targets.

    Explicit parameters give a single attempt.  Without them the principal
    position and the fresh variable are inferred by trying the finitely
    many candidates suggested by the targets.
    """
    decomp = _DECOMPOSE[rule]
    attempts = []
    for p in _candidate_params(s, rule, params, targets):
        try:
            attempts.append(decomp(s, p, cfg))
        except RuleError:
            continue
    if not attempts:
        # surface the parameterised error directly
        attempts.append(decomp(s, params, cfg))
    return attempts


def _candidate_params(s: Sequent, rule: RuleId, params: dict,
                      targets: Sequence[Sequent]) -> list:
    out = []
    if rule is RuleId.EQ_BOWTIE_R:
        if "var" in params:
            return [params]
        # fresh variables introduced by the plain side: memberships that do
        # not occur in the connective side
        have = free_vars(s)
        names = []
        for t in targets:
            for item in t.antecedent:
                if (isinstance(item, Member) and isinstance(item.term, Var)
                        and item.term.name not in have):
                    names.append(item.term.name)
        for name in dict.fromkeys(names):
            out.append(dict(params, var=name))
        out.append(params)
        return out
    if rule is RuleId.EQ_OR_L and "index" not in params:
        hits = [i for i, f in enumerate(s.antecedent) if isinstance(f, Or)]
        out = [dict(params, index=i) for i in hits]
        out.append(params)
        return out
    return [params]


def _validate_equality_node(conclusion: Sequent, direction: str,
                            premises: Sequence[Sequent], params: dict) -> None:
    """Leibniz equation, validated by substitution.

    The equality-free sequent is the composed side; the decomposed side
    carries a fresh z and the antecedent equality z = t.  Whatever the
    occurrence selection was, eliminating the equality must reproduce the
    composed side exactly.
    """
    _require(len(premises) == 1, "equality step takes one premise")
    premise = premises[0]
    if direction == BACKWARD:
        plain, enriched = premise, conclusion
    else:
        _require(direction == FORWARD, "equality step needs a direction")
        plain, enriched = conclusion, premise
    indices = ([params["index"]] if "index" in params else
               range(len(enriched.antecedent) - 1, -1, -1))
    for j in indices:
        if not 0 <= j < len(enriched.antecedent):
            continue
        item = enriched.antecedent[j]
        if not (isinstance(item, Eq) and isinstance(item.left, Var)):
            continue
        z, t = item.left.name, item.right
        if isinstance(t, Var) and t.name == z:
            continue
        if z in free_vars(plain):
            continue  # z must be chosen new
        rest = Sequent(enriched.antecedent[:j] + enriched.antecedent[j + 1:],
                       enriched.succedent)
        if alpha_eq(subst_sequent(rest, z, t), plain):
            return
    raise RuleError("eliminating the antecedent equality does not "
                    "reproduce the other side")


def _validate_exists_node(conclusion: Sequent, direction: str,
                          premises: Sequence[Sequent], params: dict) -> None:
    """Existential equation; the fresh body and membership may sit anywhere
    in the plain side's antecedent (the duality step produces them in
    membership-first order)."""
    _require(len(premises) == 1, "existential step takes one premise")
    premise = premises[0]
    if direction == FORWARD:
        quantified, plain = conclusion, premise
    else:
        _require(direction == BACKWARD, "existential step needs a direction")
        quantified, plain = premise, conclusion
    _require(alpha_eq_all(quantified.succedent, plain.succedent),
             "existential step keeps the succedent")
    _require(len(plain.antecedent) == len(quantified.antecedent) + 1,
             "plain side has the body and membership in place of the "
             "existential formula")
    ex_indices = ([params["index"]] if "index" in params else
                  [j for j, f in enumerate(quantified.antecedent)
                   if isinstance(f, Exists)])
    mem_indices = ([params["member"]] if "member" in params else
                   [i for i, f in enumerate(plain.antecedent)
                    if isinstance(f, Member) and isinstance(f.term, Var)])
    for j in ex_indices:
        ex = quantified.antecedent[j]
        if not isinstance(ex, Exists):
            continue
        without_ex = quantified.antecedent[:j] + quantified.antecedent[j + 1:]
        for im in mem_indices:
            mem = plain.antecedent[im]
            if not (isinstance(mem, Member) and isinstance(mem.term, Var)):
                continue
            if mem.domain != ex.domain:
                continue
            z = mem.term.name
            if z in free_vars(quantified):
                continue  # z must be fresh for the quantified side
            body = subst_formula(ex.body, ex.var, Var(z))
            body_indices = ([params["body"]] if "body" in params else
                            range(len(plain.antecedent)))
            for ib in body_indices:
                if ib == im or not 0 <= ib < len(plain.antecedent):
                    continue
                if not (isinstance(plain.antecedent[ib], Formula)
                        and alpha_eq(plain.antecedent[ib], body)):
                    continue
                rest = tuple(f for i, f in enumerate(plain.antecedent)
                             if i not in (im, ib))
                if alpha_eq_all(rest, without_ex):
                    return
    raise RuleError("plain side does not open the existential formula")


def _validate_forall_node(conclusion: Sequent, direction: str,
                          premises: Sequence[Sequent], params: dict,
                          cfg: TheoryConfig) -> None:
    _require(len(premises) == 1, "quantifier step takes one premise")
    premise = premises[0]
    if direction == FORWARD:
        quantified, plain = conclusion, premise
    else:
        _require(direction == BACKWARD, "quantifier step needs a direction")
        quantified, plain = premise, conclusion
    if not cfg.right_contexts_in_forall and len(quantified.succedent) != 1:
        raise RuleError(
            "universal quantifier takes no right context in basic mode "
            "(enable classical right contexts)")
    _require(len(plain.antecedent) == len(quantified.antecedent) + 1,
             "plain side must add exactly one membership")
    _require(len(plain.succedent) == len(quantified.succedent),
             "quantifier step keeps the succedent arity")
    mem = plain.antecedent[-1]
    _require(isinstance(mem, Member) and isinstance(mem.term, Var),
             "plain side must end with a variable membership")
    z = mem.term.name
    _require(alpha_eq_all(plain.antecedent[:-1], quantified.antecedent),
             "contexts differ")
    _require(z not in free_vars(quantified),
             f"variable {z} is not fresh: it occurs in the quantified side")
    slots = params.get("slot")
    candidates = [slots] if slots is not None else range(len(quantified.succedent))
    for k in candidates:
        q = quantified.succedent[k]
        if not isinstance(q, Forall):
            continue
        if q.domain != mem.domain:
            continue
        rest_ok = all(alpha_eq(plain.succedent[i], quantified.succedent[i])
                      for i in range(len(quantified.succedent)) if i != k)
        if not rest_ok:
            continue
        if alpha_eq(plain.succedent[k], subst_formula(q.body, q.var, Var(z))):
            return
    raise RuleError("no universal slot matches the instantiated premise")


# -- one-directional rules ---------------------------------------------------

def _validate_identity(c: Sequent) -> None:
    _require(len(c.antecedent) == 1 and len(c.succedent) == 1,
             "identity is A |- A")
    a, b = c.antecedent[0], c.succedent[0]
    _require(isinstance(a, Formula) and isinstance(b, Formula),
             "identity holds between formulas")
    _require(alpha_eq(a, b), "identity needs the same formula on both sides")


def _validate_reflexivity(c: Sequent) -> None:
    _require(len(c.antecedent) == 0, "reflexivity has no premises on the left")
    _require(len(c.succedent) == 1 and isinstance(c.succedent[0], Eq),
             "reflexivity concludes |- t = t")
    eq = c.succedent[0]
    _require(eq.left == eq.right, "reflexivity needs both sides equal")


def _validate_cut(c: Sequent, premises: Sequence[Sequent], params: dict) -> None:
    _require(len(premises) == 2, "cut takes two premises")
    left, right = premises
    _require(len(left.succedent) == 1 and isinstance(left.succedent[0], Formula),
             "first cut premise must conclude a single formula")
    cut_formula = params.get("cut", left.succedent[0])
    _require(alpha_eq(cut_formula, left.succedent[0]),
             "cut formula does not match the first premise")
    _require(alpha_eq_all(right.succedent, c.succedent),
             "cut keeps the succedent of the second premise")
    indices = ([params["index"]] if "index" in params else
               [j for j, item in enumerate(right.antecedent)
                if isinstance(item, Formula) and alpha_eq(item, cut_formula)])
    for j in indices:
        if not (0 <= j < len(right.antecedent)):
            continue
        if not (isinstance(right.antecedent[j], Formula)
                and alpha_eq(right.antecedent[j], cut_formula)):
            continue
        spliced = (right.antecedent[:j] + left.antecedent
                   + right.antecedent[j + 1:])
        if alpha_eq_all(spliced, c.antecedent):
            return
    raise RuleError("conclusion does not splice the cut premises")


def _validate_subst(c: Sequent, premises: Sequence[Sequent],
                    params: dict) -> None:
    _require(len(premises) == 1, "substitution takes one premise")
    premise = premises[0]
    pairs = []
    if "var" in params and "term" in params:
        pairs.append((params["var"], params["term"]))
    else:
        for pm, pc in zip(premise.antecedent, c.antecedent):
            if (isinstance(pm, Member) and isinstance(pm.term, Var)
                    and isinstance(pc, Member) and is_closed(pc.term)
                    and pm.domain == pc.domain):
                pairs.append((pm.term.name, pc.term))
    _require(bool(pairs), "cannot determine the substituted variable; "
                          "pass var=<v> term=<t>")
    for v, t in pairs:
        if not is_closed(t):
            raise RuleError(f"substituted term {t!r} is not closed")
        if any(isinstance(i, ContextVar) and i.name == v
               for i in premise.antecedent + premise.succedent):
            raise RuleError(
                f"variable {v} also names a context metavariable; its "
                f"occurrences there are unknowable")
        if alpha_eq(subst_sequent(premise, v, t), c):
            return
    raise RuleError("conclusion is not a substitution instance of the premise")


def _validate_f_subst(c: Sequent, premises: Sequence[Sequent], params: dict,
                      cfg: TheoryConfig, table: Optional[DomainTable]) -> None:
    if not cfg.singleton_axioms:
        raise RuleError("forgetful substitution is disabled: it rests on "
                        "the singleton axioms (singleton_axioms off)")
    _require(len(premises) == 1, "forgetful substitution takes one premise")
    premise = premises[0]
    pairs = []
    if "var" in params and "state" in params:
        pairs.append((params["var"], params["state"]))
    else:
        for pm, pc in zip(premise.antecedent, c.antecedent):
            if (isinstance(pm, Member) and isinstance(pm.term, Var)
                    and isinstance(pc, Member) and is_closed(pc.term)
                    and pc.domain == sharp_domain_name(pm.domain)):
                pairs.append((pm.term.name, term_state(pc.term)))
    _require(bool(pairs), "cannot determine the forgetful substitution; "
                          "pass var=<v> state=<s>")
    tbl = table or DomainTable()
    for v, s in pairs:
        mem_domains = [i.domain for i in premise.antecedent
                       if isinstance(i, Member) and isinstance(i.term, Var)
                       and i.term.name == v]
        if not mem_domains:
            continue
        domain_name = mem_domains[-1]
        if domain_name not in tbl:
            raise RuleError(f"domain {domain_name} is not declared")
        if s not in tbl.resolve(domain_name).labels:
            raise RuleError(
                f"state {s} is not an outcome of domain {domain_name}")
        if alpha_eq(subst_sequent(premise, v, Sharp(s), mode="forgetful"), c):
            return
    raise RuleError("conclusion is not a forgetful-substitution instance "
                    "of the premise")


def _validate_exists_r(c: Sequent, premises: Sequence[Sequent],
                       params: dict) -> None:
    _require(len(premises) == 1, "existential introduction takes one premise")
    premise = premises[0]
    _require(len(c.succedent) == 1 and isinstance(c.succedent[0], Exists),
             "conclusion must be a single existential formula")
    _require(len(premise.succedent) == 1
             and isinstance(premise.succedent[0], Formula),
             "premise must conclude a single formula")
    ex = c.succedent[0]
    a = premise.succedent[0]
    same_ctx = alpha_eq_all(c.antecedent, premise.antecedent)
    extended = (len(c.antecedent) == len(premise.antecedent) + 1
                and alpha_eq_all(c.antecedent[:-1], premise.antecedent))
    _require(same_ctx or extended,
             "conclusion context must extend the premise by at most the "
             "witness membership")
    if "term" in params:
        witnesses = [params["term"]]
    else:
        witnesses = [i.term for i in c.antecedent
                     if isinstance(i, Member) and i.domain == ex.domain]
    for t in witnesses:
        has_membership = any(
            isinstance(i, Member) and i.domain == ex.domain and i.term == t
            for i in c.antecedent)
        if not has_membership:
            continue
        if extended:
            last = c.antecedent[-1]
            if not (isinstance(last, Member) and last.domain == ex.domain
                    and last.term == t):
                continue
        if alpha_eq(subst_formula(ex.body, ex.var, t), a):
            return
    raise RuleError("no witness membership matches the premise formula")


def _validate_weaken_l(c: Sequent, premises: Sequence[Sequent],
                       params: dict) -> None:
    _require(len(premises) == 1, "weakening takes one premise")
    premise = premises[0]
    _require(alpha_eq_all(c.succedent, premise.succedent),
             "weakening keeps the succedent")
    _require(len(c.antecedent) == len(premise.antecedent) + 1,
             "weakening adds exactly one antecedent item")
    positions = ([params["position"]] if "position" in params
                 else range(len(c.antecedent)))
    for j in positions:
        if not 0 <= j < len(c.antecedent):
            continue
        rest = c.antecedent[:j] + c.antecedent[j + 1:]
        if alpha_eq_all(rest, premise.antecedent):
            if "formula" in params and not alpha_eq(params["formula"],
                                                    c.antecedent[j]):
                continue
            return
    raise RuleError("conclusion is not a one-formula weakening of the premise")


def _validate_dualize(c: Sequent, premises: Sequence[Sequent]) -> None:
    _require(len(premises) == 1, "dualize takes one premise")
    _require(alpha_eq(dualize(premises[0]), c),
             "conclusion is not the dual of the premise")


# -- axioms -------------------------------------------------------------------

def _resolve(table: Optional[DomainTable], name: str):
    table = table or DomainTable()
    return table.resolve(name)


def _validate_ax_singleton(c: Sequent, cfg: TheoryConfig,
                           table: Optional[DomainTable]) -> None:
    if not cfg.singleton_axioms:
        raise RuleError("singleton axiom is disabled (singleton_axioms off)")
    _require(len(c.antecedent) == 1 and len(c.succedent) == 1,
             "singleton axiom is z in {u} |- z = u")
    mem, eq = c.antecedent[0], c.succedent[0]
    _require(isinstance(mem, Member) and isinstance(mem.term, Var),
             "singleton axiom needs a variable membership on the left")
    _require(isinstance(eq, Eq), "singleton axiom concludes an equality")
    domain = _resolve(table, mem.domain)
    _require(domain.kind == "singleton" or is_singleton_literal(mem.domain),
             f"domain {mem.domain} is not a singleton")
    _require(isinstance(eq.left, Var) and eq.left.name == mem.term.name,
             "equality must bind the membership variable")
    _require(_element_matches(eq.right, domain.elements[0]),
             f"equality right side does not name the element of {mem.domain}")


def _validate_ax_focus(c: Sequent, cfg: TheoryConfig,
                       table: Optional[DomainTable]) -> None:
    _require(len(c.antecedent) == 1 and len(c.succedent) == 1,
             "focus axiom is z in D |- z = t1 \\/ ... \\/ z = tm")
    mem, disj = c.antecedent[0], c.succedent[0]
    _require(isinstance(mem, Member) and isinstance(mem.term, Var),
             "focus axiom needs a variable membership on the left")
    domain = _resolve(table, mem.domain)
    if not cfg.is_focused(mem.domain, table):
        raise RuleError(f"domain {mem.domain} is not declared focused "
                        f"(focus axiom unavailable)")
    parts = flatten_or(disj) if isinstance(disj, Formula) else [disj]
    _require(len(parts) == len(domain.elements),
             f"focus disjunction must list the {len(domain.elements)} "
             f"element(s) of {mem.domain}")
    z = mem.term.name
    for part, element in zip(parts, domain.elements):
        _require(isinstance(part, Eq) and isinstance(part.left, Var)
                 and part.left.name == z,
                 "each disjunct must equate the membership variable")
        _require(_element_matches(part.right, element),
                 "disjuncts must name the elements in declared order")


def _validate_ax_member(c: Sequent, table: Optional[DomainTable]) -> None:
    _require(len(c.antecedent) == 0 and len(c.succedent) == 1,
             "membership fact is |- t in D")
    mem = c.succedent[0]
    _require(isinstance(mem, Member), "membership fact concludes t in D")
    domain = _resolve(table, mem.domain)
    _require(any(_element_matches(mem.term, e) for e in domain.elements),
             f"term does not name an element of {mem.domain}")


def _validate_ax_sharp_member(c: Sequent, cfg: TheoryConfig,
                              table: Optional[DomainTable]) -> None:
    if not cfg.singleton_axioms:
        raise RuleError("sharp membership facts are disabled "
                        "(singleton_axioms off)")
    _require(len(c.antecedent) == 0 and len(c.succedent) == 1,
             "sharp membership fact is |- #s in D^f")
    mem = c.succedent[0]
    _require(isinstance(mem, Member), "sharp membership fact concludes #s in D^f")
    _require(is_closed(mem.term), "sharp membership needs a closed term")
    table = table or DomainTable()
    try:
        labels = table.sharp_labels(mem.domain)
    except Exception as exc:
        raise RuleError(str(exc))
    state = term_state(mem.term)
    _require(state in labels,
             f"state {state} is not an outcome of the set behind {mem.domain}")


# ---------------------------------------------------------------------------
# dispatch

def validate_step(conclusion: Sequent, rule: RuleId, direction: Optional[str],
                  premises: Sequence[Sequent], params: Optional[dict] = None,
                  cfg: Optional[TheoryConfig] = None,
                  table: Optional[DomainTable] = None) -> None:
    """Raise RuleError unless the step is a valid application."""
    params = params or {}
    cfg = cfg or TheoryConfig()
    premises = _conc_of(premises)
    if rule in EQUATIONS:
        _require(direction in (FORWARD, BACKWARD),
                 f"{rule.value} needs direction forward|backward")
        if rule is RuleId.EQ_EQUALITY:
            _validate_equality_node(conclusion, direction, premises, params)
        elif rule is RuleId.EQ_FORALL_R:
            _validate_forall_node(conclusion, direction, premises, params, cfg)
        elif rule is RuleId.EQ_EXISTS_L:
            _validate_exists_node(conclusion, direction, premises, params)
        else:
            _validate_equation(conclusion, rule, direction, premises, params, cfg)
        return
    if rule is RuleId.IDENTITY:
        _premise_len(premises, 0, rule)
        _validate_identity(conclusion)
    elif rule is RuleId.REFLEXIVITY:
        _premise_len(premises, 0, rule)
        _validate_reflexivity(conclusion)
    elif rule is RuleId.CUT:
        _validate_cut(conclusion, premises, params)
    elif rule is RuleId.SUBST:
        _validate_subst(conclusion, premises, params)
    elif rule is RuleId.F_SUBST:
        _validate_f_subst(conclusion, premises, params, cfg, table)
    elif rule is RuleId.EXISTS_R:
        _validate_exists_r(conclusion, premises, params)
    elif rule is RuleId.WEAKEN_L:
        _validate_weaken_l(conclusion, premises, params)
    elif rule is RuleId.DUALIZE:
        _validate_dualize(conclusion, premises)
    elif rule is RuleId.AX_SINGLETON:
        _premise_len(premises, 0, rule)
        _validate_ax_singleton(conclusion, cfg, table)
    elif rule is RuleId.AX_FOCUS:
        _premise_len(premises, 0, rule)
        _validate_ax_focus(conclusion, cfg, table)
    elif rule is RuleId.AX_MEMBER:
        _premise_len(premises, 0, rule)
        _validate_ax_member(conclusion, table)
    elif rule is RuleId.AX_SHARP_MEMBER:
        _premise_len(premises, 0, rule)
        _validate_ax_sharp_member(conclusion, cfg, table)
    elif rule is RuleId.HYPOTHESIS:
        _premise_len(premises, 0, rule)
    else:  # pragma: no cover - exhaustive enum
        raise RuleError(f"unknown rule {rule!r}")


def _premise_len(premises, n: int, rule: RuleId):
    _require(len(premises) == n,
             f"{rule.value} takes {n} premise(s), got {len(premises)}")


def rule_step(conclusion: Sequent, rule: RuleId, premises: Sequence[Sequent],
              params: Optional[dict] = None, cfg: Optional[TheoryConfig] = None,
              table: Optional[DomainTable] = None,
              direction: Optional[str] = None) -> Verdict:
    """Validity verdict for one rule application (premises in script order)."""
    try:
        validate_step(conclusion, rule, direction, premises, params, cfg, table)
        return Verdict(True)
    except RuleError as exc:
        return Verdict(False, str(exc))


def check(derivation: Derivation, cfg: Optional[TheoryConfig] = None,
          table: Optional[DomainTable] = None) -> CheckReport:
    """Validate every node; failures become report entries, not exceptions."""
    cfg = cfg or TheoryConfig()
    steps = []
    first_failure = None
    assumptions = []
    axioms_used = []
    notes = []
    for index, node in enumerate(derivation.walk(), start=1):
        try:
            validate_step(node.conclusion, node.rule, node.direction,
                          node.premises, node.params, cfg, table)
            ok, reason = True, None
        except RuleError as exc:
            ok, reason = False, str(exc)
        entry = StepReport(index, node.rule, node.direction, node.conclusion,
                           ok, reason)
        steps.append(entry)
        if not ok and first_failure is None:
            first_failure = entry
        if node.rule is RuleId.HYPOTHESIS:
            assumptions.append(node.conclusion)
        if node.rule in AXIOMS:
            name = node.rule.value
            dom = _axiom_domain_name(node.conclusion)
            axioms_used.append(f"{name}({dom})" if dom else name)
        if node.rule is RuleId.DUALIZE:
            notes.append(f"step {index}: duality used as an explicit rule")
        if node.rule is RuleId.AX_SHARP_MEMBER:
            notes.append(f"step {index}: sharp membership taken as a "
                         f"declared fact and cut against")
    return CheckReport(first_failure is None, steps, first_failure,
                       assumptions, sorted(set(axioms_used)), notes)


def _axiom_domain_name(c: Sequent) -> Optional[str]:
    for item in c.antecedent + c.succedent:
        if isinstance(item, Member):
            return item.domain
    return None
