#! /usr/bin/env python3
"""Definitory equations, rule applications, and the proof checker.

Connectives are introduced by bidirectional definitory equations;
`backward` decomposes the connective, `forward` composes it.  Derivations
are trees of rule applications that the checker replays step by step.
"""
from rfod import (
    Derivation, DomainTable, RuleId, TheoryConfig, check, dualize,
    equation_step, parse_sequent, render, serialize_derivation,
)
from rfod.calculus import check_script, parse_script
from rfod.theorems import schematic_domain

# ============================================================================
# Rewriting along the universal-quantifier equation.

start = parse_sequent("G |- forall x in D . A(x)")
opened = equation_step(start, RuleId.EQ_FORALL_R, "backward")[0]
print(render(opened))
closed_again = equation_step(opened, RuleId.EQ_FORALL_R, "forward")[0]
assert render(closed_again) == render(start)

# The additive conjunction splits a shared context into two premises.

both = equation_step(parse_sequent("G |- A(t) & B(t)"),
                     RuleId.EQ_AND_R, "backward")
print([render(s) for s in both])

# ============================================================================
# The duality transform used in the focusing argument: swap the sides,
# dualize every formula, keep memberships on the left.

dual = dualize(parse_sequent("z != t1 & z != t2, y in D |- z != y"))
assert render(dual) == "y in D, z = y |- z = t1 \\/ z = t2"
assert dualize(dual) == parse_sequent("y in D, z != t1 & z != t2 |- z != y")

# ============================================================================
# A two-step derivation checked by the kernel: the reflection axiom.

forall = parse_sequent("forall x in D . A(x) |- forall x in D . A(x)")
identity = Derivation(forall, RuleId.IDENTITY)
reflection = Derivation(
    parse_sequent("forall x in D . A(x), z in D |- A(z)"),
    RuleId.EQ_FORALL_R, "backward", {"var": "z"}, (identity,))

table = DomainTable([schematic_domain("D", 2)])
report = check(reflection, TheoryConfig(), table)
print(report.summary())
assert report.accepted

# ============================================================================
# Derivations serialize to line-oriented proof scripts and re-check.

text = serialize_derivation(reflection, table, config=TheoryConfig())
print(text)
script = parse_script(text)
assert check_script(script).accepted

# Toggling an axiom off makes the checker reject exactly at its leaf.

singleton = Derivation(parse_sequent("z in {u} |- z = #u"),
                       RuleId.AX_SINGLETON)
assert check(singleton, TheoryConfig()).accepted
rejected = check(singleton, TheoryConfig(singleton_axioms=False))
assert not rejected.accepted
print(rejected.summary())

print("ok")
