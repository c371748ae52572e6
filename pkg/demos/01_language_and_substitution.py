#! /usr/bin/env python3
"""Tour of the sequent language: parsing, printing, substitution.

A sequent `Gamma |- Delta` asserts that the premises yield the items of
information on the right.  Terms are first-order variables, outcome pairs
`<state, probability>`, or sharp terms `#state` (probability forgotten,
i.e. reset to 1).
"""
from fractions import Fraction

from rfod import (
    Domain, DomainTable, Outcome, Sharp, alpha_eq, free_vars, parse_sequent,
    render, substitute,
)
from rfod.syntax import parse_formula

# ============================================================================
# Parsing and the canonical printer are inverse up to bound-variable names.

s = parse_sequent("G, z in D |- A(z)")
print(render(s))

closed = parse_sequent("|- forall x in D . A(x)")
assert alpha_eq(parse_sequent(render(closed)), closed)

# The correlated comma ,_S links two succedent formulas that share one
# random variable; it is a slot structure, not a connective.

correlated = parse_sequent("G, z in DS |- A(z) ,_S A'(z)")
print(render(correlated))

# ============================================================================
# Free variables ignore bound occurrences and context metavariables.

f = parse_formula("forall x in D . A(x) & B(z)")
assert free_vars(f) == {"z"}

# ============================================================================
# Substitution by a closed term; the forgetful mode models a selective
# measurement: memberships move to the sharp companion set and the
# predicate gains the ^f mark.

plain = substitute(parse_formula("A(z)"), "z", Outcome("t1", Fraction(1, 2)))
print(render(plain))

forgotten = substitute(parse_formula("z in DZ"), "z", Sharp("s1"),
                       mode="forgetful")
assert render(forgotten) == "#s1 in DZ^f"

# ============================================================================
# Domains are finite outcome sets whose probabilities must sum to 1.

d = Domain("D", (Outcome("t1", Fraction(1, 2)), Outcome("t2", Fraction(1, 2))))
print(render(d))

table = DomainTable([d])
assert table.resolve("{u}").kind == "singleton"  # literals resolve implicitly

print("ok")
