#! /usr/bin/env python3
"""From Hilbert-space states to checked sequent assertions.

Measuring a state in a basis yields a random first-order domain; phase
identification decides whether that domain may be declared focused; the
Schmidt decomposition separates product states (two independent variables)
from entangled ones (one shared variable under the correlated comma).
"""
import math

from rfod import DomainTable, RuleId, TheoryConfig, check, render
from rfod.calculus import equation_step
from rfod.quantum import (
    IdentificationMode, QState, basis_y, basis_z, density_of, emit_assertion,
    focusing_status, measure, named_state, purity, schmidt,
)
from rfod.theorems import check_reversibility

# ============================================================================
# Born rule: |+> measured along z is the uniform two-outcome domain.

plus = named_state("plus")
dz = measure(plus, basis_z())
print(render(dz), dz.kind)

# Its density operator is properly mixed; a basis state gives a projector.

print("purity:", purity(density_of(dz, basis_z())))
assert abs(purity(density_of(dz, basis_z())) - 0.5) < 1e-9
sharp = measure(named_state("zero"), basis_z())
assert abs(purity(density_of(sharp, basis_z())) - 1.0) < 1e-9

# After a z-collapse, the y-spin is uniformly uncertain.

print(render(measure(named_state("up_z"), basis_y())))

# ============================================================================
# Phases: identification up to a global phase is uniform; keeping phases,
# a superposed state blocks the focusing condition.

assert focusing_status(plus, basis_z(), IdentificationMode.DISREGARD_PHASES)
assert not focusing_status(plus, basis_z(), IdentificationMode.STRICT)

# The logical side agrees: declared focused, the measured domain supports
# a reversibility witness; undeclared, the focus axiom is missing.

may_focus = focusing_status(plus, basis_z(), IdentificationMode.STRICT)
cfg = TheoryConfig(focused_domains=frozenset({dz.name} if may_focus else ()))
assert check_reversibility(dz, cfg).reversible == may_focus

# ============================================================================
# Schmidt decomposition: coefficients (1/sqrt2, 1/sqrt2) for a Bell state.

bell = named_state("bell")
data = schmidt(bell)
print("schmidt:", [round(c, 8) for c in data.coefficients])
assert abs(data.coefficients[0] - 1 / math.sqrt(2)) < 1e-7

product = named_state("product_0plus")
assert schmidt(product).coefficients[1] <= 1e-7

# ============================================================================
# Emitted assertions: separable states get two independent variables,
# entangled states one shared variable under the correlated comma, which
# the bowtie connective internalizes.

table = DomainTable()
print(render(emit_assertion(product, bipartite=True, table=DomainTable())))
correlated = emit_assertion(bell, bipartite=True, table=table)
print(render(correlated))

bowtie = equation_step(correlated, RuleId.EQ_BOWTIE_R, "forward")[0]
print(render(bowtie))
assert equation_step(bowtie, RuleId.EQ_BOWTIE_R, "backward",
                     {"var": "z"}) == [correlated]

print("ok")
