"""Commensurations as quasi-isometries and their boundary action.

A commensuration becomes a self-map of the group by projecting to its
domain first; equivalent commensurations stay a bounded distance apart,
inequivalent ones drift.  The covering lift computes the same map through
the solenoid tower, and on the boundary of F_2 the action on attracting
fixed points separates inequivalent commensurations.
"""

from commsol import catalog
from commsol.commensurations import compose, make_zn
from commsol.freewords import Word
from commsol.geometry import (
    baseleaf_map,
    bounded_distance,
    boundary_action,
    factorization_check,
    fixed_point,
    qi_estimate,
)

W = lambda s: Word(2, s)
cat = catalog.f2_catalog()

print("== quasi-isometry constants ==")
print(f"identity:   {qi_estimate(baseleaf_map(cat['identity']), 4).render()}")
print(f"x2 on Z:    {qi_estimate(baseleaf_map(make_zn([[2]])), 10).render()}")
print(f"a -> ab:    {qi_estimate(baseleaf_map(cat['shift']), 4).render()}")

print()
print("== bounded distance versus drift ==")
rep = bounded_distance(baseleaf_map(cat["shift"]), baseleaf_map(cat["shift|ker_a"]), 7)
print(f"shift vs its restriction: {rep.render()}")
rep = bounded_distance(baseleaf_map(cat["swap"]), baseleaf_map(cat["identity"]), 7)
print(f"swap vs identity:         {rep.render()}")

print()
print("== the lift computes the same map ==")
print(f"shift|ker_a: {factorization_check(cat['shift|ker_a'], 2, 5).render()}")
print(f"x2 on Z:     {factorization_check(make_zn([[2]]), 4, 12).render()}")

print()
print("== boundary fixed points ==")
p = fixed_point(W("Aba"))
print(f"(Aba)+ = {p.render()}, expanding to {p.expansion(10)}...")
q = boundary_action(cat["inner_a"], fixed_point(W("b")))
print(f"conjugation by a sends b+ to {q.render()}")

comp = compose(cat["swap"], cat["shift"])
lhs = boundary_action(comp, fixed_point(W("ab")))
rhs = boundary_action(cat["swap"], boundary_action(cat["shift"], fixed_point(W("ab"))))
print(f"the action is equivariant on ab+: {lhs == rhs}")

sep = next(
    g
    for g in (W("a"), W("b"), W("ab"), W("ba"))
    if boundary_action(cat["swap"], fixed_point(g))
    != boundary_action(cat["identity"], fixed_point(g))
)
print(f"swap and identity are separated already by {sep}+")
