"""Commensurations as automorphisms of the subgroup system.

A commensuration phi: H -> K acts on the truncated inverse system of
finite-index subgroups: its component at an object G is phi restricted to
phi^-1(G ∩ K).  The top component recovers phi, composition chases index
functions, and restriction to a cofinal family is invertible up to
equivalence.
"""

from commsol import catalog, lattices
from commsol.commensurations import compose, equivalent, make_zn
from commsol.prosystems import (
    build_system,
    cofinal_restrict,
    compose_morphisms,
    format_morphism,
    identity_morphism,
    morphisms_equivalent,
    reconstruct,
    zeta,
)

print("== the depth-2 system over Z ==")
two = make_zn([[2]])
m = zeta(two, 2)
print(format_morphism(m))
print()

print("== round trip and functoriality over F_2 ==")
cat = catalog.f2_catalog()
swap, shift = cat["swap"], cat["shift"]
print(f"reconstruct(zeta(swap, 3)) ~ swap? {equivalent(reconstruct(zeta(swap, 3)), swap)}")

lhs = zeta(compose(swap, shift), 2)
rhs = compose_morphisms(zeta(swap, 2), zeta(shift, 2))
print(f"zeta(swap o shift) ~ zeta(swap) o zeta(shift)? {morphisms_equivalent(lhs, rhs)}")

print(f"zeta separates swap from the identity? "
      f"{not morphisms_equivalent(zeta(swap, 2), zeta(cat['identity'], 2))}")

print()
print("== cofinal restriction ==")
system = build_system("Z", 1, 6)
sub, restr, inv = cofinal_restrict(system, lambda lat: lattices.index(lat) % 2 == 0)
print(f"even-index objects of the depth-6 system: {[lattices.index(o) for o in sub.objects]}")
round_trip = morphisms_equivalent(
    compose_morphisms(inv, restr), identity_morphism(system)
)
print(f"restriction o inverse ~ identity? {round_trip}")
print("(5Z is covered through the materialized meet 5Z ∩ 2Z = 10Z)")
