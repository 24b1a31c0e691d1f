"""Words, integer lattices, and subgroup graphs.

Walks through the three element/subgroup representations the library is
built on: reduced words in F_k, Hermite-normal-form lattices in Z^n, and
folded covering graphs of the rose.
"""

from commsol.freewords import Alphabet, Word, cyclic_decompose, parse_word, primitive_root
from commsol import lattices, stallings

print("== free words ==")
a2 = Alphabet(2)
w = parse_word("abBA", a2)
print(f"abBA reduces to {w} (uppercase letters are inverses)")

g = parse_word("Aba", a2)
u, c = cyclic_decompose(g)
print(f"Aba = u c u^-1 with u = {u}, c = {c}")

r, m = primitive_root(parse_word("abbA", a2))
print(f"abbA is ({r})^{m}: powers of non-cyclically-reduced words cancel")

print()
print("== lattices in Z^2 ==")
lat = lattices.from_generators([(2, 0), (1, 1), (0, 2)])
print(f"<(2,0),(1,1),(0,2)> canonicalizes to columns {lat.cols}, index {lattices.index(lat)}")
meet = lattices.intersect(
    lattices.from_generators([(2, 0), (0, 1)]), lattices.from_generators([(1, 0), (0, 3)])
)
print(f"2Z x Z meet Z x 3Z = columns {meet.cols}, index {lattices.index(meet)}")
print(f"kernel of depth 4 over Z: {lattices.profinite_kernel(1, 4).cols[0][0]}Z (= lcm 1..4)")

print()
print("== subgroup graphs of F_2 ==")
W = lambda s: Word(2, s)
ker_a = stallings.from_generators([W("aa"), W("b"), W("abA")], 2)
print(f"<aa, b, abA> folds to {ker_a.m} vertices; contains 'ab'? {stallings.contains(ker_a, W('ab'))}")
print(f"its canonical free basis: {[str(b) for b in stallings.basis(ker_a)]}")

counts = {}
for sub in stallings.enumerate_subgroups(2, 3):
    counts[sub.m] = counts.get(sub.m, 0) + 1
print(f"subgroups of F_2 by index: {counts} (1, 3, 13 at indices 1, 2, 3)")

incomplete = stallings.from_generators([W("aa")], 2)
print(f"<aa> folds incomplete (infinite index): complete = {incomplete.complete}")
