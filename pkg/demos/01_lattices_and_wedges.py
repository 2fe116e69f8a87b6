"""Index lattices: relations, wedges, joins, orthogonal containers.

The running example is the 5-element index set of a product of two
one-element structures: the two factor maximals, one container each, and
a top element.
"""

from hhspace.fixtures import fixture_b_product
from hhspace.lattice import EMPTY

model = fixture_b_product()
lat = model.lattice

print("elements:", *lat.elements, sep="\n  ")
print("\nstructural validation:", lat.validate_relations())
print("wedge axioms:", lat.verify_intersection_property())
print("clean containers:", lat.verify_clean_containers())
print("complexity (longest chain):", lat.complexity())

s1, s2 = ("l", "S1"), ("r", "S2")
print("\nwedge of the two factor maximals (orthogonal):",
      lat.wedge(s1, s2) is EMPTY and "empty")
print("wedge with the top is the identity:", lat.wedge(s1, lat.maximal) == s1)
print("join of the factors is the top:", lat.join(s1, s2) == lat.maximal)
print("container of S1 is V_S1:", lat.top_container(s1))
print("container is orthogonal to its argument:",
      lat.orthogonal(s1, lat.top_container(s1)))

print("\nHasse diagram (DOT):")
print(lat.hasse_dot())
