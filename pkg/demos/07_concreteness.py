"""Support thresholds and concreteness: a structure whose top element is
not the join of the space's support carries dead weight; restricting to
the core below that join preserves everything within a measured
neighborhood."""

from hhspace.fixtures import bounded_factor_product, grid_product
from hhspace.model import audit_axioms, concretize, epsilon_support

m = grid_product(5, 7)
print("support of a point:", epsilon_support(m, [(0, 0)], 0))
print("support of the grid:", sorted(map(str, epsilon_support(
    m, m.space.vertices, 1))))

m = bounded_factor_product(7)
print("\npath x point model:", len(m.lattice.elements), "elements")
res = concretize(m)
print("concretized: core =", res.core)
print("removed:", sorted(map(str, res.removed)))
print("space stays within", res.neighborhood, "of the core region")
print("restricted model audits:", audit_axioms(res.model).ok)
