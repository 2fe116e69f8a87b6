"""A finite product model: audit, realization, regions, gates, and the
distance formula, which is exact on the l1 grid."""

from hhspace.fixtures import grid_product
from hhspace.model import (audit_axioms, distance_formula_fit, gate,
                           product_region, realize)

model = grid_product(5, 7)
print("grid 5x7 with the product structure;",
      len(model.space), "vertices,", len(model.elements), "index elements")

report = audit_axioms(model)
print("\naxiom audit:")
print(report.summary())

x = (2, 3)
v, defect = realize(model, model.coords_of(x))
print("\nre-realizing the coordinates of", x, "->", v, "defect", defect)

t = {("l", "S1"): frozenset([3]), ("r", "S2"): frozenset([5])}
print("realizing the abstract tuple (3, 5) ->", realize(model, t)[0])

region = product_region(model, ("l", "S1"), 0)
print("\nregion of the first factor: F =", sorted(region.F)[:3], "...",
      "E =", sorted(region.E)[:3], "...")
print("parallel copies:", len(region.copies))

print("gate of (3, 4) onto the bottom row:",
      gate(model, region.F, (3, 4)))

fit = distance_formula_fit(model, 1)
print("\ndistance formula at threshold 1: K=%g, C=%g (exact)" % (fit.K, fit.C))
