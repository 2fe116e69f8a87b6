"""Combining a tree of models: identification classes, support trees,
coned-off hyperbolic models, and the full audit of the result.

The window is the Bass-Serre tree of the free product of the cyclic
groups of orders two and three, out to tree radius two."""

from hhspace.fixtures import free_product_z2_z3
from hhspace.treecombine import audit_combined

res = free_product_z2_z3(2)
c = res.combined
print("window tree:", len(c.tree.vertices), "vertices;",
      "glued space:", len(c.model.space), "vertices")
print("classes:", [cls.id for cls in c.classes])
print("supports:", {sid: sorted(map(str, sup))[:3]
                    for sid, sup in c.supports.items()})
print("combined index set:", c.model.lattice.elements)

rep = audit_combined(c)
print("\ncombined audit:")
print(rep.summary())

print("\nconed tree of the single support (DOT):")
print(list(c.coned.values())[0].space.dot()[:400], "...")
