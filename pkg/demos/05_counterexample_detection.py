"""The uniformity detector. Windows of the Bass-Serre line of the
ascending integer extension have full, quasiconvex, uniformly lipschitz
edge maps, yet the comparison maps of the single identification class
stretch by the multiplier per step. The combination refuses with the
measured table."""

from hhspace.fixtures import bs_window
from hhspace.treecombine import ComparisonNotUniform, build_combined

print("radius 1 still combines:",
      len(build_combined(bs_window(2, 1)).model.lattice.elements),
      "combined elements")

try:
    build_combined(bs_window(2, 4))
except ComparisonNotUniform as exc:
    print("\nradius 4 refused:", exc)
    print("\nmeasured comparison constants by tree distance:")
    by_d = {}
    for (_, _, d, K, _) in exc.table:
        by_d[d] = max(by_d.get(d, 0), K)
    for d in sorted(by_d):
        print("  distance %d: K = %g   (doubling bound 2^d/2 = %g)"
              % (d, by_d[d], 2 ** d / 2))
