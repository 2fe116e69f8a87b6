"""The embedding probe: five linked measurements that are jointly small
exactly when a full structure map is coarsely lipschitz.

The factor inclusion of a product is the well-behaved case; the
free-group window family distorts a segment exponentially and every
measurement grows with the window."""

from hhspace.embedding import probe_embedding, verify_embedding
from hhspace.fixtures import factor_inclusion, hagen

emb = factor_inclusion(3)
print("factor inclusion:", verify_embedding(emb))
pr = probe_embedding(emb)
print("  lipschitz", pr.lipschitz, "| qi", pr.qi,
      "| gates", pr.gate_defects, "| outside", pr.outside_diam)
print("  region distance %g within bound %g; hausdorff %g within %g"
      % (pr.region_distance, pr.region_bound, pr.hausdorff, pr.hausdorff_bound))

print("\ndistortion family (radius: lipschitz, qi, outside):")
for r in (2, 3, 4, 5, 6):
    e = hagen(r)
    pr = probe_embedding(e)
    lengths = [e.target.space.dset(e.space_map(m), e.space_map(m + 1))
               for m in range(r)]
    print("  r=%d: %4g %4g %4g   segment image lengths %s"
          % (r, pr.lipschitz[0], pr.qi[0], pr.outside_diam_proper, lengths))
