import pytest

from hhspace.embedding import (Embedding, NotFull, clipped_sum_compare,
                               probe_embedding, pullback_model, verify_embedding)
from hhspace.fixtures import factor_inclusion, grid_product, hagen, hagen_target
from hhspace.indexmaps import IndexMap
from hhspace.model import audit_axioms, trivial_model
from hhspace.spaces import CoarseMap, path_graph


def test_identity_embedding_trivial():
    m = grid_product(3, 3)
    e = Embedding.identity(m)
    assert verify_embedding(e).ok
    pr = probe_embedding(e)
    assert pr.lipschitz == (1.0, 0.0)
    assert pr.qi == (1.0, 0.0)
    assert pr.outside_diam == 0.0
    assert pr.gate_defects == (0.0, 0.0)
    assert pr.pullback_audit.ok


def test_factor_inclusion_probe_small_constants():
    e = factor_inclusion(2)
    ver = verify_embedding(e)
    assert ver.ok
    assert ver.measured["diagram_defect"] == 0.0
    pr = probe_embedding(e)
    assert pr.lipschitz == (1.0, 0.0)
    assert pr.qi == (1.0, 0.0)
    assert pr.outside_diam == 0.0
    assert pr.pullback_audit.ok
    assert pr.region_distance <= pr.region_bound
    assert pr.rho_coincidence_max <= 1.0
    assert pr.hausdorff <= pr.hausdorff_bound


def test_factor_inclusion_stable_across_radii():
    rows = [probe_embedding(factor_inclusion(r)) for r in (1, 2, 3)]
    for pr in rows:
        assert pr.lipschitz == (1.0, 0.0)
        assert pr.qi == (1.0, 0.0)
        assert pr.outside_diam == 0.0
        assert max(pr.gate_defects) <= 1.0
        assert pr.region_distance <= pr.region_bound
        assert pr.hausdorff <= pr.hausdorff_bound


def test_non_full_probe_rejected():
    m = grid_product(3, 3)
    src = trivial_model(path_graph(0, 2), elt="T", name="seg")
    e = Embedding(
        src, m,
        CoarseMap.single(src.space, m.space, lambda v: (v, 0)),
        IndexMap(src.lattice, m.lattice, {"T": ("S",)}),
        {"T": CoarseMap.constant(src.hyp["T"], m.hyp[("S",)],
                                 m.hyp[("S",)].vertices)})
    with pytest.raises(NotFull):
        probe_embedding(e)


def test_clipped_sum_compare_identity():
    m = grid_product(3, 4)
    e = Embedding.identity(m)
    out = clipped_sum_compare(e, 1, 1)
    assert out["forward"] == (1.0, 0.0)
    assert out["reverse"] == (1.0, 0.0)


def test_clipped_sum_compare_factor():
    e = factor_inclusion(2)
    out = clipped_sum_compare(e, 1, 1)
    # source sum is exactly the image-side sum over the image elements
    assert out["forward"] == (1.0, 0.0)
    assert out["reverse"] == (1.0, 0.0)


def test_clipped_sum_compare_hagen_forward_bounded():
    # fullness alone bounds the source-side clipped sum by the image-side
    # one; on this fixture the image elements carry an isometric copy of the
    # source coordinate, so both directions are exact even though the space
    # map itself is badly non-lipschitz
    e = hagen(4)
    out = clipped_sum_compare(e, 1, 1)
    assert out["forward"] == (1.0, 0.0)
    assert out["reverse"] == (1.0, 0.0)


def test_hagen_image_lengths_exact():
    for r in (2, 4, 6):
        e = hagen(r)
        for m in range(r):
            assert e.target.space.dset(e.space_map(m), e.space_map(m + 1)) == 2 * m + 2


def test_hagen_target_audits():
    rep = audit_axioms(hagen_target(4))
    assert rep.ok


def test_hagen_fullness_and_degradation():
    # the transverse outside elements carry the growth; the coned-off
    # maximal element's contribution plateaus at the cone constant and is
    # reported separately
    values = {}
    for r in (2, 3, 4, 5, 6):
        e = hagen(r)
        assert verify_embedding(e).ok
        pr = probe_embedding(e)
        values[r] = (pr.lipschitz[0], pr.qi[0], pr.outside_diam_proper)
        assert pr.outside_diam >= pr.outside_diam_proper
    for a, b in zip((2, 3, 4, 5), (3, 4, 5, 6)):
        assert values[a][0] < values[b][0]
        assert values[a][1] < values[b][1]
        assert values[a][2] < values[b][2]
    assert [values[r][2] for r in (2, 3, 4, 5, 6)] == [2, 3, 4, 5, 6]


def test_hagen_region_distance_within_bound():
    pr = probe_embedding(hagen(4))
    assert pr.region_distance <= pr.region_bound


def test_pullback_model_structure():
    e = factor_inclusion(2)
    pb = pullback_model(e)
    assert len(pb.space) == 5
    assert pb.lattice.elements == e.source.lattice.elements
    assert audit_axioms(pb).ok
