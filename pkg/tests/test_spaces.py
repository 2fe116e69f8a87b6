import pytest

from hhspace.spaces import (CoarseMap, FiniteSpace, coarse_map_constants,
                            cone_off, cycle_graph, four_point_delta,
                            path_graph, product_graph, qi_constants,
                            single_point)


def test_path_metric():
    g = path_graph(0, 4)
    assert g.d(0, 4) == 4
    assert g.diam() == 4
    assert g.interval(1, 3) == (1, 2, 3)


def test_disconnected_rejected():
    with pytest.raises(ValueError):
        FiniteSpace([0, 1, 2], [(0, 1)])


def test_set_distances():
    g = path_graph(0, 6)
    assert g.dset({0, 1}, {5}) == 5
    assert g.gap({0, 1}, {5, 6}) == 4
    assert g.hausdorff({0, 1}, {0, 1, 2}) == 1
    assert g.neighborhood({3}, 1) == frozenset({2, 3, 4})


def test_subspace_keeps_ambient_metric():
    g = path_graph(0, 4)
    s = g.subspace([0, 4])
    assert s.d(0, 4) == 4


def test_delta_tree_is_zero():
    t = FiniteSpace(range(7), [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6)])
    assert four_point_delta(t) == 0.0


def test_delta_single_vertex():
    assert four_point_delta(single_point()) == 0.0


def test_delta_grid_p5_p7():
    # value frozen from the exhaustive four-tuple scan over all 35 vertices
    grid = product_graph(path_graph(0, 4), path_graph(0, 6))
    assert four_point_delta(grid) == 4.0


def test_delta_cycles():
    assert four_point_delta(cycle_graph(8)) == 2.0
    assert four_point_delta(cycle_graph(9)) == 1.5


def test_quasiconvexity_exact():
    grid = product_graph(path_graph(0, 4), path_graph(0, 4))
    row = [(i, 0) for i in range(5)]
    assert grid.qc_constant(row) == 0
    corners = [(0, 0), (4, 4)]
    # every geodesic between opposite corners stays in the interval; the
    # farthest interval point from the two corners is (0,4) or (4,0)
    assert grid.qc_constant(corners) == 4


def test_cone_off_diameter():
    g = path_graph(0, 9)
    c = cone_off(g, {"all": g.vertices})
    assert c.diam_set(g.vertices) == 2
    assert ("cone", "all") in c


def test_coarse_map_constants_identity_and_constant():
    g = path_graph(0, 5)
    assert coarse_map_constants(CoarseMap.identity(g)) == (1.0, 0.0)
    const = CoarseMap.constant(g, g, [2])
    assert coarse_map_constants(const) == (0.0, 0.0)


def test_coarse_map_constants_stretch():
    dom = path_graph(0, 3)
    cod = path_graph(0, 9)
    f = CoarseMap.single(dom, cod, lambda v: 3 * v)
    K, C = coarse_map_constants(f)
    assert K == C == 2.25  # worst pair (0, 3): image distance 9 over d+1 = 4


def test_qi_constants_isometry():
    g = path_graph(0, 5)
    assert qi_constants(CoarseMap.identity(g)) == (1.0, 0.0)


def test_quasi_inverse_closest_point():
    dom = path_graph(0, 2)
    cod = path_graph(0, 8)
    f = CoarseMap.single(dom, cod, lambda v: 4 * v)
    inv = f.quasi_inverse()
    assert inv(0) == frozenset([0])
    assert inv(3) == frozenset([1])
    assert inv(8) == frozenset([2])


def test_compose():
    a, b, c = path_graph(0, 2), path_graph(0, 4), path_graph(0, 8)
    f = CoarseMap.single(a, b, lambda v: 2 * v)
    g = CoarseMap.single(b, c, lambda v: 2 * v)
    h = f.compose(g)
    assert h(2) == frozenset([8])


def test_pair_distance_matrix_matches_dset():
    g = path_graph(0, 5)
    f = CoarseMap(g, g, {v: frozenset([v, min(v + 1, 5)]) for v in g.vertices})
    T = f.pair_distance_matrix()
    for i, u in enumerate(g.vertices):
        for j, v in enumerate(g.vertices):
            assert T[i, j] == g.dset(f(u), f(v))


def test_relabel_and_dot():
    g = path_graph(0, 2)
    r = g.relabel(lambda v: ("a", v))
    assert r.d(("a", 0), ("a", 2)) == 2
    assert '"0" -- "1"' in g.dot()
