import pytest

from hhspace.embedding import Embedding
from hhspace.fixtures import bs_window
from hhspace.indexmaps import IndexMap
from hhspace.model import audit_axioms, trivial_model
from hhspace.spaces import CoarseMap, FiniteSpace, path_graph, single_point
from hhspace.treecombine import (THAT, ComparisonNotUniform, HypothesisFailure,
                                 TreeOfHHS, audit_combined, build_combined,
                                 combined_wedge_table, comparison_map, decorate,
                                 equivalence_classes)


def point_edge_tree(spaces):
    """Chain of one-element vertex models glued through point edge models."""
    names = ["v%d" % i for i in range(len(spaces))]
    vm = {names[i]: trivial_model(spaces[i], elt="S", name=names[i])
          for i in range(len(spaces))}
    edges, em, emap = [], {}, {}
    for i in range(len(spaces) - 1):
        e = tuple(sorted((names[i], names[i + 1])))
        edges.append(e)
        pm = trivial_model(single_point(("e", i)), elt="SE")
        em[e] = pm

        def attach(target, point):
            return Embedding(
                pm, target,
                CoarseMap.constant(pm.space, target.space, [point]),
                IndexMap(pm.lattice, target.lattice, {"SE": "S"}),
                {"SE": CoarseMap.constant(pm.hyp["SE"], target.hyp["S"], [point])})

        emap[(e, names[i])] = attach(vm[names[i]], spaces[i].vertices[0])
        emap[(e, names[i + 1])] = attach(vm[names[i + 1]], spaces[i + 1].vertices[0])
    return TreeOfHHS(names, edges, vm, em, emap, name="chain")


def test_not_a_tree_rejected():
    sp = path_graph(0, 1)
    m = trivial_model(sp)
    with pytest.raises(ValueError):
        TreeOfHHS(["a", "b"], [], {"a": m, "b": m}, {}, {})


def test_equivalence_classes_single_edge():
    t = point_edge_tree([path_graph(0, 1), path_graph(0, 2)])
    cls = equivalence_classes(t)
    assert len(cls) == 1
    assert cls[0].support == frozenset(["v0", "v1"])
    assert cls[0].favorite_vertex == "v0"


def test_classes_span_chain():
    t = point_edge_tree([path_graph(0, 1)] * 4)
    cls = equivalence_classes(t)
    assert len(cls) == 1
    assert cls[0].support == frozenset(["v0", "v1", "v2", "v3"])


def test_comparison_identity():
    t = point_edge_tree([path_graph(0, 1), path_graph(0, 1)])
    cls = equivalence_classes(t)[0]
    m, K, C = comparison_map(t, cls, "v0", "v0")
    assert (K, C) == (1.0, 0.0)


def test_comparison_through_bounded_models_uniform():
    t = point_edge_tree([path_graph(0, 1), path_graph(0, 2), path_graph(0, 1)])
    cls = equivalence_classes(t)[0]
    m, K, C = comparison_map(t, cls, "v2", "v0")
    assert K <= 2.0


def test_bs_window_comparison_growth():
    t = bs_window(2, 4)
    cls = equivalence_classes(t)[0]
    for d in (2, 3, 4):
        m, K, C = comparison_map(t, cls, "v%d" % d, "v0")
        assert K >= 2 ** d / 2


def test_bs_window_detection():
    # the paper-counterexample behavior: uniformity fails from radius 2 on,
    # with doubling constants recorded per distance
    with pytest.raises(ComparisonNotUniform) as exc:
        build_combined(bs_window(2, 4))
    by_d = {}
    for (cid, v, d, K, C) in exc.value.table:
        by_d[d] = max(by_d.get(d, 0), K)
    for d in (2, 3, 4):
        assert by_d[d] >= 2 ** d / 2


def test_bs_window_radius_one_builds():
    c = build_combined(bs_window(2, 1))
    assert audit_axioms(c.model).ok


def test_combined_chain_audits():
    t = point_edge_tree([path_graph(0, 1), cycle3(), path_graph(0, 1)])
    c = build_combined(t)
    assert c.decorated
    assert len(c.classes) == 1
    rep = audit_combined(c)
    assert rep.ok, rep.summary()


def cycle3():
    return FiniteSpace(["x", "y", "z"], [("x", "y"), ("y", "z"), ("x", "z")])


def test_combined_container_identities():
    t = point_edge_tree([path_graph(0, 1), cycle3()])
    c = build_combined(t)
    lat = c.model.lattice
    for cls in c.classes:
        sid = c.support_of[cls.id]
        assert lat.top_container(cls.id) == sid
        assert lat.top_container(sid) == cls.id
        assert lat.orthogonal(cls.id, sid)


def test_combined_wedge_table_clean():
    t = point_edge_tree([path_graph(0, 1), cycle3()])
    c = build_combined(t)
    wedges, joins, rep = combined_wedge_table(c)
    assert rep.ok
    from hhspace.lattice import EMPTY
    cls = c.classes[0].id
    sid = c.support_of[cls]
    assert wedges[(cls, sid)] is EMPTY          # orthogonal pair
    assert wedges[(cls, THAT)] == cls
    assert joins[(cls, sid)] == THAT


def test_hypothesis_screen_rejects_non_full():
    # a two-element vertex lattice with a point edge model cannot be full
    grid_model = _two_element_model()
    pm = trivial_model(single_point("e"), elt="SE")
    other = trivial_model(path_graph(0, 1), elt="S", name="o")
    e = ("a", "b")

    def attach(target, maximal, point):
        hyp_pt = next(iter(target.hyp[maximal].vertices))
        return Embedding(
            pm, target,
            CoarseMap.constant(pm.space, target.space, [point]),
            IndexMap(pm.lattice, target.lattice, {"SE": maximal}),
            {"SE": CoarseMap.constant(pm.hyp["SE"], target.hyp[maximal],
                                      [hyp_pt])})

    t = TreeOfHHS(["a", "b"], [e], {"a": grid_model, "b": other},
                  {e: pm},
                  {(e, "a"): attach(grid_model, grid_model.lattice.maximal,
                                    grid_model.space.vertices[0]),
                   (e, "b"): attach(other, "S", 0)})
    with pytest.raises(HypothesisFailure):
        build_combined(t)


def _two_element_model():
    from hhspace.fixtures import grid_product
    return grid_product(3, 3)


def test_decorate_base_case_unchanged():
    t = point_edge_tree([path_graph(0, 1), path_graph(0, 2)])
    td = decorate(t)
    assert td.vertices == t.vertices


def test_decorate_product_vertex_adds_leaves():
    from hhspace.fixtures import grid_product
    m = grid_product(3, 3)
    t = TreeOfHHS(["v"], [], {"v": m}, {}, {}, name="single")
    td = decorate(t, copy_cap=2)
    assert len(td.vertices) > 1
    leaves = [v for v in td.vertices if v != "v"]
    assert all(td.vertex_models[l].lattice.complexity()
               < m.lattice.complexity() for l in leaves
               if l[1] == "v")
    c = build_combined(td)
    assert c.decorated
    rep = audit_combined(c)
    assert rep.ok, rep.summary()


def test_single_vertex_tree_combines_to_vertex_structure():
    m = trivial_model(path_graph(0, 5), elt="S", name="seg")
    t = TreeOfHHS(["v"], [], {"v": m}, {}, {}, name="one")
    c = build_combined(t)
    cls = c.classes[0].id
    sid = c.support_of[cls]
    assert set(c.model.lattice.elements) == {cls, sid, THAT}
    assert audit_combined(c).ok


def test_undecorated_shared_support_fails_when_demanded():
    from hhspace.fixtures import grid_product
    m = grid_product(3, 3)
    t = TreeOfHHS(["v"], [], {"v": m}, {}, {}, name="single")
    c = build_combined(t)        # no decoration: five classes on one support
    assert not c.decorated
    relaxed = audit_combined(c)                              # no-decorate mode
    assert relaxed.entry("support-laws").ok
    strict = audit_combined(c, require_decorated=True)
    entry = strict.entry("support-laws")
    assert not entry.ok
    assert any(v.rule in ("distinct-supports", "support-inclusion-nesting")
               for v in entry.witnesses)


def test_combined_distance_formula_finite():
    from hhspace.fixtures import free_product_z2_z3
    from hhspace.model import distance_formula_fit
    c = free_product_z2_z3(2).combined
    fit = distance_formula_fit(c.model, 1)
    assert fit.K < 20 and fit.C < 20


def test_raag_b_factor_class_supported_at_center_only():
    from hhspace.fixtures import raag_path
    res = raag_path(2)
    c = res.combined
    b_cls = [cls for cls in c.classes
             if cls.rep_at.get(("Q",)) == ("r", "S")]
    assert len(b_cls) == 1
    originals = {v for v in b_cls[0].support
                 if not (isinstance(v, tuple) and v and v[0] == "deco")}
    assert originals == {("Q",)}
