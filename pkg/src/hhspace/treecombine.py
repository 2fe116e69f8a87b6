"""Combining trees of models into one structure.

A TreeOfHHS carries a model on every vertex and edge of a finite tree,
with an embedding from each edge model into both endpoint models. Index
elements of different vertices are identified when an edge element maps
onto both; the identification classes, their supports (subtrees), the
comparison maps between representatives, and the combined index set

    classes  |  support trees  |  one top element

are built here, together with all projections and relative projections,
so the result is an ordinary HHSModel that the generic auditor can
process. Support trees are ordered by inclusion; a class is orthogonal to
its own support tree, nested in the supports of everything orthogonal to
it, and transverse to the rest. Hyperbolic models for supports and for
the top are the corresponding trees with every properly contained
support coned off.

The two hypothesis failures of the combination are first-class errors:
edge maps that are not full/quasiconvex/finite-lipschitz raise
HypothesisFailure, and comparison maps exceeding the declared uniformity
bound raise ComparisonNotUniform carrying the measured table (this is
what detects the exponential-distortion counterexample windows).
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedding, verify_embedding
from .indexmaps import IndexMap
from .lattice import IndexLattice, ValidationReport
from .model import (AxiomEntry, HHSModel, audit_axioms, hq_check,
                    product_region)
from .spaces import (CoarseMap, FiniteSpace, cone_off, coarse_map_constants,
                     qi_constants, sorted_vertices, vkey)


class HypothesisFailure(Exception):
    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__("%s (witness: %r)" % (reason, witness))


class ComparisonNotUniform(Exception):
    """Some comparison map exceeds the declared uniformity bound. Carries
    the full measured table [(class id, vertex, tree distance, K, C), ...]
    and the offending rows."""

    def __init__(self, bound, table, offenders):
        self.bound = bound
        self.table = table
        self.offenders = offenders
        super().__init__(
            "comparison maps exceed the declared bound %s: worst %r"
            % (bound, max(offenders, key=lambda r: r[3])))


class NotInSupport(Exception):
    pass


class TreeOfHHS:
    """tree vertices/edges with models and edge embeddings.

    edge_maps is keyed by (edge, endpoint) where edge is a sorted vertex
    pair; each value embeds the edge model into the endpoint vertex model.
    """

    def __init__(self, vertices, edges, vertex_models, edge_models, edge_maps,
                 name=""):
        self.name = name
        self.vertices = sorted_vertices(vertices)
        self.edges = tuple(sorted((tuple(sorted(e, key=vkey)) for e in edges),
                                  key=lambda e: (vkey(e[0]), vkey(e[1]))))
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("not a tree: %d vertices, %d edges"
                             % (len(self.vertices), len(self.edges)))
        self.adj = {v: [] for v in self.vertices}
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        for v in self.adj:
            self.adj[v].sort(key=vkey)
        self.vertex_models = dict(vertex_models)
        self.edge_models = dict(edge_models)
        self.edge_maps = dict(edge_maps)
        self.space = FiniteSpace(self.vertices, self.edges, name=name + "|T")

    def path(self, u, v):
        """The unique geodesic vertex sequence from u to v."""
        if u == v:
            return (u,)
        prev = {u: None}
        q = deque([u])
        while q:
            x = q.popleft()
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    if y == v:
                        out = [v]
                        while prev[out[-1]] is not None:
                            out.append(prev[out[-1]])
                        return tuple(reversed(out))
                    q.append(y)
        raise KeyError((u, v))

    def edge_key(self, a, b):
        return tuple(sorted((a, b), key=vkey))

    def closest_vertex(self, v, subtree):
        sub = sorted(subtree, key=vkey)
        return min(sub, key=lambda w: (self.space.d(v, w), vkey(w)))

    def entry_edge(self, v, subtree):
        """Last edge of the geodesic from v into the subtree: (outside, inside)."""
        w = self.closest_vertex(v, subtree)
        if w == v:
            raise NotInSupport(v)
        p = self.path(v, w)
        return (p[-2], p[-1])

    def bridge(self, sub1, sub2):
        """Closest pair of vertices between two disjoint subtrees."""
        best = None
        for a in sorted(sub1, key=vkey):
            b = self.closest_vertex(a, sub2)
            d = self.space.d(a, b)
            if best is None or d < best[0]:
                best = (d, a, b)
        return best[1], best[2]


@dataclass
class EquivClass:
    id: tuple
    members: frozenset          # of (vertex, element) pairs
    support: frozenset          # vertices
    rep_at: dict                # vertex -> element
    favorite_vertex: object
    favorite_rep: object

    def __repr__(self):
        return "EquivClass(%r @%r, support=%d)" % (
            self.favorite_rep, self.favorite_vertex, len(self.support))


def equivalence_classes(t):
    """Union-find closure of the edge identifications of index elements."""
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if vkey(ry) < vkey(rx):
                rx, ry = ry, rx
            parent[ry] = rx

    for v in t.vertices:
        for U in t.vertex_models[v].elements:
            parent.setdefault((v, U), (v, U))
    for e in t.edges:
        em = t.edge_models[e]
        ma, mb = t.edge_maps[(e, e[0])], t.edge_maps[(e, e[1])]
        for E in em.elements:
            union((e[0], ma.index_map(E)), (e[1], mb.index_map(E)))

    groups = {}
    for node in parent:
        groups.setdefault(find(node), []).append(node)
    out = []
    for root, members in sorted(groups.items(), key=lambda kv: vkey(kv[0])):
        rep_at = {}
        for (v, U) in members:
            if v in rep_at and rep_at[v] != U:
                raise HypothesisFailure("two equivalent elements in one vertex",
                                        (v, rep_at[v], U))
            rep_at[v] = U
        support = frozenset(rep_at)
        _check_connected(t, support)
        # favorites prefer original tree vertices: decoration leaves carry
        # restricted lattices whose containers undershoot the ambient ones
        fav = min(support, key=lambda v: (_deco_depth(v), vkey(v)))
        out.append(EquivClass(("c", fav, rep_at[fav]), frozenset(members),
                              support, rep_at, fav, rep_at[fav]))
    out.sort(key=lambda c: vkey(c.id))
    return out


def _deco_depth(v):
    d = 0
    while isinstance(v, tuple) and len(v) == 4 and v[0] == "deco":
        d += 1
        v = v[1]
    return d


def _check_connected(t, support):
    sub = set(support)
    start = next(iter(sub))
    seen = {start}
    q = deque([start])
    while q:
        x = q.popleft()
        for y in t.adj[x]:
            if y in sub and y not in seen:
                seen.add(y)
                q.append(y)
    if seen != sub:
        raise HypothesisFailure("class support is not connected", tuple(sorted(sub, key=vkey)))


# -- decoration ----------------------------------------------------------------


def decorate(t, copy_cap=2):
    """Attach product-region leaves until every vertex model has complexity
    one, so distinct classes end up with distinct supports.

    For each vertex, each nesting-maximal non-top element U, and each
    parallel copy of the U-region (capped at copy_cap distinct copies), a
    leaf carrying the copy with the index set below U is added; the leaf
    recursion strictly drops complexity, so it terminates."""
    vertices = list(t.vertices)
    edges = list(t.edges)
    vertex_models = dict(t.vertex_models)
    edge_models = dict(t.edge_models)
    edge_maps = dict(t.edge_maps)
    queue = deque(t.vertices)
    while queue:
        v = queue.popleft()
        model = vertex_models[v]
        lat = model.lattice
        if lat.complexity() <= 1:
            continue
        xi, k0 = model.basics()
        cap = max(xi, k0)
        tops = [U for U in lat.elements if U != lat.maximal
                and not any(lat.properly_nested(U, W) and W != lat.maximal
                            for W in lat.elements)]
        for U in sorted(tops, key=vkey):
            region = _thinnest_region(model, U, cap)
            for k, (anchor, copyset) in enumerate(region.copies[:copy_cap]):
                leaf = ("deco", v, U, k)
                leaf_model = _restricted_model(model, U, copyset,
                                               name="%s|%s#%d" % (v, U, k))
                vertices.append(leaf)
                e = tuple(sorted((v, leaf), key=vkey))
                edges.append(e)
                vertex_models[leaf] = leaf_model
                edge_models[e] = leaf_model
                edge_maps[(e, leaf)] = Embedding.identity(leaf_model)
                edge_maps[(e, v)] = _inclusion_embedding(leaf_model, model)
                queue.append(leaf)
    return TreeOfHHS(vertices, edges, vertex_models, edge_models, edge_maps,
                     name=t.name + "~")


def _thinnest_region(model, U, cap):
    """Product region at the smallest tolerance with a nonempty core; thin
    copies keep the restricted structures hierarchically quasiconvex."""
    kappa = 0
    while kappa <= cap:
        region = product_region(model, U, kappa)
        if region.F:
            return region
        kappa += 1
    return product_region(model, U, cap)


def _restricted_model(model, U, copyset, name=""):
    keep = model.lattice.below(U)
    lat = model.lattice.restrict(keep, maximal=U, name=name)
    sub = model.space.subspace(copyset, name=name)
    hyp = {W: model.hyp[W] for W in keep}
    proj = {W: CoarseMap(sub, model.hyp[W],
                         {x: model.proj[W](x) for x in sub.vertices},
                         name="pi:%s" % (W,)) for W in keep}
    rset = {k: v for k, v in model.rho_set.items()
            if k[0] in keep and k[1] in keep}
    rmap = {k: v for k, v in model.rho_map.items()
            if k[0] in keep and k[1] in keep}
    return HHSModel(sub, lat, hyp, proj, rset, rmap, name=name)


def _inclusion_embedding(sub, ambient, name="incl"):
    space_map = CoarseMap.single(sub.space, ambient.space, lambda x: x, name=name)
    index_map = IndexMap(sub.lattice, ambient.lattice,
                         {U: U for U in sub.elements}, name=name)
    hyp_maps = {U: CoarseMap.identity(sub.hyp[U]) for U in sub.elements}
    return Embedding(sub, ambient, space_map, index_map, hyp_maps, name=name)


# -- comparison maps -----------------------------------------------------------


def edge_element(t, e, endpoint, vertex_elt):
    emb = t.edge_maps[(e, endpoint)]
    for E in emb.source.elements:
        if emb.index_map(E) == vertex_elt:
            return E
    return None


def comparison_map(t, cls, u, v, _cache=None):
    """Composition of edge-map quasi-inverses and edge maps along the
    geodesic from u to v; quasi-inverses pick the closest preimage with the
    vertex order breaking ties. Returns (map, K, C) with measured
    quasi-isometry constants."""
    if u not in cls.support or v not in cls.support:
        raise NotInSupport((cls.id, u, v))
    here = cls.rep_at[u]
    model = t.vertex_models[u]
    out = CoarseMap.identity(model.hyp[here])
    path = t.path(u, v)
    for a, b in zip(path, path[1:]):
        e = t.edge_key(a, b)
        E = edge_element(t, e, a, cls.rep_at[a])
        if E is None:
            raise HypothesisFailure("support edge carries no identification",
                                    (cls.id, e))
        back = _cached_qinv(t, e, a, E, _cache)
        fwd = t.edge_maps[(e, b)].hyp_maps[E]
        out = out.compose(back).compose(fwd)
    K, C = qi_constants(out)
    return out, K, C


def _cached_qinv(t, e, endpoint, E, cache):
    key = (e, endpoint, E)
    if cache is None:
        return t.edge_maps[(e, endpoint)].hyp_maps[E].quasi_inverse()
    if key not in cache:
        cache[key] = t.edge_maps[(e, endpoint)].hyp_maps[E].quasi_inverse()
    return cache[key]


# -- the combined structure ------------------------------------------------------


THAT = ("That",)


@dataclass
class ConedTree:
    base: frozenset
    cones: dict       # label -> coned vertex set
    space: FiniteSpace


@dataclass
class CombinedStructure:
    tree: TreeOfHHS
    model: HHSModel
    classes: list
    class_of: dict            # class id -> EquivClass
    supports: dict            # support id -> frozenset of tree vertices
    support_of: dict          # class id -> support id
    coned: dict               # support id / THAT -> ConedTree
    comparison_table: list    # (class id, vertex, distance, K, C)
    comparison_maps: dict     # (class id, vertex) -> map into the favorite model
    comparison_bound: float
    decorated: bool
    warnings: list = field(default_factory=list)

    @property
    def that(self):
        return THAT

    def class_elements(self):
        return [c.id for c in self.classes]

    def support_elements(self):
        return sorted(self.supports, key=vkey)


def check_hypotheses(t, hq_threshold=None):
    """Theorem-hypothesis screen for every edge embedding: relation/fullness
    checks, hierarchically quasiconvex image, finite lipschitz constants."""
    worst_lip = 0.0
    for e in t.edges:
        for endpoint in e:
            emb = t.edge_maps[(e, endpoint)]
            rep = verify_embedding(emb)
            if not rep.ok:
                raise HypothesisFailure("edge map fails structure checks",
                                        (e, endpoint, rep.violations[:3]))
            hq = hq_check(t.vertex_models[endpoint], emb.image(),
                          threshold=hq_threshold)
            if not hq.passed:
                raise HypothesisFailure("edge image not hierarchically quasiconvex",
                                        (e, endpoint, hq.k0, hq.table))
            K, C = coarse_map_constants(emb.space_map)
            worst_lip = max(worst_lip, K, C)
    return worst_lip


def tree_epsilon(t):
    """One support threshold for the whole tree, from the uniform measured
    constants of all vertex and edge models (window comparison slop must
    not masquerade as a bounded coordinate)."""
    from .model import measure_alpha
    worst = 0.0
    for m in list(t.vertex_models.values()) + list(t.edge_models.values()):
        xi, _ = m.basics()
        worst = max(worst, xi, measure_alpha(m))
    return 3.0 * worst + 1.0


def concretize_edges(t, eps=None):
    """Restrict every edge model (and its two embeddings) to the join of its
    supports at the tree-wide threshold; identifications then run over
    concrete edge elements only. Decoration edges are exempt: they are
    built in place as product-region inclusions and deliberately carry the
    container identifications that a concreteness reduction would drop."""
    from .model import concretize
    if eps is None:
        eps = tree_epsilon(t)
    edge_models = dict(t.edge_models)
    edge_maps = dict(t.edge_maps)
    changed_any = False
    for e in t.edges:
        if any(_deco_depth(v) for v in e):
            continue
        res = concretize(t.edge_models[e], eps=eps)
        if not res.changed:
            continue
        changed_any = True
        edge_models[e] = res.model
        for endpoint in e:
            emb = t.edge_maps[(e, endpoint)]
            keep = res.model.elements
            edge_maps[(e, endpoint)] = Embedding(
                res.model, emb.target, emb.space_map,
                IndexMap(res.model.lattice, emb.target.lattice,
                         {U: emb.index_map(U) for U in keep}, name=emb.index_map.name),
                {U: emb.hyp_maps[U] for U in keep}, name=emb.name)
    if not changed_any:
        return t
    return TreeOfHHS(t.vertices, t.edges, t.vertex_models, edge_models,
                     edge_maps, name=t.name)


def build_combined(t, comparison_bound=2.0, hq_threshold=None,
                   skip_hypotheses=False):
    """Run the whole combination: hypothesis screen, edge concretization,
    classes and supports, comparison maps (uniformity enforced), the glued
    space, the combined lattice and all projection data."""
    if not skip_hypotheses:
        check_hypotheses(t, hq_threshold=hq_threshold)
    t = concretize_edges(t)
    classes = equivalence_classes(t)
    warnings = []

    qinv_cache = {}
    comp_maps = {}       # (cls id, vertex) -> map into the favorite model
    table = []
    offenders = []
    for cls in classes:
        for v in sorted(cls.support, key=vkey):
            m, K, C = comparison_map(t, cls, v, cls.favorite_vertex,
                                     _cache=qinv_cache)
            comp_maps[(cls.id, v)] = m
            d = len(t.path(v, cls.favorite_vertex)) - 1
            table.append((cls.id, v, d, K, C))
            if K > comparison_bound:
                offenders.append((cls.id, v, d, K, C))
    if offenders:
        raise ComparisonNotUniform(comparison_bound, table, offenders)

    # supports, deduplicated by vertex set
    support_sets = []
    seen = {}
    for cls in classes:
        if cls.support not in seen:
            seen[cls.support] = len(support_sets)
            support_sets.append(cls.support)
    order = sorted(range(len(support_sets)),
                   key=lambda i: tuple(sorted(map(vkey, support_sets[i]))))
    sup_id = {}
    supports = {}
    for rank, i in enumerate(order):
        sid = ("T", rank)
        sup_id[support_sets[i]] = sid
        supports[sid] = support_sets[i]
    support_of = {cls.id: sup_id[cls.support] for cls in classes}
    owners = {}
    for cls in classes:
        owners.setdefault(sup_id[cls.support], []).append(cls)
    for sid, owner in owners.items():
        if len(owner) > 1:
            warnings.append("support %r shared by %d classes (tree not decorated)"
                            % (sid, len(owner)))
    decorated = all(len(o) == 1 for o in owners.values())

    builder = _CombinedBuilder(t, classes, supports, support_of, owners,
                               comp_maps, warnings)
    model = builder.build()
    return CombinedStructure(
        tree=t, model=model, classes=classes,
        class_of={c.id: c for c in classes}, supports=supports,
        support_of=support_of, coned=builder.coned,
        comparison_table=table, comparison_maps=comp_maps,
        comparison_bound=comparison_bound,
        decorated=decorated, warnings=warnings)


class _CombinedBuilder:
    def __init__(self, t, classes, supports, support_of, owners, comp_maps,
                 warnings):
        self.t = t
        self.classes = classes
        self.class_of = {c.id: c for c in classes}
        self.supports = supports
        self.support_of = support_of
        self.owners = owners
        self.comp = comp_maps
        self.warnings = warnings
        self.coned = {}

    # ---- helpers

    def rel_classes(self, c1, c2):
        """nested / orth / trans between two classes via common-vertex reps."""
        lat_rel = None
        commons = sorted(c1.support & c2.support, key=vkey)
        for v in commons:
            lat = self.t.vertex_models[v].lattice
            r = lat.rel(c1.rep_at[v], c2.rep_at[v])
            if lat_rel is None:
                lat_rel = r
            elif lat_rel != r:
                self.warnings.append("inconsistent relation of %r, %r at %r"
                                     % (c1.id, c2.id, v))
            if r == "nested":
                return ("nested", v, lat.nested(c1.rep_at[v], c2.rep_at[v]))
        if lat_rel == "orth":
            return ("orth", commons[0], None)
        if lat_rel is not None:
            return ("trans", commons[0], None)
        return ("trans", None, None)

    def class_marker(self, src, dst):
        """The bounded marker of class src inside the favorite model of dst,
        for src properly nested in dst or transverse to it."""
        t = self.t
        commons = sorted(src.support & dst.support, key=vkey)
        if commons:
            v = None
            for w in commons:
                lat = t.vertex_models[w].lattice
                if lat.rel(src.rep_at[w], dst.rep_at[w]) != "orth":
                    v = w
                    break
            if v is None:
                raise HypothesisFailure("marker requested for orthogonal classes",
                                        (src.id, dst.id))
            vm = t.vertex_models[v]
            marker = vm.rho_set[(src.rep_at[v], dst.rep_at[v])]
            return self.comp[(dst.id, v)].image_of_set(marker)
        # disjoint supports: the image of the edge space across the last
        # bridge edge, projected and compared into the favorite model
        return self.entry_value(dst, self._last_edge_towards(src, dst))

    def _last_edge_towards(self, src, dst):
        """Last edge of the geodesic from src's support into dst's support."""
        a, b = self.t.bridge(src.support, dst.support)
        p = self.t.path(a, b)
        return (p[-2], p[-1])

    def entry_value(self, cls, edge):
        """Projection of the edge space into the class, through the inside
        endpoint of the given (outside, inside) edge."""
        w, v = edge
        e = self.t.edge_key(w, v)
        emb = self.t.edge_maps[(e, v)]
        rep = cls.rep_at[v]
        img = self.t.vertex_models[v].proj[rep].image_of_set(emb.image())
        return self.comp[(cls.id, v)].image_of_set(img)

    def base_marker(self, cls):
        vm = self.t.vertex_models[cls.favorite_vertex]
        return vm.proj[cls.favorite_rep](vm.space.vertices[0])

    def proj_value(self, cls, v):
        """pi_[cls] of any point living over tree vertex v (outside the
        support this is a single bounded set per entry edge)."""
        if v in cls.support:
            return None
        return self.entry_value(cls, self.t.entry_edge(v, cls.support))

    # ---- the build

    def build(self):
        t = self.t
        # glued space
        verts = []
        edges = []
        for v in t.vertices:
            m = t.vertex_models[v]
            verts.extend((v, p) for p in m.space.vertices)
            for (ia, ib) in m.space.edges or ():
                edges.append(((v, m.space.vertices[ia]), (v, m.space.vertices[ib])))
        for e in t.edges:
            ma, mb = t.edge_maps[(e, e[0])], t.edge_maps[(e, e[1])]
            for x in t.edge_models[e].space.vertices:
                pa = sorted(ma.space_map(x), key=vkey)[0]
                pb = sorted(mb.space_map(x), key=vkey)[0]
                edges.append(((e[0], pa), (e[1], pb)))
        X = FiniteSpace(verts, edges, name=t.name + "|X")

        cls_ids = [c.id for c in self.classes]
        sup_ids = sorted(self.supports, key=vkey)
        elements = cls_ids + sup_ids + [THAT]

        nested, orth = [], []
        rels = {}
        for i, c1 in enumerate(self.classes):
            for c2 in self.classes[i + 1:]:
                r, v, oriented = self.rel_classes(c1, c2)
                rels[(c1.id, c2.id)] = r
                if r == "nested":
                    if oriented:
                        nested.append((c1.id, c2.id))
                    else:
                        nested.append((c2.id, c1.id))
                elif r == "orth":
                    orth.append((c1.id, c2.id))
        for s1 in sup_ids:
            for s2 in sup_ids:
                if s1 != s2 and self.supports[s1] < self.supports[s2]:
                    nested.append((s1, s2))
        for cls in self.classes:
            for sid in sup_ids:
                owner = self.owners[sid][0]
                if any(cls.id == o.id for o in self.owners[sid]):
                    orth.append((cls.id, sid))
                    continue
                r = rels.get((cls.id, owner.id)) or rels.get((owner.id, cls.id))
                if r == "nested":
                    # orthogonal when cls is nested in the owner; the owner
                    # nested in cls falls to the transverse default
                    if self._nested_in(cls, owner):
                        orth.append((cls.id, sid))
                elif r == "orth":
                    nested.append((cls.id, sid))
        for e in elements:
            if e != THAT:
                nested.append((e, THAT))
        lattice = IndexLattice(elements, THAT, nested, orth, name=t.name + "|S")

        # hyperbolic models
        hyp = {}
        for cls in self.classes:
            hyp[cls.id] = t.vertex_models[cls.favorite_vertex].hyp[cls.favorite_rep]
        proper = {sid: [s2 for s2 in sup_ids
                        if self.supports[s2] < self.supports[sid]]
                  for sid in sup_ids}
        for sid in sup_ids:
            sub = t.space.subspace(self.supports[sid])
            base_edges = [(a, b) for (a, b) in t.edges
                          if a in self.supports[sid] and b in self.supports[sid]]
            graph = FiniteSpace(self.supports[sid], base_edges)
            cones = {s2: frozenset(self.supports[s2]) for s2 in proper[sid]}
            coned = cone_off(graph, cones, name="%r^" % (sid,))
            self.coned[sid] = ConedTree(frozenset(self.supports[sid]), cones, coned)
            hyp[sid] = coned
        all_cones = {sid: frozenset(self.supports[sid]) for sid in sup_ids}
        that_coned = cone_off(t.space, all_cones, name="That")
        self.coned[THAT] = ConedTree(frozenset(t.vertices), all_cones, that_coned)
        hyp[THAT] = that_coned

        # projections
        proj = {}
        vertex_of = {x: x[0] for x in X.vertices}
        proj[THAT] = CoarseMap.single(X, that_coned, lambda x: x[0], name="pi:That")
        for sid in sup_ids:
            sup = self.supports[sid]
            closest = {v: self.t.closest_vertex(v, sup) for v in t.vertices}
            proj[sid] = CoarseMap.single(X, hyp[sid],
                                         lambda x, c=closest: c[x[0]],
                                         name="pi:%r" % (sid,))
        for cls in self.classes:
            imgs = {}
            outside = {}
            for x in X.vertices:
                v = x[0]
                if v in cls.support:
                    vm = t.vertex_models[v]
                    val = self.comp[(cls.id, v)].image_of_set(
                        vm.proj[cls.rep_at[v]](x[1]))
                else:
                    if v not in outside:
                        outside[v] = self.proj_value(cls, v)
                    val = outside[v]
                imgs[x] = val
            proj[cls.id] = CoarseMap(X, hyp[cls.id], imgs, name="pi:%r" % (cls.id,))

        # relative projections
        rho_set, rho_map = {}, {}
        self._rho_classes(lattice, hyp, rho_set, rho_map)
        self._rho_supports(lattice, hyp, rho_set, rho_map, sup_ids, proper)
        self._rho_cross(lattice, hyp, rho_set, rho_map, sup_ids)
        self._rho_that(lattice, hyp, rho_set, rho_map, sup_ids, proj)

        return HHSModel(X, lattice, hyp, proj, rho_set, rho_map,
                        name=t.name + "|combined")

    def _nested_in(self, c1, c2):
        commons = c1.support & c2.support
        for v in sorted(commons, key=vkey):
            lat = self.t.vertex_models[v].lattice
            if lat.rel(c1.rep_at[v], c2.rep_at[v]) == "nested":
                return lat.nested(c1.rep_at[v], c2.rep_at[v])
        return False

    def _class_rho_map(self, small, big, v):
        """rho map C[big] -> C[small] through a common vertex v with nested
        representatives: comparison back to v, the vertex-level map, then
        comparison to small's favorite."""
        t = self.t
        vm = t.vertex_models[v]
        back = self.comp[(big.id, v)].quasi_inverse()
        down = vm.rho_map[(small.rep_at[v], big.rep_at[v])]
        fwd = self.comp[(small.id, v)]
        return back.compose(down).compose(fwd)

    def _rho_classes(self, lattice, hyp, rho_set, rho_map):
        for i, c1 in enumerate(self.classes):
            for c2 in self.classes[i + 1:]:
                r = lattice.rel(c1.id, c2.id)
                if r == "orth":
                    continue
                if r == "nested":
                    small, big = (c1, c2) if lattice.properly_nested(c1.id, c2.id) \
                        else (c2, c1)
                    v = self._nested_vertex(small, big)
                    rho_set[(small.id, big.id)] = self.class_marker(small, big)
                    rho_map[(small.id, big.id)] = self._class_rho_map(small, big, v)
                else:
                    rho_set[(c1.id, c2.id)] = self.class_marker(c1, c2)
                    rho_set[(c2.id, c1.id)] = self.class_marker(c2, c1)

    def _nested_vertex(self, small, big):
        for v in sorted(small.support & big.support, key=vkey):
            lat = self.t.vertex_models[v].lattice
            if lat.rel(small.rep_at[v], big.rep_at[v]) == "nested":
                return v
        raise HypothesisFailure("no vertex witnesses the nesting",
                                (small.id, big.id))

    def _support_point_map(self, from_sid, to_set, to_space):
        """Closest-point projection between support trees, cone points going
        through the least vertex of their coned subtree."""
        src = self.coned[from_sid].space

        def value(p):
            if isinstance(p, tuple) and len(p) == 2 and p[0] == "cone":
                base = min(self.supports[p[1]], key=vkey) if p[1] in self.supports \
                    else min(self.coned[from_sid].cones[p[1]], key=vkey)
                p = base
            return self.t.closest_vertex(p, to_set)

        return CoarseMap.single(src, to_space, value)

    def _rho_supports(self, lattice, hyp, rho_set, rho_map, sup_ids, proper):
        for s1 in sup_ids:
            for s2 in sup_ids:
                if s1 == s2:
                    continue
                r = lattice.rel(s1, s2)
                if r == "nested" and lattice.properly_nested(s1, s2):
                    rho_set[(s1, s2)] = frozenset(self.supports[s1])
                    rho_map[(s1, s2)] = self._support_point_map(
                        s2, self.supports[s1], hyp[s1])
                elif r == "trans" and vkey(s1) < vkey(s2):
                    inter = self.supports[s1] & self.supports[s2]
                    if inter:
                        rho_set[(s1, s2)] = frozenset(inter)
                        rho_set[(s2, s1)] = frozenset(inter)
                    else:
                        a, b = self.t.bridge(self.supports[s1], self.supports[s2])
                        rho_set[(s1, s2)] = frozenset([self.t.closest_vertex(
                            a, self.supports[s2])])
                        rho_set[(s2, s1)] = frozenset([self.t.closest_vertex(
                            b, self.supports[s1])])

    def _rho_cross(self, lattice, hyp, rho_set, rho_map, sup_ids):
        for cls in self.classes:
            for sid in sup_ids:
                r = lattice.rel(cls.id, sid)
                sup = self.supports[sid]
                if r == "orth":
                    continue
                if r == "nested":
                    # cls nested in the support (it is orthogonal to the owner)
                    inter = sup & cls.support
                    rho_set[(cls.id, sid)] = frozenset(inter)
                    rho_map[(cls.id, sid)] = self._support_to_class_map(cls, sid)
                else:
                    inter = sup & cls.support
                    if inter:
                        rho_set[(cls.id, sid)] = frozenset(inter)
                    else:
                        a, b = self.t.bridge(cls.support, sup)
                        rho_set[(cls.id, sid)] = frozenset(
                            [self.t.closest_vertex(a, sup)])
                    owner = self.owners[sid][0]
                    rho_set[(sid, cls.id)] = self.class_marker(owner, cls)

    def _support_to_class_map(self, cls, sid):
        src = self.coned[sid].space
        fallback = self.base_marker(cls)
        fav_id = self.comp[(cls.id, cls.favorite_vertex)]
        r0 = fav_id.image_of_set(fallback)

        def value(p):
            if isinstance(p, tuple) and len(p) == 2 and p[0] == "cone":
                label = p[1]
                base = min(self.supports[label], key=vkey) if label in self.supports \
                    else min(self.coned[sid].cones[label], key=vkey)
                p = base
            if p in cls.support:
                return r0
            return self.entry_value(cls, self.t.entry_edge(p, cls.support))

        imgs = {p: value(p) for p in src.vertices}
        return CoarseMap(src, self.t.vertex_models[cls.favorite_vertex]
                         .hyp[cls.favorite_rep], imgs)

    def _rho_that(self, lattice, hyp, rho_set, rho_map, sup_ids, proj):
        that_space = self.coned[THAT].space
        for cls in self.classes:
            rho_set[(cls.id, THAT)] = frozenset(cls.support)
            rho_map[(cls.id, THAT)] = self._that_to_class_map(cls, that_space, hyp)
        for sid in sup_ids:
            rho_set[(sid, THAT)] = frozenset(self.supports[sid])
            rho_map[(sid, THAT)] = self._support_point_map(
                THAT, self.supports[sid], hyp[sid])

    def _that_to_class_map(self, cls, that_space, hyp):
        fallback = self.comp[(cls.id, cls.favorite_vertex)].image_of_set(
            self.base_marker(cls))

        def value(p):
            if isinstance(p, tuple) and len(p) == 2 and p[0] == "cone":
                p = min(self.supports[p[1]], key=vkey)
            if p in cls.support:
                return fallback
            return self.entry_value(cls, self.t.entry_edge(p, cls.support))

        imgs = {p: value(p) for p in that_space.vertices}
        return CoarseMap(that_space,
                         self.t.vertex_models[cls.favorite_vertex]
                         .hyp[cls.favorite_rep], imgs)


# -- combined-structure verification ------------------------------------------


def combined_wedge_table(c):
    """Wedges and containers of the combined lattice: the case formulas
    (through vertex-lattice wedges, orthogonal containers and support
    intersections) against brute-force maximal common lower bounds, the two
    container identities, and the support of a join class against the
    support intersection. Mismatches are report entries."""
    from .lattice import EMPTY, NotALattice

    lat = c.model.lattice
    rep = ValidationReport("combined-wedge:%s" % c.model.name)
    wedges, joins = {}, {}
    elements = lat.elements
    for i, x in enumerate(elements):
        for y in elements[i:]:
            try:
                wedges[(x, y)] = wedges[(y, x)] = lat.wedge(x, y)
            except NotALattice as exc:
                rep.add("wedge-not-unique", (x, y), str(exc))
            try:
                joins[(x, y)] = joins[(y, x)] = lat.join(x, y)
            except NotALattice as exc:
                rep.add("join-not-unique", (x, y), str(exc))
    if not rep.ok:
        return wedges, joins, rep

    def formula_class_class(c1, c2):
        commons = sorted(c1.support & c2.support, key=vkey)
        if commons:
            v = commons[0]
            vlat = c.tree.vertex_models[v].lattice
            try:
                w = vlat.wedge(c1.rep_at[v], c2.rep_at[v])
            except NotALattice:
                return None
            if w is EMPTY:
                return EMPTY
            return _class_id_of(c, v, w)
        return wedges[(c1.id, c2.id)]   # disjoint supports: no closed formula

    def container_class(cls):
        """The class of the vertex-level orthogonal container, evaluated at
        every support vertex; vertices with restricted lattices undershoot,
        so the nesting-maximal candidate is the meaningful one."""
        cands = []
        for v in sorted(cls.support, key=vkey):
            vlat = c.tree.vertex_models[v].lattice
            cont = vlat.top_container(cls.rep_at[v])
            if cont is None:
                continue
            cid = _class_id_of(c, v, cont)
            if cid is not None:
                cands.append(cid)
        if not cands:
            return None
        best = cands[0]
        for cand in cands[1:]:
            if lat.nested(best, cand):
                best = cand
            elif not lat.nested(cand, best):
                rep.add("container-candidates-incomparable", (cls.id, cand, best))
        return best

    for i, id1 in enumerate(elements):
        for id2 in elements[i:]:
            got = wedges[(id1, id2)]
            want = "skip"
            if id1 == THAT or id2 == THAT:
                want = id2 if id1 == THAT else id1
            elif id1 in c.class_of and id2 in c.class_of:
                want = formula_class_class(c.class_of[id1], c.class_of[id2])
            elif id1 in c.supports and id2 in c.supports:
                inter = c.supports[id1] & c.supports[id2]
                if inter:
                    want = _support_id_of(c, inter)
                    if want is None:
                        rep.add("support-intersection-missing", (id1, id2))
                        want = "skip"
                else:
                    k1 = container_class(c.class_of[_owner_of(c, id1)])
                    k2 = container_class(c.class_of[_owner_of(c, id2)])
                    want = (EMPTY if k1 is None or k2 is None
                            else wedges[(k1, k2)])
            else:
                cid, sid = (id1, id2) if id1 in c.class_of else (id2, id1)
                if lat.orthogonal(cid, sid):
                    want = EMPTY
                else:
                    k = container_class(c.class_of[_owner_of(c, sid)])
                    want = EMPTY if k is None else wedges[(cid, k)]
            if want != "skip":
                same = (got is EMPTY and want is EMPTY) or got == want
                if not same:
                    rep.add("wedge-formula-mismatch", (id1, id2),
                            "formula %r, brute force %r" % (want, got))

    for cls in c.classes:
        sid = c.support_of[cls.id]
        if lat.top_container(cls.id) != sid:
            rep.add("container-identity", (cls.id,),
                    "container of the class should be its support tree")
        if lat.top_container(sid) != cls.id and len(_owners_of(c, sid)) == 1:
            rep.add("container-identity", (sid,),
                    "container of the support tree should be its class")

    for i, c1 in enumerate(c.classes):
        for c2 in c.classes[i + 1:]:
            inter = c1.support & c2.support
            if not inter:
                continue
            j = joins[(c1.id, c2.id)]
            if j in c.class_of:
                if c.class_of[j].support != inter:
                    rep.add("join-support-identity", (c1.id, c2.id, j),
                            "support of the join class differs from the "
                            "support intersection")
            elif j != THAT:
                rep.add("join-support-identity", (c1.id, c2.id, j),
                        "join of classes is not a class")
    return wedges, joins, rep


def _class_id_of(c, vertex, elt):
    for cls in c.classes:
        if cls.rep_at.get(vertex) == elt:
            return cls.id
    return None


def _support_id_of(c, vertex_set):
    for sid, sup in c.supports.items():
        if sup == frozenset(vertex_set):
            return sid
    return None


def _owner_of(c, sid):
    return _owners_of(c, sid)[0].id


def _owners_of(c, sid):
    return [cls for cls in c.classes if cls.support == c.supports[sid]]


def audit_combined(c, large_links_threshold=4, require_decorated=None):
    """Generic nine-axiom audit of the combined model plus the
    combination-specific claims: the complexity bound, the support-count
    bound for large links over support elements, the support laws (with the
    decorated biconditional), exactness of far-side projections for
    transverse classes with disjoint supports, coning diameters, and the
    wedge/container cross-check.

    The support-discrimination laws are asserted when the structure is
    decorated; pass require_decorated=True to demand them regardless (an
    undecorated tree with two classes on one support then fails with a
    witness), or False to skip them."""
    rep = audit_axioms(c.model)
    lat = c.model.lattice

    chi = lat.complexity()
    cls_ids = set(c.class_of)
    chain1 = _longest_chain(lat, cls_ids)
    chi_v = max(t.lattice.complexity() for t in c.tree.vertex_models.values())
    ok = chi <= 2 * chain1 + 1 and chain1 <= chi_v + 1
    rep.entries.append(AxiomEntry(
        "combined-complexity", ok,
        {"complexity": chi, "class_complexity": chain1,
         "max_vertex_complexity": chi_v}))

    bad = _support_large_links(c, large_links_threshold)
    rep.entries.append(AxiomEntry(
        "large-links-support-count", not bad,
        {"threshold": large_links_threshold, "violations": len(bad)},
        bad[:8]))

    demand = c.decorated if require_decorated is None else require_decorated
    laws = _support_laws(c, demand)
    rep.entries.append(AxiomEntry(
        "support-laws", laws.ok, {"decorated": c.decorated},
        laws.violations[:8]))

    exact = _far_side_exactness(c)
    rep.entries.append(AxiomEntry(
        "far-side-projection-exactness", exact.ok, {}, exact.violations[:8]))

    cone_ok = True
    worst = 0
    for key, coned in c.coned.items():
        for label, sub in coned.cones.items():
            d = coned.space.diam_set(sub)
            worst = max(worst, d)
            if d > 2:
                cone_ok = False
    rep.entries.append(AxiomEntry("coning", cone_ok, {"max_coned_diam": worst}))

    rho_worst = 0
    for (a, b), S in c.model.rho_set.items():
        rho_worst = max(rho_worst, c.model.hyp[b].diam_set(S))
    rep.entries.append(AxiomEntry("rho-diameters", True,
                                  {"max_rho_diam": rho_worst}))

    _, _, wtab = combined_wedge_table(c)
    rep.entries.append(AxiomEntry("wedge-table", wtab.ok, {},
                                  wtab.violations[:8]))
    return rep


def _longest_chain(lat, subset):
    order = sorted(subset, key=lambda e: (len(lat.below(e) & subset), vkey(e)))
    longest = {}
    for e in order:
        longest[e] = 1 + max((longest[x] for x in lat.below(e) & subset
                              if x != e), default=0)
    return max(longest.values()) if longest else 0


def _support_large_links(c, threshold):
    """|maximal support elements with big pair distance| must be bounded by
    the pair's distance in the ambient support element; zero tolerance."""
    import numpy as np

    lat = c.model.lattice
    sup_ids = sorted(c.supports, key=vkey)
    bad = []
    n = len(c.model.space)
    for S in sup_ids + [THAT]:
        nested = [X for X in sup_ids if X != S and lat.properly_nested(X, S)]
        dS = c.model.pair_matrix(S)
        if not nested:
            continue
        bigs = {X: c.model.pair_matrix(X) > threshold for X in nested}
        count = np.zeros((n, n), dtype=np.int64)
        for X in nested:
            mask = bigs[X].copy()
            for X2 in nested:
                if X2 != X and lat.properly_nested(X, X2):
                    mask &= ~bigs[X2]
            count += mask
        viol = count > dS
        if viol.any():
            i, j = np.unravel_index(int(viol.argmax()), viol.shape)
            bad.append((S, c.model.space.vertices[i], c.model.space.vertices[j],
                        int(count[i, j]), int(dS[i, j])))
    return bad


def _support_laws(c, demand_discrimination):
    rep = ValidationReport("support-laws")
    lat = c.model.lattice
    for c1 in c.classes:
        for c2 in c.classes:
            if c1.id == c2.id:
                continue
            if lat.properly_nested(c1.id, c2.id):
                if not (c2.support <= c1.support):
                    rep.add("nesting-support-inclusion", (c1.id, c2.id))
            # nesting reverses support inclusion; decorated trees also give
            # the converse: contained support means the other class nests
            if demand_discrimination and (c2.support <= c1.support):
                if not lat.nested(c1.id, c2.id):
                    rep.add("support-inclusion-nesting", (c1.id, c2.id),
                            "reverse inclusion without nesting (decorated)")
    if demand_discrimination:
        seen = {}
        for cls in c.classes:
            if cls.support in seen:
                rep.add("distinct-supports", (seen[cls.support], cls.id))
            seen[cls.support] = cls.id
    return rep


def _far_side_exactness(c):
    """Transverse classes with disjoint supports: beyond the separating
    edge, the projection to the class equals the rho marker exactly."""
    rep = ValidationReport("far-side")
    lat = c.model.lattice
    for i, c1 in enumerate(c.classes):
        for c2 in c.classes[i + 1:]:
            if c1.support & c2.support:
                continue
            if not lat.transverse(c1.id, c2.id):
                continue
            for (src, dst) in ((c1, c2), (c2, c1)):
                rho = c.model.rho_set[(src.id, dst.id)]
                a, b = c.tree.bridge(src.support, dst.support)
                # vertices whose geodesic to dst's support passes the bridge
                for v in sorted(src.support, key=vkey):
                    for x in c.tree.vertex_models[v].space.vertices:
                        val = c.model.proj[dst.id]((v, x))
                        if val != rho:
                            rep.add("far-side-mismatch",
                                    (src.id, dst.id, v, x))
                            break
                    else:
                        continue
                    break
    return rep
