"""Direct products of models and the graph-product recursion.

The direct product of two models gets the standard combined index set:
both factor index sets side by side, one extra element per factor element
(the container of its orthogonal complement, a point model), and a top
element. Factor elements from different sides are orthogonal; an element
is nested under the container of anything it is orthogonal to, orthogonal
to the containers of everything above it, and transverse to the rest.

The recursion for a whole product graph lives in build(); complete graphs
fold into direct products, disconnected graphs into amalgams over the
trivial group, everything else splits along the link of a pivot vertex.
"""

from dataclasses import dataclass

from .embedding import Embedding
from .indexmaps import IndexMap
from .lattice import IndexLattice
from .model import HHSModel, trivial_model
from .spaces import CoarseMap, product_graph, single_point, vkey


def _l(u):
    return ("l", u)


def _r(u):
    return ("r", u)


TOP = ("S",)


def direct_product_structure(a, b, name=""):
    """Combined model of the product of two models, per the standard recipe.

    Lattice: tagged copies of both factor index sets, a container element
    ("V", e) per tagged factor element e, and the top. The container of a
    factor element houses everything orthogonal to it, which is everything
    on the other side plus its orthogonal partners on its own side.
    """
    name = name or "%sx%s" % (a.name or "a", b.name or "b")
    space = product_graph(a.space, b.space, name=name)

    sides = {}
    for U in a.elements:
        sides[_l(U)] = ("a", U)
    for U in b.elements:
        sides[_r(U)] = ("b", U)
    tagged = sorted(sides, key=vkey)
    elements = list(tagged) + [("V", e) for e in tagged] + [TOP]

    def factor(e):
        return sides[e][0]

    def orth_product(e, f):
        """Orthogonality between tagged factor elements."""
        if factor(e) != factor(f):
            return True
        lat = a.lattice if factor(e) == "a" else b.lattice
        return lat.orthogonal(sides[e][1], sides[f][1])

    def nested_product(e, f):
        if factor(e) != factor(f):
            return False
        lat = a.lattice if factor(e) == "a" else b.lattice
        return lat.nested(sides[e][1], sides[f][1])

    nested, orth = [], []
    for i, e in enumerate(tagged):
        for f in tagged[i + 1:]:
            if orth_product(e, f):
                orth.append((e, f))
    for e in tagged:
        nested.append((e, TOP))
        nested.append((("V", e), TOP))
        for f in tagged:
            if e != f and nested_product(e, f):
                nested.append((e, f))
            if orth_product(e, f):
                nested.append((e, ("V", f)))
            if nested_product(e, f):
                orth.append((e, ("V", f)))
            if e != f and nested_product(e, f):
                nested.append((("V", f), ("V", e)))
        orth.append((e, ("V", e)))
    lattice = IndexLattice(elements, TOP, nested, orth, name=name)

    hyp, proj = {}, {}
    for e in tagged:
        side, U = sides[e]
        m, pick = (a, 0) if side == "a" else (b, 1)
        hyp[e] = m.hyp[U]
        proj[e] = CoarseMap(space, m.hyp[U],
                            {v: m.proj[U](v[pick]) for v in space.vertices},
                            name="pi:%s" % (e,))
    for e in tagged:
        hyp[("V", e)] = single_point(("pt", "V", e))
        proj[("V", e)] = CoarseMap.constant(space, hyp[("V", e)], [("pt", "V", e)])
    hyp[TOP] = single_point(("pt",) + TOP)
    proj[TOP] = CoarseMap.constant(space, hyp[TOP], [("pt",) + TOP])

    base = space.vertices[0]
    rho_set, rho_map = {}, {}

    def base_marker(e):
        return proj[e](base)

    def const_map(w, v, value):
        return CoarseMap.constant(hyp[w], hyp[v], value, name="rho:%s<-%s" % (v, w))

    # inherited data within each factor (lifted verbatim; the hyperbolic
    # models are shared objects)
    for (m, tag) in ((a, _l), (b, _r)):
        for (x, y), S in m.rho_set.items():
            rho_set[(tag(x), tag(y))] = S
        for (x, y), mp in m.rho_map.items():
            rho_map[(tag(x), tag(y))] = mp

    point_of = {e: next(iter(hyp[("V", e)].vertices)) for e in tagged}
    top_point = next(iter(hyp[TOP].vertices))

    for e in tagged:
        # everything nested in the top gets a point marker there
        rho_set[(e, TOP)] = frozenset([top_point])
        rho_map[(e, TOP)] = const_map(TOP, e, base_marker(e))
        rho_set[(("V", e), TOP)] = frozenset([top_point])
        rho_map[(("V", e), TOP)] = const_map(TOP, ("V", e), [point_of[e]])
        for f in tagged:
            ve = ("V", f)
            r = lattice.rel(e, ve)
            if r == "nested":
                rho_set[(e, ve)] = frozenset([point_of[f]])
                rho_map[(e, ve)] = const_map(ve, e, base_marker(e))
            elif r == "trans":
                rho_set[(e, ve)] = frozenset([point_of[f]])
                rho_set[(ve, e)] = _complement_marker(
                    a, b, sides, rho_set, e, f, base_marker(e))
            if e != f and lattice.properly_nested(ve, ("V", e)):
                rho_set[(ve, ("V", e))] = frozenset([point_of[e]])
                rho_map[(ve, ("V", e))] = const_map(("V", e), ve, [point_of[f]])
            if e != f and lattice.transverse(("V", e), ve) and vkey(e) < vkey(f):
                rho_set[(("V", e), ve)] = frozenset([point_of[f]])
                rho_set[(ve, ("V", e))] = frozenset([point_of[e]])
    return HHSModel(space, lattice, hyp, proj, rho_set, rho_map, name=name)


def _complement_marker(a, b, sides, rho_set, e, f, fallback):
    """Marker of the container element ("V", f) inside the model of e, for
    transverse pairs. The container behaves like the orthogonal complement
    of f, so reuse the factor marker of that complement in e when it exists
    and is placed correctly; otherwise fall back to a base-point marker."""
    side, U = sides[e]
    m = a if side == "a" else b
    _, F = sides[f]
    cont = m.lattice.top_container(F)
    if cont is not None and cont != U:
        r = m.lattice.rel(cont, U)
        if (r == "nested" and m.lattice.properly_nested(cont, U)) or r == "trans":
            got = m.rho_set.get((cont, U))
            if got is not None:
                return got
    return frozenset(fallback)


def factor_embedding(product, factor_model, side, anchor=None, name=""):
    """Inclusion of one factor as a slice through an anchor point of the
    other factor (the base point by default); full, with isometric
    hyperbolic maps."""
    tag = _l if side == "l" else _r
    base = product.space.vertices[0]
    if side == "l":
        other = anchor if anchor is not None else base[1]
        fn = lambda x: (x, other)
    else:
        other = anchor if anchor is not None else base[0]
        fn = lambda x: (other, x)
    space_map = CoarseMap.single(factor_model.space, product.space, fn,
                                 name=name or "factor-" + side)
    index_map = IndexMap(factor_model.lattice, product.lattice,
                         {U: tag(U) for U in factor_model.elements},
                         name=name or "factor-" + side)
    hyp_maps = {U: CoarseMap.identity(factor_model.hyp[U])
                for U in factor_model.elements}
    return Embedding(factor_model, product, space_map, index_map, hyp_maps,
                     name=name or "factor-" + side)


# -- specs, splits, windows ------------------------------------------------------


class NoSplitNeeded(Exception):
    pass


class WindowTooLarge(Exception):
    pass


@dataclass
class ProductSpec:
    """Finite simplicial graph with a base group per vertex.

    bases values are ("cyclic", n) or ("z", ball_radius); window_radius
    controls the Bass-Serre windows; budget caps the total glued size."""
    vertices: tuple
    edges: frozenset
    bases: dict
    window_radius: int = 2
    budget: int = 6000

    def __post_init__(self):
        self.vertices = tuple(sorted(self.vertices))
        self.edges = frozenset(frozenset(e) for e in self.edges)
        for e in self.edges:
            if len(e) != 2 or not all(v in self.vertices for v in e):
                raise ValueError("bad edge %r" % (sorted(e),))

    def adjacent(self, u, v):
        return frozenset((u, v)) in self.edges

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def link(self, v):
        return tuple(sorted(u for u in self.vertices if self.adjacent(u, v)))

    def induced(self, verts):
        verts = tuple(sorted(verts))
        edges = frozenset(e for e in self.edges if all(v in verts for v in e))
        return ProductSpec(verts, edges, {v: self.bases[v] for v in verts},
                           self.window_radius, self.budget)

    def is_complete(self):
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    def components(self):
        seen, out = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = {v}, [v]
            while stack:
                x = stack.pop()
                for y in self.vertices:
                    if y not in comp and self.adjacent(x, y):
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            out.append(tuple(sorted(comp)))
        return out


@dataclass
class SplitData:
    pivot: object
    left: ProductSpec       # the graph minus the pivot
    link: tuple             # link of the pivot
    spec: ProductSpec = None

    def __repr__(self):
        return "SplitData(pivot=%r, left=%r, link=%r)" % (
            self.pivot, self.left.vertices, self.link)


def split(spec):
    """Deterministic pivot for the amalgam recursion: highest degree, ties
    to the least vertex id. Complete, disconnected and one-vertex graphs
    raise NoSplitNeeded (they are handled by the product / free-product /
    base cases)."""
    if len(spec.vertices) <= 1:
        raise NoSplitNeeded("single vertex")
    if spec.is_complete():
        raise NoSplitNeeded("complete graph: direct product")
    if len(spec.components()) > 1:
        raise NoSplitNeeded("disconnected graph: free product")
    pivot = max(spec.vertices, key=lambda v: (spec.degree(v),
                                              [-ord(c) for c in str(v)]))
    pivot = sorted([v for v in spec.vertices
                    if spec.degree(v) == spec.degree(pivot)])[0]
    rest = tuple(v for v in spec.vertices if v != pivot)
    return SplitData(pivot, spec.induced(rest), spec.link(pivot), spec)


def base_group_model(kind, label):
    """Cayley model of one vertex group: a cycle for cyclic groups, an
    integer ball for the infinite cyclic group."""
    from .groups import FreeProductBases
    fp = FreeProductBases([kind])
    space = fp.base_cayley(0, label=lambda e, fp=fp: fp.normalize(((0, e),)))
    return trivial_model(space, elt="S", name="base:%s" % (label,))


def _point_embedding(pm, target, point, name=""):
    space_map = CoarseMap.constant(pm.space, target.space, [point], name=name)
    index_map = IndexMap(pm.lattice, target.lattice,
                         {pm.lattice.maximal: target.lattice.maximal}, name=name)
    hyp_map = CoarseMap.constant(pm.hyp[pm.lattice.maximal],
                                 target.hyp[target.lattice.maximal], [point])
    return Embedding(pm, target, space_map, index_map,
                     {pm.lattice.maximal: hyp_map}, name=name)


def free_product_window(bases, labels, radius, budget, name=""):
    """Windowed Bass-Serre tree of a free product of singleton-structure
    base groups: coset vertices out to the given tree radius, carrying
    translated Cayley copies, glued along shared elements through trivial
    edge groups. For three or more factors the tree takes the star-of-groups
    form, with a point vertex per glued group element adjacent to its
    cosets (coset-to-coset hops then cost two)."""
    from collections import deque

    from .groups import FreeProductBases
    from .treecombine import TreeOfHHS

    fp = FreeProductBases(bases)
    k = len(bases)
    if k < 2:
        raise ValueError("free product needs at least two factors")
    hop = 1 if k == 2 else 2

    def coset_vertex(i, w):
        return ("gp", i, fp.coset_rep(w, i))

    def coset_model(i, w):
        rep = fp.coset_rep(w, i)
        labelled = fp.base_cayley(
            i, label=lambda e, rep=rep, i=i: fp.mult(rep, ((i, e),)))
        return trivial_model(labelled, elt="S", name="%s|%r" % (labels[i], rep))

    verts, depth = {}, {}
    edges, edge_models, edge_maps = [], {}, {}
    point_models = {}
    root = coset_vertex(0, ())
    verts[root] = coset_model(0, ())
    depth[root] = 0
    total = len(verts[root].space)
    queue = deque([(root, 0, ())])
    while queue:
        v, i, w = queue.popleft()
        if depth[v] + hop > radius:
            continue
        rep = fp.coset_rep(w, i)
        for x in fp.base_elements(i):
            g = fp.mult(rep, x)
            for j in range(k):
                if j == i:
                    continue
                u = coset_vertex(j, g)
                if u not in verts:
                    verts[u] = coset_model(j, g)
                    depth[u] = depth[v] + hop
                    total += len(verts[u].space)
                    if total > budget:
                        raise WindowTooLarge("window exceeds budget %d" % budget)
                    queue.append((u, j, g))
                if k == 2:
                    e = tuple(sorted((v, u), key=vkey))
                    if e not in edge_models:
                        pm = trivial_model(single_point(("e", g)), elt="SE",
                                           name="edge|%r" % (g,))
                        edges.append(e)
                        edge_models[e] = pm
                        edge_maps[(e, v)] = _point_embedding(pm, verts[v], g)
                        edge_maps[(e, u)] = _point_embedding(pm, verts[u], g)
                else:
                    ev = ("el", g)
                    if ev not in point_models:
                        point_models[ev] = trivial_model(
                            single_point(g), elt="S", name="el|%r" % (g,))
                        total += 1
                    for endpoint in (v, u):
                        e = tuple(sorted((ev, endpoint), key=vkey))
                        if e not in edge_models:
                            pm = trivial_model(single_point(("e", g, endpoint)),
                                               elt="SE")
                            edges.append(e)
                            edge_models[e] = pm
                            edge_maps[(e, ev)] = _point_embedding(
                                pm, point_models[ev], g)
                            edge_maps[(e, endpoint)] = _point_embedding(
                                pm, verts[endpoint], g)
    allverts = dict(verts)
    allverts.update(point_models)
    return TreeOfHHS(list(allverts), edges, allverts, edge_models, edge_maps,
                     name=name or "fp-window")


def amalgam_star_window(side_model, pivot_model, name=""):
    """Windowed Bass-Serre tree of the splitting over the link subgroup when
    the link carries the whole remaining graph: one central vertex with the
    product of the link model and the pivot base, and one leaf per pivot
    ball element carrying a copy of the link model, glued along link copies
    through the corresponding product slice."""
    from .treecombine import TreeOfHHS

    center = ("Q",)
    Q = direct_product_structure(side_model, pivot_model, name="center")
    verts = {center: Q}
    edges, edge_models, edge_maps = [], {}, {}
    for anchor in pivot_model.space.vertices:
        leaf = ("P", anchor)
        verts[leaf] = side_model
        e = tuple(sorted((center, leaf), key=vkey))
        edges.append(e)
        edge_models[e] = side_model
        edge_maps[(e, leaf)] = Embedding.identity(side_model)
        edge_maps[(e, center)] = factor_embedding(Q, side_model, "l",
                                                  anchor=anchor,
                                                  name="slice@%r" % (anchor,))
    return TreeOfHHS(list(verts), edges, verts, edge_models, edge_maps,
                     name=name or "amalgam-window")


# -- the recursion ----------------------------------------------------------------


@dataclass
class CertLevel:
    subgraph: tuple
    case: str
    pivot: object
    ip_ok: bool
    cc_ok: bool
    inclusions: list      # dicts: name, full/hq/iso verdicts, constants

    def ok(self):
        return (self.ip_ok and self.cc_ok
                and all(i["full_ok"] and i["hq_ok"] and i["iso_ok"]
                        for i in self.inclusions))


@dataclass
class CertChain:
    levels: list

    @property
    def ok(self):
        return all(l.ok() for l in self.levels)

    def as_dict(self):
        return {"ok": self.ok, "levels": [
            {"subgraph": list(l.subgraph), "case": l.case,
             "pivot": l.pivot, "ip_ok": l.ip_ok, "cc_ok": l.cc_ok,
             "inclusions": l.inclusions} for l in self.levels]}


@dataclass
class BuildResult:
    model: HHSModel
    combined: object          # CombinedStructure for tree levels, else None
    cert: CertChain
    include: object           # callable subgraph-vertices -> Embedding


def build(spec, comparison_bound=2.0, decorate_windows=True, copy_cap=2):
    """Recursive construction of the combined structure of the whole graph
    product: complete graphs fold into direct products, disconnected graphs
    into free-product windows, everything else splits along the link of the
    pivot. Tree windows are decorated before combining (undecorated trees
    leave distinct classes with equal supports, which the relation rules
    cannot separate). Every level certifies the lattice checks plus
    fullness, hierarchical quasiconvexity and isometry of the inclusions
    used."""
    levels = []
    opts = {"bound": comparison_bound, "decorate": decorate_windows,
            "cap": copy_cap}
    model, combined, include = _build_sub(spec, levels, opts)
    return BuildResult(model, combined, CertChain(levels), include)


def _certify_inclusion(name, emb, bounded_diam=2):
    """Verify one inclusion: relation/fullness checks, hierarchically
    quasiconvex image, and isometric induced maps on hyperbolic models.
    Collapsing identifications between uniformly bounded models (the
    free-product windows) are quasi-isometries with constants within the
    model diameter; those count as isometric-up-to-bounded and the branch
    taken is recorded."""
    from .embedding import verify_embedding
    from .model import hq_check
    from .spaces import qi_constants as qi

    rep = verify_embedding(emb)
    hq = hq_check(emb.target, emb.image())
    worst = (1.0, 0.0)
    bounded = True
    for U in emb.source.elements:
        K, C = qi(emb.hyp_maps[U])
        if (K, C) > worst:
            worst = (K, C)
        if (emb.hyp_maps[U].domain.diam() > bounded_diam
                or emb.hyp_maps[U].codomain.diam() > bounded_diam):
            bounded = False
    exact = worst == (1.0, 0.0)
    iso_ok = exact or (bounded and worst[0] <= bounded_diam
                       and worst[1] <= bounded_diam)
    return {
        "name": name, "full_ok": rep.ok, "hq_ok": hq.passed,
        "iso_ok": iso_ok, "iso_exact": exact, "hyp_qi": list(worst),
        "diagram_defect": rep.measured["diagram_defect"],
    }


def _lattice_checks(model):
    return (model.lattice.verify_intersection_property().ok,
            model.lattice.verify_clean_containers().ok)


def _build_sub(spec, levels, opts):
    verts = spec.vertices
    if len(verts) == 1:
        v = verts[0]
        model = base_group_model(spec.bases[v], v)
        ip, cc = _lattice_checks(model)
        levels.append(CertLevel(verts, "base", None, ip, cc, []))

        def include(theta, model=model, v=v):
            if tuple(theta) == (v,):
                return Embedding.identity(model)
            raise HypothesisFailureLocal("no such subgraph below a base vertex")
        return model, None, include

    if spec.is_complete():
        return _build_complete(spec, levels, opts)
    comps = spec.components()
    if len(comps) > 1:
        return _build_free(spec, comps, levels, opts)
    return _build_split(spec, levels, opts)


class HypothesisFailureLocal(Exception):
    pass


def _build_complete(spec, levels, opts):
    order = list(spec.vertices)
    model, _, include = _build_sub(spec.induced(order[:1]), levels, opts)
    prefix = order[:1]
    for v in order[1:]:
        right = base_group_model(spec.bases[v], v)
        product = direct_product_structure(model, right,
                                           name="x".join(map(str, prefix + [v])))
        left_emb = factor_embedding(product, model, "l")
        right_emb = factor_embedding(product, right, "r")
        ip, cc = _lattice_checks(product)
        incs = [_certify_inclusion("factor:%s" % ",".join(map(str, prefix)),
                                   left_emb),
                _certify_inclusion("factor:%s" % v, right_emb)]
        levels.append(CertLevel(tuple(prefix + [v]), "direct-product", None,
                                ip, cc, incs))
        old_include = include
        prefix = prefix + [v]

        def include(theta, product=product, model=model, right=right, v=v,
                    old=old_include, left_emb=left_emb, right_emb=right_emb,
                    prefix=tuple(prefix)):
            theta = tuple(sorted(theta))
            if theta == prefix:
                return Embedding.identity(product)
            if theta == (v,):
                return right_emb
            if v not in theta:
                return old(theta).compose(left_emb)
            raise HypothesisFailureLocal(
                "inclusion of %r into the product fold %r is not a fold prefix"
                % (theta, prefix))
        model = product
    return model, None, include


def _build_free(spec, comps, levels, opts):
    from .treecombine import HypothesisFailure, build_combined

    sub_results = []
    for comp in comps:
        if len(comp) > 1:
            raise HypothesisFailure(
                "free factors with composite structures are outside the "
                "implemented window scope", comp)
        sub_results.append(_build_sub(spec.induced(comp), levels, opts))
    bases = [spec.bases[comp[0]] for comp in comps]
    labels = [comp[0] for comp in comps]
    window = free_product_window(bases, labels, spec.window_radius,
                                 spec.budget, name="fp:" + ",".join(map(str, labels)))
    window = _maybe_decorate(window, opts)
    combined = build_combined(window, comparison_bound=opts["bound"])
    model = combined.model

    def component_embedding(idx):
        from .groups import FreeProductBases
        fp = FreeProductBases(bases)
        sub_model = sub_results[idx][0]
        root = ("gp", idx, ())
        cls = _class_of(combined, root, "S")
        comp_map = combined.comparison_maps[(cls.id, root)]

        def relabel(x, idx=idx, fp=fp):
            # base models index their own syllables 0; the window copy uses
            # the component index
            e = 0 if x == () else x[0][1]
            return fp.normalize(((idx, e),))

        space_map = CoarseMap.single(sub_model.space, model.space,
                                     lambda x, root=root: (root, relabel(x)))
        index_map = IndexMap(sub_model.lattice, model.lattice, {"S": cls.id})
        hyp_map = CoarseMap(sub_model.hyp["S"], model.hyp[cls.id],
                            {x: comp_map(relabel(x))
                             for x in sub_model.hyp["S"].vertices})
        return Embedding(sub_model, model, space_map, index_map,
                         {"S": hyp_map}, name="free-factor:%r" % (labels[idx],))

    incs = []
    for idx, comp in enumerate(comps):
        incs.append(_certify_inclusion("free-factor:%s" % (comp[0],),
                                       component_embedding(idx)))
    ip, cc = _lattice_checks(model)
    levels.append(CertLevel(spec.vertices, "free-product", None, ip, cc, incs))

    def include(theta, spec=spec, comps=comps):
        theta = tuple(sorted(theta))
        if theta == spec.vertices:
            return Embedding.identity(model)
        for idx, comp in enumerate(comps):
            if theta == comp:
                return component_embedding(idx)
            if set(theta) <= set(comp):
                return sub_results[idx][2](theta).compose(component_embedding(idx))
        raise HypothesisFailureLocal(
            "inclusion of %r spanning several free factors is not implemented"
            % (theta,))
    return model, combined, include


def _maybe_decorate(window, opts):
    from .treecombine import decorate
    if opts.get("decorate", True):
        return decorate(window, copy_cap=opts.get("cap", 2))
    return window


def _class_of(combined, vertex, elt):
    for cls in combined.classes:
        if (vertex, elt) in cls.members:
            return cls
    raise KeyError((vertex, elt))


def _build_split(spec, levels, opts):
    from .treecombine import build_combined

    data = split(spec)
    v = data.pivot
    link = data.link
    left = data.left
    if tuple(sorted(link)) != left.vertices:
        # the general amalgam needs coset windows over a proper subgroup of
        # the complement; see the decisions on scope
        raise_unimplemented_amalgam(spec, data)
    p_model, p_combined, p_include = _build_sub(left, levels, opts)
    e_model = p_model
    pivot_model = base_group_model(spec.bases[v], v)
    window = amalgam_star_window(e_model, pivot_model,
                                 name="amalgam:%s" % (v,))
    window = _maybe_decorate(window, opts)
    combined = build_combined(window, comparison_bound=opts["bound"])
    model = combined.model
    center = ("Q",)
    leaves = sorted((w for w in combined.tree.vertices
                     if isinstance(w, tuple) and w and w[0] == "P"), key=vkey)

    def side_embedding(leaf):
        sub = window.vertex_models[leaf]
        cls_of = {U: _class_of(combined, leaf, U).id for U in sub.elements}
        space_map = CoarseMap.single(sub.space, model.space,
                                     lambda x, leaf=leaf: (leaf, x))
        index_map = IndexMap(sub.lattice, model.lattice, cls_of)
        hyp_maps = {U: combined.comparison_maps[(cls_of[U], leaf)]
                    for U in sub.elements}
        return Embedding(sub, model, space_map, index_map, hyp_maps,
                         name="side:%r" % (leaf,))

    incs = [_certify_inclusion("amalgam-side:%r" % (leaves[0],),
                               side_embedding(leaves[0])),
            _certify_inclusion("amalgam-center", side_embedding(center))]
    ip, cc = _lattice_checks(model)
    levels.append(CertLevel(spec.vertices, "amalgam", v, ip, cc, incs))

    def include(theta, spec=spec):
        theta = tuple(sorted(theta))
        if theta == spec.vertices:
            return Embedding.identity(model)
        if set(theta) <= set(left.vertices):
            return p_include(theta).compose(side_embedding(leaves[0]))
        raise HypothesisFailureLocal(
            "inclusion of %r through the pivot side is not implemented"
            % (theta,))
    return model, combined, include


def raise_unimplemented_amalgam(spec, data):
    from .treecombine import HypothesisFailure
    raise HypothesisFailure(
        "splitting whose link differs from the pivot complement needs "
        "coset windows over a proper subgroup; not implemented for %r"
        % (spec.vertices,), data.pivot)


def bass_serre_window(data, radius, budget=6000):
    """Windowed Bass-Serre tree of a splitting.

    Accepts either a disconnected ProductSpec (free product: coset tree over
    the trivial edge group) or SplitData whose link carries the whole
    complement (the amalgam with the product of the link and the pivot).
    Radius zero always yields the single root vertex."""
    from .treecombine import HypothesisFailure

    if isinstance(data, ProductSpec):
        comps = data.components()
        if len(comps) < 2:
            raise ValueError("free-product window needs a disconnected graph")
        for comp in comps:
            if len(comp) > 1:
                raise HypothesisFailure(
                    "free factors with composite structures are outside the "
                    "implemented window scope", comp)
        bases = [data.bases[c[0]] for c in comps]
        return free_product_window(bases, [c[0] for c in comps], radius, budget)
    if tuple(sorted(data.link)) != data.left.vertices:
        raise_unimplemented_amalgam(data.spec, data)
    if radius == 0:
        side = build(data.left).model
        return TreeOfHHS_single(side)
    side = build(data.left).model
    pivot_model = base_group_model(data.spec.bases[data.pivot], data.pivot)
    return amalgam_star_window(side, pivot_model,
                               name="amalgam:%s" % (data.pivot,))


def TreeOfHHS_single(model):
    from .treecombine import TreeOfHHS
    return TreeOfHHS(["root"], [], {"root": model}, {}, {}, name="single")
