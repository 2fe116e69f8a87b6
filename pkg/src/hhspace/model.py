"""Finite-graph models of hierarchical structures and the axiom auditor.

An HHSModel bundles a finite base space, an index lattice, one hyperbolic
model and one projection per index element, and the relative projection
data (rho sets for transverse and properly nested pairs, rho maps for
properly nested pairs). The auditor measures, per axiom, the minimal
constants that make the axiom true on the model, with witnesses for the
extremal configurations; structural gaps (missing data, broken relation
rules) are hard failures.

Distance conventions: d_U(x, y) is the diameter of the union of the two
projection sets; distances from a point to a subspace use the min-gap.
"""

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .lattice import ValidationReport
from .spaces import CoarseMap, four_point_delta, vkey


class NoConsistentTuple(Exception):
    pass


class NotHQC(Exception):
    pass


@dataclass
class ConstantsRecord:
    """Measured constants of a model; all values are minimal workable ones."""
    delta: float = 0.0
    xi: float = 0.0
    kappa0: float = 0.0
    e_bgi: float = 0.0
    e_large_links: float = 0.0
    lambda_ll: float = 1.0
    alpha_pr: float = 0.0
    proj_lip: float = 0.0
    proj_qc: float = 0.0
    surj_radius: float = 0.0
    complexity: int = 1
    theta_u: dict = field(default_factory=dict)
    s0: float = 1.0

    def as_dict(self):
        d = dict(self.__dict__)
        d["theta_u"] = {int(k): int(v) for k, v in self.theta_u.items()}
        return d


@dataclass
class AxiomEntry:
    name: str
    ok: bool
    constants: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    notes: str = ""

    def as_dict(self):
        return {"name": self.name, "ok": self.ok, "constants": self.constants,
                "witnesses": [repr(w) for w in self.witnesses], "notes": self.notes}


@dataclass
class AuditReport:
    model_name: str
    entries: list = field(default_factory=list)

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def entry(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def constants_record(self):
        rec = ConstantsRecord()
        for e in self.entries:
            for k, v in e.constants.items():
                if hasattr(rec, k):
                    setattr(rec, k, v)
        rec.s0 = max(1.0, rec.xi, rec.kappa0) + 1.0
        return rec

    def as_dict(self):
        return {"model": self.model_name, "ok": self.ok,
                "entries": [e.as_dict() for e in self.entries]}

    def summary(self):
        lines = []
        for e in self.entries:
            cs = ", ".join("%s=%s" % (k, _fmt(v)) for k, v in sorted(e.constants.items())
                           if k != "theta_u")
            lines.append("%-22s %s  %s" % (e.name, "ok " if e.ok else "FAIL", cs))
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return "%g" % v
    return str(v)


class HHSModel:
    """A finite model: space, lattice, hyperbolic models, projections, rho data.

    rho_set[(A, B)] is the bounded marker set of A inside the hyperbolic
    model of B; it must exist whenever A is properly nested in B or A and B
    are transverse. rho_map[(V, W)] is the downward coarse map from the
    model of W to the model of V, for V properly nested in W.
    """

    def __init__(self, space, lattice, hyp, proj, rho_set=None, rho_map=None, name=""):
        self.space = space
        self.lattice = lattice
        self.hyp = dict(hyp)
        self.proj = dict(proj)
        self.rho_set = {k: frozenset(v) for k, v in (rho_set or {}).items()}
        self.rho_map = dict(rho_map or {})
        self.name = name
        self._tables = {}
        self._pair = {}
        self._realize_defect = None
        self._basics = None

    # -- bookkeeping -------------------------------------------------------

    @property
    def elements(self):
        return self.lattice.elements

    @property
    def basepoint(self):
        return self.space.vertices[0]

    def table(self, U):
        if U not in self._tables:
            self._tables[U] = self.proj[U].set_table()
        return self._tables[U]

    def pair_matrix(self, U):
        """T with T[x, y] = d_U(x, y) over base-space vertex indices."""
        if U not in self._pair:
            sids, _, M = self.table(U)
            self._pair[U] = M[np.ix_(sids, sids)]
        return self._pair[U]

    def du(self, U, x, y):
        i, j = self.space.index[x], self.space.index[y]
        return int(self.pair_matrix(U)[i, j])

    def dist_to_set_array(self, U, S):
        """array over base vertices: sup-distance from the projection to S."""
        sids, sets, _ = self.table(U)
        CU = self.hyp[U]
        vals = np.fromiter((CU.dset(sets[a], S) for a in range(len(sets))),
                           dtype=np.int64, count=len(sets))
        return vals[sids]

    def gap_to_set_array(self, U, S):
        sids, sets, _ = self.table(U)
        CU = self.hyp[U]
        vals = np.fromiter((CU.gap(sets[a], S) for a in range(len(sets))),
                           dtype=np.int64, count=len(sets))
        return vals[sids]

    def coords_of(self, x):
        return {U: self.proj[U](x) for U in self.elements}

    def xi(self):
        """Max projection-image diameter and rho-set diameter."""
        out = 0
        for U in self.elements:
            out = max(out, self.proj[U].diam_bound)
        for (a, b), S in self.rho_set.items():
            out = max(out, self.hyp[b].diam_set(S))
        return out

    def basics(self):
        """(xi, kappa0) measured, cached; kappa0 from the consistency scan."""
        if self._basics is None:
            k0, _, coh, _ = _consistency_scan(self)
            self._basics = (self.xi(), max(k0, coh))
        return self._basics

    def realization_defect(self):
        """Max over points of the minimax defect of re-realizing the point's
        own coordinate tuple; zero on exact models."""
        if self._realize_defect is None:
            stack = np.stack([self.pair_matrix(U) for U in self.elements])
            mm = stack.max(axis=0)
            self._realize_defect = int(mm.min(axis=0).max())
        return self._realize_defect

    # -- structure ---------------------------------------------------------

    def validate_structure(self):
        rep = ValidationReport("model:%s" % self.name)
        lat = self.lattice
        for U in lat.elements:
            if U not in self.hyp:
                rep.add("missing-hyp", (U,))
            if U not in self.proj:
                rep.add("missing-projection", (U,))
        for i, a in enumerate(lat.elements):
            for b in lat.elements:
                if a == b:
                    continue
                r = lat.rel(a, b)
                if r == "trans" and vkey(a) < vkey(b):
                    for (p, q) in ((a, b), (b, a)):
                        if (p, q) not in self.rho_set:
                            rep.add("missing-rho-set", (p, q), "transverse pair")
                if r == "nested" and lat.properly_nested(a, b):
                    if (a, b) not in self.rho_set:
                        rep.add("missing-rho-set", (a, b), "nested pair")
                    if (a, b) not in self.rho_map:
                        rep.add("missing-rho-map", (a, b), "nested pair")
        for (a, b), S in self.rho_set.items():
            CB = self.hyp.get(b)
            if CB is not None and any(p not in CB for p in S):
                rep.add("rho-set-outside-model", (a, b))
        return rep


def trivial_model(space, elt="S", name=""):
    """One-element structure: the space is its own hyperbolic model."""
    from .lattice import singleton_lattice
    lat = singleton_lattice(elt, name=name)
    return HHSModel(space, lat, {elt: space}, {elt: CoarseMap.identity(space)},
                    name=name or "trivial")


# -- consistency -------------------------------------------------------------


def _consistency_scan(model):
    """Max consistency defect over all points and related pairs, plus the
    nested-rho coherence defect. Returns (kappa0, witness, coherence, cwitness)."""
    lat = model.lattice
    kappa0, wit = 0, None
    for i, V in enumerate(lat.elements):
        for W in lat.elements[i + 1:]:
            r = lat.rel(V, W)
            if r == "trans":
                a = model.dist_to_set_array(W, model.rho_set[(V, W)])
                b = model.dist_to_set_array(V, model.rho_set[(W, V)])
                vals = np.minimum(a, b)
                m = int(vals.max())
                if m > kappa0:
                    kappa0, wit = m, ("trans", V, W, model.space.vertices[int(vals.argmax())])
            elif r == "nested":
                v, w = (V, W) if lat.properly_nested(V, W) else (W, V)
                m, x = _nested_consistency(model, v, w)
                if m > kappa0:
                    kappa0, wit = m, ("nested", v, w, x)
    coherence, cwit = 0, None
    for (v, w) in lat._nest:
        for U in lat.elements:
            if U in (v, w):
                continue
            ok = lat.properly_nested(w, U) or (
                lat.transverse(w, U) and not lat.orthogonal(U, v))
            if not ok:
                continue
            if (v, U) not in model.rho_set or (w, U) not in model.rho_set:
                continue
            d = model.hyp[U].dset(model.rho_set[(v, U)], model.rho_set[(w, U)])
            if d > coherence:
                coherence, cwit = d, (v, w, U)
    return kappa0, wit, coherence, cwit


def _nested_consistency(model, v, w):
    """min( d_w(pi_w x, rho), diam(pi_v x | rho-map(pi_w x)) ) maximized over x."""
    a = model.dist_to_set_array(w, model.rho_set[(v, w)])
    rmap = model.rho_map[(v, w)]
    CV = model.hyp[v]
    vals = np.empty(len(model.space), dtype=np.int64)
    cache = {}
    sids_w, sets_w, _ = model.table(w)
    sids_v, sets_v, _ = model.table(v)
    for i in range(len(model.space)):
        key = (sids_w[i], sids_v[i])
        if key not in cache:
            img = rmap.image_of_set(sets_w[sids_w[i]])
            cache[key] = CV.dset(sets_v[sids_v[i]], img)
        vals[i] = cache[key]
    both = np.minimum(a, vals)
    return int(both.max()), model.space.vertices[int(both.argmax())]


def tuple_consistency_defect(model, coords):
    """Largest violated consistency inequality of an abstract tuple, plus the
    largest coordinate diameter."""
    lat = model.lattice
    worst = 0
    keys = sorted(coords, key=vkey)
    diam = max(model.hyp[U].diam_set(coords[U]) for U in keys)
    for i, V in enumerate(keys):
        for W in keys[i + 1:]:
            r = lat.rel(V, W)
            if r == "trans":
                worst = max(worst, min(
                    model.hyp[W].dset(coords[W], model.rho_set[(V, W)]),
                    model.hyp[V].dset(coords[V], model.rho_set[(W, V)])))
            elif r == "nested":
                v, w = (V, W) if lat.properly_nested(V, W) else (W, V)
                img = model.rho_map[(v, w)].image_of_set(coords[w])
                worst = max(worst, min(
                    model.hyp[w].dset(coords[w], model.rho_set[(v, w)]),
                    model.hyp[v].dset(coords[v], img)))
    return worst, diam


# -- realization and regions --------------------------------------------------


def realize(model, coords, kappa=None):
    """Vertex minimizing the worst coordinate mismatch against the tuple.

    With kappa given, the tuple is first checked to be kappa-consistent
    (NoConsistentTuple otherwise). Ties break to the least vertex. Returns
    (vertex, minimax value)."""
    if kappa is not None:
        worst, diam = tuple_consistency_defect(model, coords)
        if worst > kappa or diam > kappa:
            raise NoConsistentTuple("defect %s, coordinate diameter %s exceed kappa=%s"
                                    % (worst, diam, kappa))
    keys = sorted(coords, key=vkey)
    stack = np.stack([model.dist_to_set_array(U, coords[U]) for U in keys])
    mins = stack.max(axis=0)
    i = int(mins.argmin())
    return model.space.vertices[i], int(mins[i])


@dataclass
class ProductRegion:
    element: object
    kappa: float
    F: frozenset
    E: frozenset
    P: frozenset
    copies: list  # (anchor vertex in E, parallel copy of F) pairs


def product_region(model, U, kappa):
    """Standard product region data for U at tolerance kappa.

    P pins every coordinate transverse to or properly above U to the rho
    marker of U; F additionally pins the coordinates orthogonal to U to a
    base point, and E pins the coordinates nested in U. Parallel copies of
    F are enumerated per anchor point of E. Pins use the gap to the pin
    set, so fat marker sets do not force fat regions."""
    lat = model.lattice
    n = len(model.space)
    pinned = np.zeros(n, dtype=np.int64)
    for V in lat.elements:
        if lat.transverse(U, V) or lat.properly_nested(U, V):
            pinned = np.maximum(pinned, model.gap_to_set_array(V, model.rho_set[(U, V)]))
    P_idx = (pinned <= kappa).nonzero()[0]
    P = frozenset(model.space.vertices[i] for i in P_idx)
    if not P:
        return ProductRegion(U, kappa, frozenset(), frozenset(), P, [])
    x0 = min(P, key=vkey)
    orth = [V for V in lat.elements if lat.orthogonal(U, V)]
    nested = [V for V in lat.elements if lat.nested(V, U)]

    def _match(anchor, along):
        req = pinned.copy()
        for V in along:
            req = np.maximum(req, model.gap_to_set_array(V, model.proj[V](anchor)))
        return frozenset(model.space.vertices[i] for i in (req <= kappa).nonzero()[0])

    F = _match(x0, orth)
    E = _match(x0, nested)
    copies, seen = [], set()
    for e in sorted(E, key=vkey):
        copy = _match(e, orth)
        if copy not in seen:
            seen.add(copy)
            copies.append((e, copy))
    return ProductRegion(U, kappa, F, E, P, copies)


# -- hierarchical quasiconvexity and gates ------------------------------------


@dataclass
class HQReport:
    k0: int
    table: dict  # kappa -> realization distance
    threshold: float
    slope: float
    passed: bool


def hq_check(model, subset, threshold=None, slope=4.0):
    """Measure hierarchical quasiconvexity of a vertex subset.

    k0 is the worst quasiconvexity constant of a projection of the subset;
    the table maps kappa to the largest distance from a point, all of whose
    projections are kappa-close to the subset's projections, back to the
    subset. Passing means the realization function stays under the declared
    affine bound, k(kappa) <= slope * kappa + threshold; the failure mode
    of a non-quasiconvex subset is a large k at small kappa (points whose
    every coordinate looks close but which sit far from the subset), which
    no slope forgives. The default threshold comes from the model's
    measured slack."""
    subset = frozenset(subset)
    if not subset:
        raise ValueError("empty subset")
    if threshold is None:
        threshold = 2.0 * (model.xi() + model.realization_defect()) + 2.0
    k0 = 0
    for U in model.elements:
        img = model.proj[U].image_of_set(subset)
        k0 = max(k0, model.hyp[U].qc_constant(img))
    gaps = np.stack([model.gap_to_set_array(U, model.proj[U].image_of_set(subset))
                     for U in model.elements]).max(axis=0)
    sub_idx = model.space.idx(sorted(subset, key=vkey))
    to_sub = model.space.dist[:, sub_idx].min(axis=1)
    table = {}
    for kappa in sorted(set(int(g) for g in gaps)):
        table[kappa] = int(to_sub[gaps <= kappa].max())
    passed = k0 <= threshold and all(v <= slope * k + threshold
                                     for k, v in table.items())
    return HQReport(k0, table, float(threshold), float(slope), passed)


def gate(model, target, x, hq=None, threshold=None):
    """Gate of x onto a hierarchically quasiconvex vertex set.

    Picks the target point whose projections best realize the
    closest-point projections of the projections of x; ties break to the
    least vertex. Raises NotHQC when the target fails hq_check."""
    return gate_map(model, target, hq=hq, threshold=threshold)(x)


def gate_map(model, target, hq=None, threshold=None):
    target = frozenset(target)
    if hq is None:
        hq = hq_check(model, target, threshold=threshold)
    if not hq.passed:
        raise NotHQC("target fails hierarchical quasiconvexity: k0=%s table=%s"
                     % (hq.k0, hq.table))
    t_sorted = sorted(target, key=vkey)
    t_idx = model.space.idx(t_sorted)
    images = {}
    cols = []
    for U in model.elements:
        sids, sets, _ = model.table(U)
        CU = model.hyp[U]
        A = model.proj[U].image_of_set(target)
        A_sorted = sorted(A, key=vkey)
        proj_of = {}
        for a in set(sids):
            gaps = [CU.gap(sets[a], [p]) for p in A_sorted]
            g = min(gaps)
            proj_of[a] = frozenset(p for p, gp in zip(A_sorted, gaps) if gp == g)
        # distance from each target point's U-projection to each closest-point set
        col = np.empty((len(t_sorted), len(sets)), dtype=np.int64)
        for a in set(sids):
            arr = model.dist_to_set_array(U, proj_of[a])
            col[:, a] = arr[t_idx]
        cols.append((U, sids, col))
    out = {}
    for x in model.space.vertices:
        i = model.space.index[x]
        best = np.zeros(len(t_sorted), dtype=np.int64)
        for U, sids, col in cols:
            best = np.maximum(best, col[:, sids[i]])
        out[x] = frozenset([t_sorted[int(best.argmin())]])
    return CoarseMap(model.space, model.space, out, name="gate")


# -- supports and concreteness -------------------------------------------------


def epsilon_support(model, subset, eps):
    """Index elements where the subset has projection diameter above eps."""
    out = []
    for W in model.elements:
        if model.hyp[W].diam_set(model.proj[W].image_of_set(subset)) > eps:
            out.append(W)
    return frozenset(out)


@dataclass
class ConcretizeResult:
    model: object
    changed: bool
    core: object           # the join of the support, or None when unchanged
    removed: tuple
    eps: float
    neighborhood: int      # measured distance of the space to the core region


def concretize(model, eps=None, kappa=None):
    """Restrict the structure to everything below the join of the eps-support
    of the whole space. Bounded models and already-concrete models are
    returned unchanged. The measured neighborhood constant (how far the
    space wanders from the core product region) is reported."""
    if eps is None:
        alpha = measure_alpha(model)
        eps = 3.0 * max(model.xi(), alpha) + 1.0
    supp = epsilon_support(model, model.space.vertices, eps)
    if not supp:
        return ConcretizeResult(model, False, None, (), eps, 0)
    s_eps = model.lattice.join_all(supp)
    if s_eps == model.lattice.maximal:
        return ConcretizeResult(model, False, None, (), eps, 0)
    keep = model.lattice.below(s_eps)
    removed = tuple(e for e in model.elements if e not in keep)
    if kappa is None:
        xi, k0 = model.basics()
        kappa = max(xi, k0)
    region = product_region(model, s_eps, kappa)
    core = region.F if region.F else frozenset([model.basepoint])
    ii = model.space.idx(sorted(core, key=vkey))
    dist_to_core = int(model.space.dist[:, ii].min(axis=1).max())
    sub = submodel(model, keep, s_eps)
    return ConcretizeResult(sub, True, s_eps, removed, eps, dist_to_core)


def submodel(model, keep, new_maximal, name=""):
    keep = frozenset(keep)
    lat = model.lattice.restrict(keep, maximal=new_maximal)
    hyp = {U: model.hyp[U] for U in keep}
    proj = {U: model.proj[U] for U in keep}
    rset = {k: v for k, v in model.rho_set.items() if k[0] in keep and k[1] in keep}
    rmap = {k: v for k, v in model.rho_map.items() if k[0] in keep and k[1] in keep}
    return HHSModel(model.space, lat, hyp, proj, rset, rmap,
                    name=name or model.name + "|core")


# -- distance formula ----------------------------------------------------------


@dataclass
class DistanceFormulaFit:
    s: float
    K: float
    C: float
    worst_pair: tuple

    def holds(self, d, total):
        return (total / self.K - self.C) <= d <= (self.K * total + self.C)


def distance_formula_fit(model, s):
    """Tightest (K, C) comparing the space metric with the s-clipped sum of
    projection distances, over all vertex pairs; C ranges over the integer
    grid, K is minimized first. Also returns the pair attaining the worst
    ratio at the chosen constants."""
    stacks = [np.where(model.pair_matrix(U) >= s, model.pair_matrix(U), 0)
              for U in model.elements]
    total = np.zeros_like(stacks[0])
    for t in stacks:
        total = total + t
    D = model.space.dist
    iu = np.triu_indices(len(model.space), k=1)
    d_flat = D[iu].astype(np.float64)
    t_flat = total[iu].astype(np.float64)
    if len(d_flat) == 0:
        return DistanceFormulaFit(s, 1.0, 0.0, (model.basepoint, model.basepoint))
    best = None
    for C in range(0, int(D.max()) + 1):
        with np.errstate(divide="ignore", invalid="ignore"):
            k1 = np.where(t_flat > 0, (d_flat - C) / np.where(t_flat > 0, t_flat, 1), np.nan)
            bad = (t_flat == 0) & (d_flat > C)
            if bad.any():
                continue
            k2 = t_flat / (d_flat + C) if C > 0 else np.where(
                d_flat > 0, t_flat / np.where(d_flat > 0, d_flat, 1), 0.0)
        K = max(1.0, float(np.nanmax(k1)) if np.isfinite(np.nanmax(k1)) else 1.0,
                float(k2.max()))
        if best is None or (K, C) < best[:2]:
            need = np.maximum(np.where(np.isnan(k1), 0, k1), k2)
            j = int(need.argmax())
            best = (K, float(C), (model.space.vertices[iu[0][j]],
                                  model.space.vertices[iu[1][j]]))
        if K == 1.0:
            break
    return DistanceFormulaFit(s, best[0], best[1], best[2])


# -- the auditor ----------------------------------------------------------------


def measure_alpha(model, budget=500000):
    """Minimal partial-realization constant: over every family of pairwise
    orthogonal elements and every choice of image points, the best witness
    point's worst error."""
    lat = model.lattice
    G = nx.Graph()
    G.add_nodes_from(lat.elements)
    for i, a in enumerate(lat.elements):
        for b in lat.elements[i + 1:]:
            if lat.orthogonal(a, b):
                G.add_edge(a, b)
    n = len(model.space)
    alpha = 0
    point_rows = {}
    for V in lat.elements:
        CV = model.hyp[V]
        pts = sorted(model.proj[V].image(), key=vkey)
        rows = np.stack([model.dist_to_set_array(V, [p]) for p in pts])
        point_rows[V] = (pts, rows)
    for clique in nx.enumerate_all_cliques(G):
        Vs = sorted(clique, key=vkey)
        pin = np.zeros(n, dtype=np.int64)
        for Vj in Vs:
            for W in lat.elements:
                if lat.properly_nested(Vj, W) or lat.transverse(Vj, W):
                    pin = np.maximum(pin, model.dist_to_set_array(W, model.rho_set[(Vj, W)]))
        sizes = [len(point_rows[Vj][0]) for Vj in Vs]
        count = 1
        for sz in sizes:
            count *= sz
        if count > budget:
            raise MemoryError("partial-realization scan exceeds budget: %d choices" % count)
        for choice in itertools.product(*(range(sz) for sz in sizes)):
            req = pin.copy()
            for Vj, ci in zip(Vs, choice):
                req = np.maximum(req, point_rows[Vj][1][ci])
            val = int(req.min())
            if val > alpha:
                alpha = val
    return alpha


def audit_axioms(model):
    """Run every per-axiom measurement; structural gaps fail, measured
    constants are reported with witnesses."""
    rep = AuditReport(model.name)
    lat = model.lattice

    struct = model.validate_structure().merged(lat.validate_relations())
    rep.entries.append(AxiomEntry("structure", struct.ok,
                                  witnesses=struct.violations[:12]))
    if not struct.ok:
        return rep

    delta = max(four_point_delta(model.hyp[U]) for U in lat.elements)
    xi = model.xi()

    lip = qc = surj = 0.0
    for U in lat.elements:
        Dp = model.pair_matrix(U).astype(np.float64)
        D = model.space.dist.astype(np.float64)
        if Dp.max() > 0 and not (Dp <= D).all():
            lip = max(lip, float((Dp / (D + 1.0)).max()))
        else:
            lip = max(lip, 1.0 if Dp.max() > 0 else 0.0)
        img = model.proj[U].image()
        qc = max(qc, model.hyp[U].qc_constant(img))
        surj = max(surj, max(model.hyp[U].gap(img, [p]) for p in model.hyp[U].vertices))
    rep.entries.append(AxiomEntry("projections", True,
                                  {"proj_lip": lip, "proj_qc": qc,
                                   "surj_radius": surj, "xi": float(xi),
                                   "delta": delta}))

    k0, wit, coh, cwit = _consistency_scan(model)
    kappa0 = max(k0, coh)
    rep.entries.append(AxiomEntry(
        "consistency", True, {"kappa0": float(kappa0)},
        [w for w in (wit, cwit) if w is not None]))

    comp = lat.complexity()
    rep.entries.append(AxiomEntry("complexity", comp <= len(lat.elements),
                                  {"complexity": comp}))

    e_ll = max(xi, kappa0) + 1.0
    lam, ll_wit = _audit_large_links(model, e_ll)
    rep.entries.append(AxiomEntry("large-links", True,
                                  {"e_large_links": e_ll, "lambda_ll": lam},
                                  [ll_wit] if ll_wit else []))

    e_bgi, bgi_wit = _audit_bgi(model)
    rep.entries.append(AxiomEntry("bounded-geodesic-image", True,
                                  {"e_bgi": float(e_bgi)},
                                  [bgi_wit] if bgi_wit else [],
                                  notes="checked over geodesic intervals"))

    alpha = measure_alpha(model)
    rep.entries.append(AxiomEntry("partial-realization", True,
                                  {"alpha_pr": float(alpha)}))

    theta = _theta_table(model)
    rep.entries.append(AxiomEntry("uniqueness", True, {"theta_u": theta}))
    return rep


def _audit_large_links(model, E):
    lat = model.lattice
    lam, witness = 1.0, None
    n = len(model.space)
    for W in lat.elements:
        nested = [T for T in lat.below(W) if T != W]
        if not nested:
            continue
        dW = model.pair_matrix(W).astype(np.float64)
        bigs = {T: model.pair_matrix(T) >= E for T in nested}
        fam = np.zeros((n, n), dtype=np.int64)
        rho_req = np.zeros((n, n), dtype=np.int64)
        for T in nested:
            mask = bigs[T].copy()
            for T2 in nested:
                if T2 != T and lat.properly_nested(T, T2):
                    mask &= ~bigs[T2]
            if not mask.any():
                continue
            fam += mask
            arr = model.dist_to_set_array(W, model.rho_set[(T, W)])
            rho_req = np.maximum(rho_req, np.where(mask, arr[:, None], 0))
        need = np.maximum(fam, rho_req).astype(np.float64) / (dW + 1.0)
        m = float(need.max())
        if m > lam:
            i, j = np.unravel_index(int(need.argmax()), need.shape)
            lam = m
            witness = (W, model.space.vertices[i], model.space.vertices[j])
    return lam, witness


def _audit_bgi(model):
    """Interval variant: for each properly nested pair and each endpoint pair
    in the ambient model, E must exceed min(distance from the interval to the
    rho set, diameter of the interval's image under the downward map)."""
    lat = model.lattice
    e_bgi, witness = 0, None
    for (v, w) in sorted(lat._nest, key=lambda p: (vkey(p[0]), vkey(p[1]))):
        CW = model.hyp[w]
        CV = model.hyp[v]
        rho = sorted(model.rho_set[(v, w)], key=vkey)
        rho_idx = CW.idx(rho)
        to_rho = CW.dist[:, rho_idx].min(axis=1)
        rmap = model.rho_map[(v, w)]
        sids = np.empty(len(CW), dtype=np.int64)
        canon, sets = {}, []
        for i, p in enumerate(CW.vertices):
            key = tuple(sorted(rmap(p), key=vkey))
            if key not in canon:
                canon[key] = len(sets)
                sets.append(rmap(p))
            sids[i] = canon[key]
        k = len(sets)
        M2 = np.zeros((k, k), dtype=np.int64)
        for a in range(k):
            for b in range(a, k):
                M2[a, b] = M2[b, a] = CV.dset(sets[a], sets[b])
        sidmask = np.zeros((k, len(CW)), dtype=bool)
        sidmask[sids, np.arange(len(CW))] = True
        D = CW.dist
        for a in range(len(CW)):
            on = D[a][None, :] + D == D[a][:, None]   # on[b, v]: v on a geodesic a..b
            gapv = np.where(on, to_rho[None, :], np.iinfo(np.int64).max).min(axis=1)
            present = (on @ sidmask.T) > 0            # present[b, s]
            diam = np.zeros(len(CW), dtype=np.int64)
            for s in range(k):
                for t in range(s, k):
                    if M2[s, t] > 0:
                        both = present[:, s] & present[:, t]
                        if both.any():
                            diam[both] = np.maximum(diam[both], M2[s, t])
            vals = np.minimum(gapv, diam)
            m = int(vals.max())
            if m > e_bgi:
                e_bgi = m
                witness = (v, w, CW.vertices[a], CW.vertices[int(vals.argmax())])
    return e_bgi, witness


def _theta_table(model):
    stack = np.stack([model.pair_matrix(U) for U in model.elements])
    m = stack.max(axis=0)
    D = model.space.dist
    table = {}
    for kappa in range(0, int(m.max()) + 2):
        small = m < kappa
        table[kappa] = int(D[small].max()) + 1 if small.any() else 0
    return table


def normalize(model, radius=1):
    """Restrict each hyperbolic model to a neighborhood of the projection
    image (plus all rho markers living there); projections of finite models
    can always be assumed coarsely surjective, this enforces it."""
    new_hyp, new_proj, new_rset, new_rmap = {}, {}, {}, {}
    for U in model.elements:
        CU = model.hyp[U]
        keep = set(CU.neighborhood(model.proj[U].image(), radius))
        for (a, b), S in model.rho_set.items():
            if b == U:
                keep |= set(S)
        sub = CU.subspace(keep)
        new_hyp[U] = sub
        new_proj[U] = CoarseMap(model.space, sub,
                                {v: model.proj[U](v) for v in model.space.vertices},
                                name=model.proj[U].name)
    for (a, b), S in model.rho_set.items():
        new_rset[(a, b)] = frozenset(S)
    for (v, w), rmap in model.rho_map.items():
        CW, CV = new_hyp[w], new_hyp[v]
        imgs = {}
        for p in CW.vertices:
            img = set(rmap(p)) & set(CV.vertices)
            if not img:
                old = sorted(rmap(p), key=vkey)
                img = {min(CV.vertices,
                           key=lambda q: (model.hyp[v].gap([q], old), vkey(q)))}
            imgs[p] = frozenset(img)
        new_rmap[(v, w)] = CoarseMap(CW, CV, imgs, name=rmap.name)
    return HHSModel(model.space, model.lattice, new_hyp, new_proj,
                    new_rset, new_rmap, name=model.name + "|norm")
