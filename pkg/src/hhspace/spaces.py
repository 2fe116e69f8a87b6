"""Finite metric spaces and set-valued coarse maps.

A FiniteSpace is either a connected graph with the shortest-path metric
(unit edge lengths) or an explicit metric table (used for subspaces, which
carry the restricted ambient metric rather than the induced path metric).
All distance conventions used by the auditors live here:

- point distances are integers from the BFS table,
- the distance between two point-sets A, B is diam(A | B), the diameter of
  their union (the usual convention for projection distances),
- ``gap`` is the minimal distance between sets, used for neighborhoods,
  gates and Hausdorff distances.
"""

from collections import deque

import numpy as np


def vkey(v):
    """Total deterministic ordering key for vertex/element ids of mixed types."""
    if isinstance(v, bool):
        return ("b", v)
    if isinstance(v, int):
        return ("i", v)
    if isinstance(v, float):
        return ("f", v)
    if isinstance(v, str):
        return ("s", v)
    if isinstance(v, tuple):
        return ("t", tuple(vkey(x) for x in v))
    if isinstance(v, frozenset):
        return ("fs", tuple(sorted(vkey(x) for x in v)))
    return ("r", repr(v))


def sorted_vertices(vs):
    return tuple(sorted(set(vs), key=vkey))


class FiniteSpace:
    """A finite connected metric space with integer distances."""

    def __init__(self, vertices, edges=None, dist=None, name=""):
        self.name = name
        self.vertices = sorted_vertices(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        if n == 0:
            raise ValueError("a FiniteSpace needs at least one vertex")
        if dist is not None:
            self.edges = tuple(edges) if edges is not None else None
            self.dist = np.asarray(dist, dtype=np.int64)
            if self.dist.shape != (n, n):
                raise ValueError("distance table shape mismatch")
        else:
            es = []
            adj = [[] for _ in range(n)]
            for a, b in edges or ():
                ia, ib = self.index[a], self.index[b]
                if ia == ib:
                    continue
                es.append((min(ia, ib), max(ia, ib)))
                adj[ia].append(ib)
                adj[ib].append(ia)
            self.edges = tuple(sorted(set(es)))
            self.dist = _bfs_all_pairs(n, adj)
            if (self.dist < 0).any():
                raise ValueError("graph is not connected")

    @classmethod
    def from_matrix(cls, vertices, table, name=""):
        """Build from an explicit metric; ``table`` rows follow ``vertices`` order."""
        order = sorted_vertices(vertices)
        src = list(vertices)
        perm = [src.index(v) for v in order]
        m = np.asarray(table, dtype=np.int64)[np.ix_(perm, perm)]
        return cls(order, dist=m, name=name)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def idx(self, vs):
        return np.fromiter((self.index[v] for v in vs), dtype=np.int64, count=len(vs))

    def d(self, u, v):
        return int(self.dist[self.index[u], self.index[v]])

    def diam(self):
        return int(self.dist.max())

    def diam_set(self, A):
        if not A:
            return 0
        ii = self.idx(list(A))
        return int(self.dist[np.ix_(ii, ii)].max())

    def dset(self, A, B):
        """diam(A | B): the sup-convention distance between two point-sets."""
        return self.diam_set(set(A) | set(B))

    def gap(self, A, B):
        """min distance between two nonempty sets."""
        ia, ib = self.idx(list(A)), self.idx(list(B))
        return int(self.dist[np.ix_(ia, ib)].min())

    def hausdorff(self, A, B):
        ia, ib = self.idx(list(A)), self.idx(list(B))
        m = self.dist[np.ix_(ia, ib)]
        return int(max(m.min(axis=1).max(), m.min(axis=0).max()))

    def neighborhood(self, A, r):
        ia = self.idx(list(A))
        keep = (self.dist[:, ia].min(axis=1) <= r).nonzero()[0]
        return frozenset(self.vertices[i] for i in keep)

    def interval(self, u, v):
        """All vertices lying on some geodesic from u to v."""
        iu, iv = self.index[u], self.index[v]
        on = self.dist[iu] + self.dist[iv] == self.dist[iu, iv]
        return tuple(self.vertices[i] for i in on.nonzero()[0])

    def qc_constant(self, A):
        """Quasiconvexity constant of the subset A: the largest distance from a
        point on a geodesic between points of A back to A. Exact, because the
        union of all geodesics between u and v is the interval {w : d(u,w) +
        d(w,v) = d(u,v)}."""
        ia = self.idx(list(A))
        if len(ia) <= 1:
            return 0
        to_A = self.dist[:, ia].min(axis=1)
        best = 0
        for p in range(len(ia)):
            iu = ia[p]
            row_u = self.dist[iu]
            for q in range(p + 1, len(ia)):
                iv = ia[q]
                on = row_u + self.dist[iv] == row_u[iv]
                best = max(best, int(to_A[on].max()))
        return best

    def subspace(self, keep, name=""):
        """Metric subspace (restricted ambient metric, not induced path metric)."""
        ks = sorted_vertices(keep)
        ii = self.idx(list(ks))
        return FiniteSpace(ks, dist=self.dist[np.ix_(ii, ii)], name=name or self.name + "|sub")

    def relabel(self, fn, name=""):
        verts = [fn(v) for v in self.vertices]
        if len(set(verts)) != len(verts):
            raise ValueError("relabel is not injective")
        order = sorted(range(len(verts)), key=lambda i: vkey(verts[i]))
        m = self.dist[np.ix_(order, order)]
        return FiniteSpace([verts[i] for i in order], dist=m, name=name or self.name)

    def is_tree(self):
        return self.edges is not None and len(self.edges) == len(self.vertices) - 1

    def dot(self):
        lines = ["graph {"]
        for v in self.vertices:
            lines.append('  "%s";' % (v,))
        for a, b in self.edges or ():
            lines.append('  "%s" -- "%s";' % (self.vertices[a], self.vertices[b]))
        lines.append("}")
        return "\n".join(lines)


def _bfs_all_pairs(n, adj):
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            dx = row[x]
            for y in adj[x]:
                if row[y] < 0:
                    row[y] = dx + 1
                    q.append(y)
    return dist


def path_graph(lo, hi=None, label=None):
    """Path on integers lo..hi (or 0..lo-1 when hi is None)."""
    if hi is None:
        lo, hi = 0, lo - 1
    vs = list(range(lo, hi + 1))
    lab = label or (lambda k: k)
    return FiniteSpace([lab(k) for k in vs], [(lab(k), lab(k + 1)) for k in vs[:-1]])


def cycle_graph(n, label=None):
    lab = label or (lambda k: k)
    vs = [lab(k) for k in range(n)]
    es = [(vs[k], vs[(k + 1) % n]) for k in range(n)] if n > 1 else []
    return FiniteSpace(vs, es)


def single_point(v="*"):
    return FiniteSpace([v], [])


def product_graph(a, b, name=""):
    """Cartesian product graph: the l1 metric on pairs."""
    vs = [(x, y) for x in a.vertices for y in b.vertices]
    es = []
    for (ia, ib) in a.edges or ():
        for y in b.vertices:
            es.append(((a.vertices[ia], y), (a.vertices[ib], y)))
    for (ia, ib) in b.edges or ():
        for x in a.vertices:
            es.append(((x, b.vertices[ia]), (x, b.vertices[ib])))
    return FiniteSpace(vs, es, name=name)


def cone_off(space, subsets, name=""):
    """Cone off each named vertex subset: add a cone vertex adjacent to every
    vertex of the subset. Subset labels become vertices ("cone", label)."""
    if space.edges is None:
        raise ValueError("cone_off needs a graph-backed space")
    vs = list(space.vertices)
    es = [(space.vertices[a], space.vertices[b]) for a, b in space.edges]
    for label, sub in sorted(subsets.items(), key=lambda kv: vkey(kv[0])):
        c = ("cone", label)
        vs.append(c)
        for v in sorted_vertices(sub):
            es.append((c, v))
    return FiniteSpace(vs, es, name=name)


def four_point_delta(space):
    """Exact Gromov four-point hyperbolicity constant: the largest value of
    (largest - second largest)/2 over the three pair-sums of every 4-tuple."""
    D = space.dist.astype(np.float64)
    n = len(space)
    best = 0.0
    for i in range(n):
        di = D[i]
        for j in range(i + 1, n):
            s1 = D[i, j] + D
            s2 = di[:, None] + D[j][None, :]
            s3 = di[None, :] + D[j][:, None]
            top = np.maximum(s1, np.maximum(s2, s3))
            mid = s1 + s2 + s3 - top - np.minimum(s1, np.minimum(s2, s3))
            best = max(best, float((top - mid).max()))
    return best / 2.0


class CoarseMap:
    """Set-valued map between FiniteSpaces with bounded point images."""

    def __init__(self, domain, codomain, images, name=""):
        self.domain = domain
        self.codomain = codomain
        self.name = name
        self.images = {}
        for v in domain.vertices:
            img = images[v]
            if not img:
                raise ValueError("coarse map image must be nonempty at %r" % (v,))
            self.images[v] = frozenset(img)
        self._table = None

    @property
    def diam_bound(self):
        return max(self.codomain.diam_set(img) for img in self.images.values())

    def __call__(self, v):
        return self.images[v]

    def image_of_set(self, S):
        out = set()
        for v in S:
            out |= self.images[v]
        return frozenset(out)

    def image(self):
        return self.image_of_set(self.domain.vertices)

    @classmethod
    def single(cls, domain, codomain, fn, name=""):
        return cls(domain, codomain, {v: frozenset([fn(v)]) for v in domain.vertices}, name=name)

    @classmethod
    def identity(cls, space):
        return cls.single(space, space, lambda v: v, name="id")

    @classmethod
    def constant(cls, domain, codomain, points, name=""):
        pts = frozenset(points)
        return cls(domain, codomain, {v: pts for v in domain.vertices}, name=name)

    def compose(self, other):
        """other after self: domain -> self.codomain -> other.codomain."""
        if other.domain is not self.codomain:
            raise ValueError("composition domain mismatch")
        imgs = {v: other.image_of_set(self.images[v]) for v in self.domain.vertices}
        return CoarseMap(self.domain, other.codomain, imgs,
                         name="%s;%s" % (self.name, other.name))

    def quasi_inverse(self):
        """Closest-point preimage: y maps to the first (in vertex order) domain
        vertex whose image is closest to y."""
        imgs = {}
        for y in self.codomain.vertices:
            best_v, best_d = None, None
            for v in self.domain.vertices:
                d = self.codomain.gap(self.images[v], [y])
                if best_d is None or d < best_d:
                    best_v, best_d = v, d
            imgs[y] = frozenset([best_v])
        return CoarseMap(self.codomain, self.domain, imgs, name="inv:" + self.name)

    def set_table(self):
        """(sids, sets, M): per-domain-vertex id of its image set among the
        distinct image sets, and the matrix of pairwise sup-distances between
        distinct sets. Lets scans over vertex pairs run as numpy lookups."""
        if self._table is None:
            canon = {}
            sids = np.empty(len(self.domain), dtype=np.int64)
            sets = []
            for i, v in enumerate(self.domain.vertices):
                key = tuple(sorted(self.images[v], key=vkey))
                if key not in canon:
                    canon[key] = len(sets)
                    sets.append(self.images[v])
                sids[i] = canon[key]
            k = len(sets)
            M = np.zeros((k, k), dtype=np.int64)
            for a in range(k):
                for b in range(a, k):
                    M[a, b] = M[b, a] = self.codomain.dset(sets[a], sets[b])
            self._table = (sids, sets, M)
        return self._table

    def pair_distance_matrix(self):
        """T with T[x, y] = dset(f(x), f(y)) over domain vertex indices."""
        sids, _, M = self.set_table()
        return M[np.ix_(sids, sids)]


def coarse_map_constants(m):
    """Measured coarsely-lipschitz constants in the (K, K) convention:
    the least K with dset(f x, f y) <= K d(x, y) + K. Returns (1, 0) for
    1-lipschitz maps and (0, 0) for constant maps."""
    Dp = m.pair_distance_matrix().astype(np.float64)
    if Dp.max() == 0:
        return (0.0, 0.0)
    D = m.domain.dist.astype(np.float64)
    if (Dp <= D).all():
        return (1.0, 0.0)
    K = float((Dp / (D + 1.0)).max())
    return (K, K)


def qi_constants(m):
    """Quasi-isometric-embedding constants: max of the forward (K,K) constant
    and the reverse one (domain distance against image distance). Isometric
    maps measure (1, 0)."""
    Dp = m.pair_distance_matrix().astype(np.float64)
    D = m.domain.dist.astype(np.float64)
    if (Dp == D).all():
        return (1.0, 0.0)
    kf = (Dp / (D + 1.0)).max() if Dp.max() > 0 else 0.0
    kr = (D / (Dp + 1.0)).max()
    K = max(1.0, float(kf), float(kr))
    return (K, K)
