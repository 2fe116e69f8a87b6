"""Acceptance suite: the ten exit criteria, one printed line per criterion.

Each criterion function returns (ok, detail) and is wrapped both as a
pytest test and in a __main__ runner; tolerances are pinned here, nothing
is deferred to later calibration. Runtime bounds are part of the criteria
and are asserted.
"""

import time

import pytest

from hhspace import fixtures
from hhspace.cli import main as cli_main
from hhspace.embedding import probe_embedding, verify_embedding
from hhspace.model import (audit_axioms, concretize, distance_formula_fit,
                           trivial_model)
from hhspace.spaces import path_graph
from hhspace.treecombine import (ComparisonNotUniform, audit_combined,
                                 build_combined, combined_wedge_table)

_cache = {}


def _window(name):
    if name not in _cache:
        if name == "free":
            _cache[name] = fixtures.free_product_z2_z3(2)
        elif name == "raag":
            _cache[name] = fixtures.raag_path(2)
    return _cache[name]


def _audit(name):
    key = name + ":audit"
    if key not in _cache:
        _cache[key] = audit_combined(_window(name).combined)
    return _cache[key]


def criterion_1():
    """Direct-product conformance: exact 5-element relation table."""
    t0 = time.time()
    from hhspace.graphproduct import direct_product_structure
    a = trivial_model(path_graph(0, 1), elt="S1", name="A")
    b = trivial_model(path_graph(0, 2), elt="S2", name="B")
    m = direct_product_structure(a, b)
    lat = m.lattice
    s1, s2 = ("l", "S1"), ("r", "S2")
    v1, v2 = ("V", s1), ("V", s2)
    table_ok = (set(lat.elements) == {s1, s2, v1, v2, ("S",)}
                and lat.orthogonal(s1, s2)
                and lat.properly_nested(s1, v2)
                and lat.properly_nested(s2, v1)
                and lat.orthogonal(s1, v1) and lat.orthogonal(s2, v2)
                and lat.transverse(v1, v2)
                and all(lat.properly_nested(e, ("S",))
                        for e in lat.elements if e != ("S",)))
    checks_ok = (lat.validate_relations().ok
                 and lat.verify_intersection_property().ok
                 and lat.verify_clean_containers().ok
                 and lat.top_container(s1) == v1)
    elapsed = time.time() - t0
    ok = table_ok and checks_ok and elapsed < 1.0
    return ok, "relation table %s, checks %s, %.2fs (< 1s)" % (
        table_ok, checks_ok, elapsed)


def criterion_2():
    """Distance-formula exactness on the 5x7 grid at threshold 1."""
    t0 = time.time()
    m = fixtures.grid_product(5, 7)
    fit = distance_formula_fit(m, 1)
    elapsed = time.time() - t0
    ok = (fit.K, fit.C) == (1.0, 0.0) and elapsed < 5.0
    return ok, "K=%g C=%g (want 1, 0), %.2fs (< 5s)" % (fit.K, fit.C, elapsed)


def criterion_3():
    """Combined audits of both windows with the complexity bound and the
    container identities exact."""
    details = []
    ok = True
    for name in ("free", "raag"):
        t0 = time.time()
        res = _window(name)
        rep = _audit(name)
        elapsed = time.time() - t0
        entry = rep.entry("combined-complexity")
        chi = entry.constants["complexity"]
        chi1 = entry.constants["class_complexity"]
        chiv = entry.constants["max_vertex_complexity"]
        comb = res.combined
        lat = comb.model.lattice
        containers_ok = all(
            lat.top_container(cls.id) == comb.support_of[cls.id]
            and lat.top_container(comb.support_of[cls.id]) == cls.id
            for cls in comb.classes)
        this = (rep.ok and chi <= 2 * chi1 + 1 and chi1 <= chiv + 1
                and containers_ok and elapsed < 60.0)
        ok = ok and this
        details.append("%s: audit %s, chi=%d <= 2*%d+1, containers %s, %.1fs"
                       % (name, rep.ok, chi, chi1, containers_ok, elapsed))
    return ok, "; ".join(details)


def criterion_4():
    """Large-links support-count bound, zero violations on both windows."""
    details = []
    ok = True
    for name in ("free", "raag"):
        entry = _audit(name).entry("large-links-support-count")
        ok = ok and entry.ok and entry.constants["violations"] == 0
        details.append("%s: %d violations" % (name, entry.constants["violations"]))
    return ok, "; ".join(details)


def criterion_5():
    """Support laws on all tree fixtures, zero violations."""
    details = []
    ok = True
    combos = [("free", _window("free").combined),
              ("raag", _window("raag").combined),
              ("bs-r1", build_combined(fixtures.bs_window(2, 1)))]
    for name, comb in combos:
        entry_ok = True
        lat = comb.model.lattice
        for c1 in comb.classes:
            for c2 in comb.classes:
                if c1.id == c2.id:
                    continue
                if lat.properly_nested(c1.id, c2.id):
                    entry_ok = entry_ok and (c2.support <= c1.support)
                if comb.decorated and c2.support <= c1.support:
                    entry_ok = entry_ok and lat.nested(c1.id, c2.id)
        if comb.decorated:
            supports = [cls.support for cls in comb.classes]
            entry_ok = entry_ok and len(supports) == len(set(supports))
        _, joins, wrep = combined_wedge_table(comb)
        join_ok = not any(v.rule == "join-support-identity"
                          for v in wrep.violations)
        ok = ok and entry_ok and join_ok and comb.decorated
        details.append("%s: laws %s, join-support %s, decorated %s"
                       % (name, entry_ok, join_ok, comb.decorated))
    return ok, "; ".join(details)


def criterion_6():
    """Joint strict degradation of the embedding probe on the distortion
    family, with exact image lengths."""
    values = []
    lengths_ok = True
    for r in (2, 3, 4, 5, 6):
        emb = fixtures.hagen(r)
        assert verify_embedding(emb).ok
        pr = probe_embedding(emb)
        values.append((pr.lipschitz[0], pr.qi[0], pr.outside_diam_proper))
        for m in range(r):
            if emb.target.space.dset(emb.space_map(m),
                                     emb.space_map(m + 1)) != 2 * m + 2:
                lengths_ok = False
    increasing = all(a[i] < b[i] for a, b in zip(values, values[1:])
                     for i in range(3))
    ok = increasing and lengths_ok
    return ok, "rows %s strictly increasing %s, lengths 2m+2 exact %s" % (
        values, increasing, lengths_ok)


def criterion_7():
    """Bounded probe on the factor inclusion across window radii 1..3:
    all five measurements radius-independent, the region distance within
    the reported bound, the markers within Hausdorff 1 of the image
    projections."""
    ok = True
    rows = []
    for r in (1, 2, 3):
        pr = probe_embedding(fixtures.factor_inclusion(r))
        this = (pr.lipschitz == (1.0, 0.0)
                and pr.qi == (1.0, 0.0)
                and max(pr.gate_defects) <= 1.0
                and pr.pullback_audit.ok
                and pr.outside_diam == 0.0
                and pr.region_distance <= pr.region_bound
                and pr.rho_coincidence_max <= 1.0
                and pr.hausdorff <= pr.hausdorff_bound)
        ok = ok and this
        rows.append("r%d: lip=%s gates=%s out=%g region %g<=%g rho<=%g haus %g<=%g"
                    % (r, pr.lipschitz, pr.gate_defects, pr.outside_diam,
                       pr.region_distance, pr.region_bound,
                       pr.rho_coincidence_max, pr.hausdorff, pr.hausdorff_bound))
    return ok, "; ".join(rows)


def criterion_8():
    """Counterexample detection: the distortion window fails the uniformity
    screen from radius 3 on, with doubling measured constants."""
    details = []
    ok = True
    for radius in (3, 4):
        try:
            build_combined(fixtures.bs_window(2, radius))
            ok = False
            details.append("radius %d: no error" % radius)
            continue
        except ComparisonNotUniform as exc:
            by_d = {}
            for (_, _, d, K, _) in exc.table:
                by_d[d] = max(by_d.get(d, 0), K)
            growth = all(by_d[d] >= 2 ** d / 2 for d in range(2, radius + 1))
            ok = ok and growth
            details.append("radius %d: detected, constants %s" %
                           (radius, {d: by_d[d] for d in sorted(by_d)}))
    code = cli_main(["examples", "bs12-window", "--radius", "4",
                     "--out", "/tmp/hhspace-acceptance"])
    ok = ok and code == 1
    details.append("cli exit %d (want 1)" % code)
    return ok, "; ".join(details)


def criterion_9():
    """Certification chain of the full recursion on the path graph."""
    t0 = time.time()
    res = _window("raag")
    elapsed = time.time() - t0
    levels_ok = all(lvl.ip_ok and lvl.cc_ok
                    and all(i["full_ok"] and i["hq_ok"] and i["iso_ok"]
                            for i in lvl.inclusions)
                    for lvl in res.cert.levels)
    ok = res.cert.ok and levels_ok and elapsed < 300.0
    return ok, "%d levels, all checks %s, %.1fs (< 300s)" % (
        len(res.cert.levels), levels_ok, elapsed)


def criterion_10():
    """Concretization drops exactly the classes outside the support core
    and the space stays within the measured neighborhood of the core
    region."""
    m = fixtures.bounded_factor_product(7)
    res = concretize(m)
    s1 = ("l", "S1")
    expected_removed = {e for e in m.lattice.elements
                        if e not in m.lattice.below(s1)}
    ok = (res.changed and res.core == s1
          and set(res.removed) == expected_removed
          and res.neighborhood == 0
          and audit_axioms(res.model).ok)
    return ok, "core %r, removed %d as expected %s, neighborhood %d" % (
        res.core, len(res.removed), set(res.removed) == expected_removed,
        res.neighborhood)


CRITERIA = [
    (1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4),
    (5, criterion_5), (6, criterion_6), (7, criterion_7), (8, criterion_8),
    (9, criterion_9), (10, criterion_10),
]


def _report(n, fn):
    ok, detail = fn()
    print("[%s] criterion %2d: %s" % ("PASS" if ok else "FAIL", n, detail))
    return ok


@pytest.mark.parametrize("n,fn", CRITERIA, ids=["criterion-%02d" % n
                                                for n, _ in CRITERIA])
def test_acceptance(n, fn):
    assert _report(n, fn)


if __name__ == "__main__":
    import sys
    results = [_report(n, fn) for n, fn in CRITERIA]
    sys.exit(0 if all(results) else 1)
