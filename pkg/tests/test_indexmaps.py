import pytest

from hhspace.indexmaps import (DomainMismatch, IndexMap, verify_fullness,
                               verify_index_map, verify_wedge_join_commute)
from hhspace.lattice import IndexLattice

from test_lattice import product_of_points_lattice


def factor_lattice():
    return IndexLattice(["S1"], "S1", name="factor")


def factor_inclusion():
    src = factor_lattice()
    tgt = product_of_points_lattice()
    return IndexMap(src, tgt, {"S1": "S1"}, name="factor-incl")


def test_identity_passes_everything():
    lat = product_of_points_lattice()
    m = IndexMap.identity(lat)
    assert verify_index_map(m).ok
    assert verify_fullness(m).ok
    assert verify_wedge_join_commute(m).ok


def test_factor_inclusion_full():
    m = factor_inclusion()
    assert verify_index_map(m).ok
    # below(S1) in the product lattice is just {S1}
    assert verify_fullness(m).ok
    assert verify_wedge_join_commute(m).ok


def test_relation_breaking_map_detected():
    src = IndexLattice(["A", "B", "S"], "S",
                       nested_pairs=[("A", "S"), ("B", "S")],
                       orth_pairs=[("A", "B")])
    tgt = IndexLattice(["A", "B", "S"], "S",
                       nested_pairs=[("A", "S"), ("B", "S")])
    m = IndexMap(src, tgt, {"A": "A", "B": "B", "S": "S"})
    rep = verify_index_map(m)
    assert any(v.rule == "relation-changed" for v in rep.violations)


def test_non_injective_detected():
    src = IndexLattice(["A", "B", "S"], "S",
                       nested_pairs=[("A", "S"), ("B", "S")],
                       trans_pairs=[("A", "B")])
    m = IndexMap(src, src, {"A": "A", "B": "A", "S": "S"})
    rep = verify_index_map(m)
    assert any(v.rule == "not-injective" for v in rep.violations)


def test_fullness_failure_extra_element():
    # target has one extra element below the image of the source maximal
    src = IndexLattice(["A", "S"], "S", nested_pairs=[("A", "S")])
    tgt = IndexLattice(["A", "X", "S"], "S",
                       nested_pairs=[("A", "S"), ("X", "S"), ("X", "A")])
    m = IndexMap(src, tgt, {"A": "A", "S": "S"})
    rep = verify_fullness(m)
    assert any(v.rule == "missing-preimage" and v.witness == ("X",)
               for v in rep.violations)


def test_compose_and_mismatch():
    lat = product_of_points_lattice()
    ident = IndexMap.identity(lat)
    assert ident.compose(ident).mapping == ident.mapping
    other = IndexMap.identity(factor_lattice())
    with pytest.raises(DomainMismatch):
        other.compose(ident)


def test_fullness_composes():
    # factor inclusion followed by identity stays full
    m = factor_inclusion()
    ident = IndexMap.identity(m.target)
    comp = m.compose(ident)
    assert verify_fullness(comp).ok


def test_commutation_failure_without_fullness():
    # drop the wedge witness from the image: wedge of images becomes the
    # missing element, so commutation fails
    src = IndexLattice(["A", "B", "S"], "S",
                       nested_pairs=[("A", "S"), ("B", "S")],
                       trans_pairs=[("A", "B")])
    tgt = IndexLattice(["A", "B", "W", "S"], "S",
                       nested_pairs=[("W", "A"), ("W", "B"),
                                     ("A", "S"), ("B", "S"), ("W", "S")])
    m = IndexMap(src, tgt, {"A": "A", "B": "B", "S": "S"})
    rep = verify_wedge_join_commute(m)
    assert any(v.rule == "wedge-not-preserved" for v in rep.violations)
