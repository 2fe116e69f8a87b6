import json

from hhspace import serialize
from hhspace.cli import main
from hhspace.fixtures import bs_window, factor_inclusion, grid_product
from hhspace.graphproduct import ProductSpec


def run(args):
    return main([str(a) for a in args])


def test_examples_fixture_b(tmp_path):
    assert run(["--out", tmp_path, "examples", "fixture-b-product"]) == 0
    doc = json.loads((tmp_path / "fixture-b-product.json").read_text())
    assert doc["elements"] == 5
    assert doc["audit_ok"] and doc["intersection_property"] and doc["clean_containers"]


def test_examples_bs12_fails_with_witness(tmp_path):
    assert run(["--out", tmp_path, "examples", "bs12-window", "--radius", 4]) == 1
    doc = json.loads((tmp_path / "failure.json").read_text())
    assert doc["error"] == "ComparisonNotUniform"
    by_d = {}
    for _, _, d, K, C in doc["table"]:
        by_d[d] = max(by_d.get(d, 0), K)
    for d in (2, 3, 4):
        assert by_d[d] >= 2 ** d / 2


def test_examples_hagen(tmp_path):
    assert run(["--out", tmp_path, "examples", "hagen-f2", "--radius", 4]) == 0
    doc = json.loads((tmp_path / "hagen-f2.json").read_text())
    rows = doc["family"]
    assert [r["radius"] for r in rows] == [2, 3, 4]
    assert all(r["segment_lengths_exact"] for r in rows)


def test_audit_command_roundtrip(tmp_path):
    model = grid_product(3, 4)
    path = tmp_path / "model.json"
    path.write_text(serialize.dumps(serialize.model_to_json(model)))
    assert run(["--out", tmp_path, "audit", path]) == 0
    doc = json.loads((tmp_path / "audit.json").read_text())
    assert doc["ok"]


def test_combine_command_detects_counterexample(tmp_path):
    tree = bs_window(2, 3)
    path = tmp_path / "tree.json"
    path.write_text(serialize.dumps(serialize.tree_to_json(tree)))
    assert run(["--out", tmp_path, "combine", path]) == 1
    doc = json.loads((tmp_path / "failure.json").read_text())
    assert doc["error"] == "ComparisonNotUniform"


def test_combine_command_succeeds_on_small_window(tmp_path):
    tree = bs_window(2, 1)
    path = tmp_path / "tree.json"
    path.write_text(serialize.dumps(serialize.tree_to_json(tree)))
    assert run(["--out", tmp_path, "combine", path]) == 0


def test_product_command(tmp_path):
    spec = ProductSpec(("a", "b"), frozenset(),
                       {"a": ("cyclic", 2), "b": ("cyclic", 3)}, window_radius=2)
    path = tmp_path / "spec.json"
    path.write_text(serialize.dumps(serialize.spec_to_json(spec)))
    assert run(["--out", tmp_path, "product", path]) == 0
    doc = json.loads((tmp_path / "product.json").read_text())
    assert doc["cert"]["ok"]


def test_distance_formula_command(tmp_path):
    model = grid_product(3, 4)
    path = tmp_path / "model.json"
    path.write_text(serialize.dumps(serialize.model_to_json(model)))
    assert run(["--out", tmp_path, "distance-formula", path, "--s", 2]) == 0
    doc = json.loads((tmp_path / "distance_formula.json").read_text())
    assert doc["fits"][0] == {"s": 1, "K": 1.0, "C": 0.0,
                              "worst_pair": doc["fits"][0]["worst_pair"]}


def test_probe_command(tmp_path):
    emb = factor_inclusion(2)
    path = tmp_path / "emb.json"
    path.write_text(serialize.dumps(serialize.embedding_to_json(emb)))
    assert run(["--out", tmp_path, "probe-theorem-b", path]) == 0
    doc = json.loads((tmp_path / "probe.json").read_text())
    assert doc["probe"]["lipschitz"] == [1.0, 0.0]


def test_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"vertices\": 3}")
    assert run(["audit", bad]) == 2


def test_reports_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(["--out", out1, "examples", "fixture-b-product"]) == 0
    assert run(["--out", out2, "examples", "fixture-b-product"]) == 0
    assert (out1 / "fixture-b-product.json").read_bytes() == \
        (out2 / "fixture-b-product.json").read_bytes()


def test_dot_format(tmp_path):
    assert run(["--out", tmp_path, "--format", "dot", "examples",
                "fixture-b-product"]) == 0
    text = (tmp_path / "fixture-b-product.dot").read_text()
    assert "digraph" in text


def test_tree_json_roundtrip():
    tree = bs_window(2, 2)
    doc = json.loads(serialize.dumps(serialize.tree_to_json(tree)))
    t2 = serialize.tree_from_json(doc)
    assert t2.vertices == tree.vertices
    assert t2.edges == tree.edges
    from hhspace.treecombine import equivalence_classes
    assert len(equivalence_classes(t2)) == 1
