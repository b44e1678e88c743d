import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

import abdkit

FIXTURES = Path(__file__).resolve().parents[2] / "data" / "fixtures"


def tree(name):
    return abdkit.merge_tree_from_json((FIXTURES / name).read_text())


def graph(name):
    return abdkit.load_graph(str(FIXTURES / name))


def test_branching_counterexample():
    x, y, z = (tree(f"triangle_violation_{c}.json") for c in "xyz")
    assert abdkit.branching_distance(x, y) == 5
    assert abdkit.branching_distance(y, z) == 3
    assert abdkit.branching_distance(x, z) == 1
    assert abdkit.brute_force_distance(x, y) == 5
    assert abdkit.branching_distance(x, y, engine="baseline") == 5
    assert abs(abdkit.branching_distance(x, y, mode="tolerance", tol=1e-6) - 5) <= 1e-6


def test_abd_counterexample():
    g, h, j = (graph(f"abd_violation_{c}.json") for c in "ghj")
    assert abdkit.average_branching_distance(g, h, frames=1) == 6.5
    assert abdkit.average_branching_distance(g, j, frames=1) == 2.5
    assert abdkit.average_branching_distance(h, j, frames=1) == 3


def test_graph_roundtrip_and_errors():
    g = abdkit.Graph([(0, 0.0, 0.0), (1, 1.0, 0.0), (2, 0.0, 1.0)], [(0, 1), (1, 2), (2, 0)])
    assert len(g.vertices) == 3 and len(g.edges) == 3
    assert abdkit.graph_from_json(g.to_json()) == g
    with pytest.raises(abdkit.InputError, match="self-loop"):
        abdkit.Graph([(0, 0.0, 0.0)], [(0, 0)])
    with pytest.raises(abdkit.InputError):
        abdkit.load_graph("/nonexistent.json")


def test_merge_tree_of_w_path():
    ys = [0, 5, 1, 6, 2]
    g = abdkit.Graph([(i, float(i), float(y)) for i, y in enumerate(ys)], [(i - 1, i) for i in range(1, 5)])
    mt = abdkit.merge_tree(g)
    assert mt.size == 5 and mt.leaf_count == 3
    assert abdkit.merge_tree(g, normalize="median").values != mt.values


def test_pipeline_svg_is_well_formed():
    graphs = [abdkit.synthetic_shape(kind, seed=s) for kind in ("star", "zigzag") for s in range(3)]
    labels = [f"{kind}_{s}" for kind in ("star", "zigzag") for s in range(3)]
    d = abdkit.distance_matrix(graphs, labels, frames=6, jobs=2)
    assert d.labels == labels
    rows = d.rows()
    assert all(rows[i][i] == 0 for i in range(6))
    assert all(rows[i][j] == rows[j][i] for i in range(6) for j in range(6))
    assert abdkit.matrix_from_csv(d.to_csv()).rows() == rows

    dend = abdkit.single_linkage(d)
    assert len(dend.steps) == 5
    assert dend.to_newick().endswith(";\n") or dend.to_newick().endswith(";")
    ET.fromstring(dend.to_svg())
    assert len(set(dend.cut(2))) == 2

    emb = abdkit.classical_mds(d)
    assert len(emb.coords) == 6 and all(len(c) == 2 for c in emb.coords)
    root = ET.fromstring(emb.to_svg([0, 0, 0, 1, 1, 1]))
    assert len(root.findall(".//{http://www.w3.org/2000/svg}circle")) == 6


def test_mds_recovers_collinear_points():
    xs = [0.0, 1.0, 3.0, 7.0]
    d = abdkit.DistanceMatrix(["a", "b", "c", "d"], [[abs(a - b) for b in xs] for a in xs])
    emb = abdkit.classical_mds(d, 1)
    got = [c[0] for c in emb.coords]
    for i in range(4):
        for j in range(4):
            assert math.isclose(abs(got[i] - got[j]), abs(xs[i] - xs[j]), abs_tol=1e-9)


def test_verify_runs():
    ok, text = abdkit.verify(trials=5)
    assert ok, text
    assert "PASS" in text
