import json

import pytest

from oracles import spanning_tree_count
from sandpile.graph import (
    SINK,
    GraphError,
    MorphismError,
    SinkedGraph,
    diamond_points,
    embed,
    from_edge_list,
    interior_laplacian,
    is_convex_domain,
    lattice_domain,
    path_graph,
    rectangle_graph,
    reduced_laplacian,
    translate_embedding,
)
from sandpile.linalg import IntMatrix, det_exact


def test_rectangle_examples():
    g = rectangle_graph(2, 2)
    assert g.vertices == ((1, 1),) and g.sink_edges == (4,)
    assert abs(det_exact(g.laplacian)) == 4
    g = rectangle_graph(2, 3)
    assert g.sink_edges == (3, 3) and g.adjacency[0][1] == 1
    assert g.det == 15 == spanning_tree_count(g)
    g = rectangle_graph(3, 3)
    assert g.sink_edges == (2, 2, 2, 2)
    assert g.det == 192 == spanning_tree_count(g)
    assert reduced_laplacian(g) == IntMatrix([[-4, 1, 1, 0], [1, -4, 0, 1], [1, 0, -4, 1], [0, 1, 1, -4]])


def test_rectangle_vertex_order_is_row_major():
    g = rectangle_graph(4, 3)
    assert g.vertices == ((1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2))


@pytest.mark.parametrize("p,q", [(1, 3), (3, 0)])
def test_rectangle_too_small(p, q):
    with pytest.raises(GraphError):
        rectangle_graph(p, q)


def test_path_examples():
    assert path_graph(3).det == 3
    g = path_graph(2)
    assert len(g) == 1 and g.sink_edges == (2,) and g.det == 2
    assert path_graph(10).det == 10
    assert reduced_laplacian(path_graph(3)) == IntMatrix([[-2, 1], [1, -2]])
    assert all(d == 2 for d in path_graph(7).degrees)
    with pytest.raises(GraphError):
        path_graph(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_path_kirchhoff(n):
    assert path_graph(n).det == spanning_tree_count(path_graph(n))


def test_lattice_domain_examples():
    g = lattice_domain({(0, 0)})
    assert g.sink_edges == (4,)
    tromino = lattice_domain({(0, 0), (1, 0), (0, 1)})
    assert len(tromino) == 3
    for i in range(3):
        assert tromino.sink_edges[i] == 4 - sum(tromino.adjacency[i])
    d = lattice_domain(diamond_points(1))
    assert len(d) == 5 and len(d.interior) == 1
    with pytest.raises(GraphError):
        lattice_domain({(0, 0), (2, 0)})


def test_from_edge_list():
    tri = from_edge_list([("a", "b"), ("b", "c"), ("c", "a"), ("a", SINK)])
    assert len(tri.boundary) == 1
    double = from_edge_list([(0, 1, 2), (0, SINK), (1, SINK)])
    assert double.adjacency[0][1] == 2
    g = from_edge_list([((1, 1), SINK, 4)])
    r = rectangle_graph(2, 2)
    assert (g.vertices, g.adjacency, g.sink_edges) == (r.vertices, r.adjacency, r.sink_edges)
    with pytest.raises(GraphError):
        from_edge_list([(0, 0), (0, SINK)])
    with pytest.raises(GraphError):
        from_edge_list([(0, 1)])
    with pytest.raises(GraphError):
        from_edge_list([(0, 1), (2, 3), (0, SINK)])


def test_interior_laplacian():
    assert interior_laplacian(rectangle_graph(2, 2)).shape == (0, 1)
    g = rectangle_graph(4, 4)
    D0 = interior_laplacian(g)
    assert D0.rows == 1 and g.vertices[g.interior[0]] == (2, 2)
    assert interior_laplacian(path_graph(4)) == IntMatrix([[1, -2, 1]])


def test_graph_invariants(small_graphs):
    for g in small_graphs + [rectangle_graph(5, 4), lattice_domain(diamond_points(2))]:
        L = g.laplacian
        assert L == L.T
        assert [sum(row) for row in L] == [-s for s in g.sink_edges]
        assert g.det > 0
        assert g.apply_laplacian([1] * len(g)) == tuple(-s for s in g.sink_edges)
    for g in (rectangle_graph(5, 4), lattice_domain(diamond_points(2))):
        assert set(g.degrees) == {4}


def test_json_roundtrip():
    for g in (rectangle_graph(3, 4), path_graph(5), from_edge_list([(0, 1, 2), (1, SINK)])):
        text = g.dumps()
        assert SinkedGraph.from_json(json.loads(text)) == g
        assert g.dumps() == text
    with pytest.raises(GraphError):
        SinkedGraph.from_json({"vertices": [0], "adjacency": [], "sink": []})
    with pytest.raises(GraphError):
        SinkedGraph.from_json({"adjacency": []})


def test_embeddings():
    small, big = rectangle_graph(2, 2), rectangle_graph(4, 2)
    e = translate_embedding(small, big)
    assert e.vertex_map == (big.index[(1, 1)],)
    embed(rectangle_graph(2, 3), rectangle_graph(4, 6))
    embed(rectangle_graph(3, 3), rectangle_graph(6, 9))
    with pytest.raises(MorphismError):
        embed(rectangle_graph(2, 3), rectangle_graph(4, 4), {(1, 1): (1, 1), (1, 2): (3, 3)})
    with pytest.raises(MorphismError):
        embed(path_graph(3), path_graph(5), {1: 1, 2: 1})
    with pytest.raises(MorphismError):
        # interior vertex of a path has no sink edges but the corner has two
        embed(path_graph(4), rectangle_graph(4, 4), {1: (1, 1), 2: (2, 1), 3: (3, 1)})


def test_convexity():
    assert is_convex_domain(diamond_points(2))
    assert is_convex_domain({(0, 0), (1, 0), (2, 0)})
    assert is_convex_domain({(x, y) for x in range(3) for y in range(3) if x + y <= 2})
    assert not is_convex_domain({(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)})
    assert not is_convex_domain({(0, 0), (2, 0)})
    assert is_convex_domain({(0, 0), (1, 0), (1, 1), (2, 1)})
