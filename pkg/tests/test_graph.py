from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings

from helpers import colored_graphs, graph
from p2be.graph import (
    BLUE,
    RED,
    ColoredGraph,
    Multigraph,
    bc_tree,
    biconnected_edge_blocks,
    connected_components,
    is_biconnected,
    parse_color,
)


def test_colors_parse_from_names_and_ints():
    assert parse_color("r") == parse_color("red") == parse_color(0) == RED
    assert parse_color("B") == parse_color(1) == BLUE
    with pytest.raises(ValueError):
        parse_color("g")


@pytest.mark.parametrize(
    "edges, colors",
    [
        (((0, 0),), (0,)),
        (((0, 1), (1, 0)), (0, 1)),
        (((0, 3),), (0,)),
        (((0, 1),), (2,)),
        (((0, 1),), ()),
    ],
)
def test_graph_rejects_malformed_input(edges, colors):
    with pytest.raises(ValueError):
        ColoredGraph(3, edges, colors)


def test_color_classes_and_mono():
    g = graph(3, [(0, 1, "r"), (1, 2, "b"), (0, 2, "r")])
    assert g.color_classes() == ([0, 2], [1])
    assert not g.is_monochromatic()
    assert graph(3, [(0, 1, 0), (1, 2, 0)]).is_monochromatic()


def test_induced_on_edges_relabels_locally():
    g = graph(5, [(0, 1, 0), (3, 4, 1), (1, 3, 0)])
    sub, verts, eids = g.induced_on_edges([2, 1])
    assert verts == [1, 3, 4]
    assert sorted(eids) == [1, 2]
    assert {tuple(sorted(verts[x] for x in e)) for e in sub.edges} == {(1, 3), (3, 4)}


def test_components_examples():
    two = graph(6, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
    assert connected_components(two) == [[0, 1, 2], [3, 4, 5]]
    assert connected_components(graph(0, [])) == []
    assert connected_components(graph(4, [(0, 1, 0), (1, 2, 0)])) == [[0, 1, 2], [3]]


def test_bc_tree_examples():
    tri = bc_tree(graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)]))
    assert len(tri.blocks) == 1 and tri.cutvertices == []

    bow = bc_tree(graph(5, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (2, 3, 1), (3, 4, 1), (2, 4, 1)]))
    assert len(bow.blocks) == 2 and bow.cutvertices == [2]
    assert sorted(bow.tree_edges()) == [(0, 2), (1, 2)]

    path = bc_tree(graph(4, [(0, 1, 0), (1, 2, 0), (2, 3, 0)]))
    assert len(path.blocks) == 3 and path.cutvertices == [1, 2]


def test_bc_tree_rejects_disconnected():
    with pytest.raises(ValueError):
        bc_tree(graph(4, [(0, 1, 0), (2, 3, 0)]))


def test_multigraph_keeps_parallel_edges():
    mg = Multigraph([0, 1], [(0, 1), (0, 1), (1, 0)])
    assert mg.m == 3
    assert mg.degree() == {0: 3, 1: 3}
    assert len(biconnected_edge_blocks(2, mg.edges)) == 1


@settings(max_examples=200, deadline=None)
@given(colored_graphs(max_n=9))
def test_blocks_match_networkx(g):
    ours = {frozenset(tuple(sorted(g.edges[e])) for e in blk) for blk in biconnected_edge_blocks(g.n, g.edges)}
    h = nx.Graph(list(g.edges))
    ref = {frozenset(tuple(sorted(e)) for e in comp) for comp in nx.biconnected_component_edges(h)}
    assert ours == ref


@settings(max_examples=200, deadline=None)
@given(colored_graphs(max_n=9))
def test_components_partition_vertices(g):
    comps = connected_components(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    assert sorted(map(sorted, comps)) == sorted(sorted(c) for c in nx.connected_components(h))


@settings(max_examples=150, deadline=None)
@given(colored_graphs(min_n=1, max_n=8))
def test_bc_tree_invariants(g):
    if len(connected_components(g)) != 1:
        return
    t = bc_tree(g)
    assert sorted(e for b in t.blocks for e in b) == list(range(g.m))
    cut = {v for v, bs in t.vertex_blocks.items() if len(bs) >= 2}
    assert cut == set(t.cutvertices)
    h = nx.Graph(list(g.edges))
    if g.m:
        assert cut == set(nx.articulation_points(h))
    assert is_biconnected(g) == (g.n >= 2 and nx.is_biconnected(h) if g.m else False)
