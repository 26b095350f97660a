from __future__ import annotations

from hypothesis import given, settings

from helpers import biconnected_graphs, graph
from p2be.embedding import verify_disjunctive, verify_splitter_free
from p2be.engine import REASONS, BlockEngine, BlockRejected, Negative
from p2be.spqr import pertinent_edges


def c_path(g, edge_ids, c, s, t):
    """Is there an ``s``-``t`` path using only color-``c`` edges from ``edge_ids``?"""
    adj = {}
    for e in edge_ids:
        if g.colors[e] == c:
            a, b = g.edges[e]
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    seen, stack = {s}, [s]
    while stack:
        x = stack.pop()
        if x == t:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def prepared(g, ref=0):
    eng = BlockEngine(g, ref)
    eng.preprocess_up()
    eng.preprocess_down()
    return eng


def test_q_node_labels():
    g = graph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 1)])
    eng = prepared(g, 2)
    q_red = eng.tree.q_of_edge[0]
    q_blue = eng.tree.q_of_edge[1]
    assert eng.is_c[q_red] == (True, False)
    assert eng.is_c[q_blue] == (False, True)


def test_series_of_red_edges_is_a_red_edge():
    g = graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 1)])
    eng = prepared(g, 2)
    assert eng.is_c[eng.tree.root_child.id] == (True, False)


def test_parallel_red_and_blue_paths_give_both_labels():
    g = graph(5, [(0, 1, 0), (0, 2, 0), (2, 1, 0), (0, 3, 1), (3, 1, 1), (0, 4, 1), (4, 1, 0)])
    eng = prepared(g, 0)
    p = next(nd for nd in eng.nodes if nd.kind == "P")
    assert eng.is_c[p.id] == (True, True)


def test_red_cycle_marks_children_joined():
    # the red reference edge closes a red cycle through the series child
    g = graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])
    eng = prepared(g, 2)
    s = eng.tree.root_child
    assert all(eng.joined[c] == (True, False) for c in s.children)


@settings(max_examples=150, deadline=None)
@given(biconnected_graphs())
def test_path_labels_match_pertinent_graphs(g):
    eng = prepared(g)
    for nd in eng.nodes:
        if nd.id == eng.tree.root:
            continue
        pe = pertinent_edges(eng.tree, nd.id)
        u, v = nd.poles
        assert eng.is_c[nd.id] == tuple(c_path(g, pe, c, u, v) for c in (0, 1))
        for p in (u, v):
            inside = [sum(1 for e in pe if p in g.edges[e] and g.colors[e] == c) for c in (0, 1)]
            assert eng.cnt[nd.id][p] == inside


@settings(max_examples=150, deadline=None)
@given(biconnected_graphs())
def test_joined_means_a_closing_path_outside(g):
    eng = prepared(g)
    for nd in eng.nodes:
        # the root child is closed against the reference edge instead
        if nd.id in (eng.tree.root, eng.tree.root_child.id):
            continue
        inside = set(pertinent_edges(eng.tree, nd.id))
        outside = [e for e in range(g.m) if e not in inside]
        u, v = nd.poles
        for c in (0, 1):
            expect = eng.is_c[nd.id][c] and c_path(g, outside, c, u, v)
            assert eng.joined[nd.id][c] == expect


def test_block_rejected_carries_a_known_reason():
    err = BlockRejected("rigid-splitter", "R-node 3")
    assert err.reason == "rigid-splitter" and "R-node 3" in str(err)
    neg = Negative("contrast", "x")
    assert not neg and "contrast" in str(neg)
    assert len(set(REASONS)) == len(REASONS)


@settings(max_examples=150, deadline=None)
@given(biconnected_graphs(max_n=10))
def test_composed_embedding_is_certified(g):
    if g.is_monochromatic():
        return
    eng = BlockEngine(g, 0)
    try:
        eng.run()
    except BlockRejected as exc:
        assert exc.reason in REASONS
        return
    emb = eng.compose()
    assert emb.euler_ok()
    assert verify_disjunctive(emb, g)
    assert verify_splitter_free(emb, g)
    if g.m <= 14:
        assert verify_splitter_free(emb, g, "exhaustive")
