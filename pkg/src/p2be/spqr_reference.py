"""Constructive SPQR decomposition straight from the recursive definition.

Each level looks at the pertinent graph ``G*`` of the current node and its
poles ``{s, t}``: a single edge is a Q-node; two or more split components at
``{s, t}`` give a P-node; cutvertices of ``G*`` give an S-node; otherwise the
maximal split pairs carve out the children of an R-node. Every test is a
brute-force connectivity count, so this is polynomial but slow; it exists to
cross-check :func:`p2be.spqr.build_spqr`.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .graph import ColoredGraph, Multigraph, biconnected_edge_blocks, is_biconnected
from .spqr import P, Q, R, S, NotBiconnected, SpqrNode, SpqrTree


def _classes(ends: Sequence[tuple[int, int]], edge_ids: Iterable[int], x: int, y: int) -> list[list[int]]:
    """Separation classes of ``{x, y}``: edges joined through vertices other
    than ``x`` and ``y``; an edge between ``x`` and ``y`` is a class alone."""
    ids = list(edge_ids)
    parent = {e: e for e in ids}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    seen_at: dict[int, int] = {}
    for e in ids:
        for z in ends[e]:
            if z in (x, y):
                continue
            if z in seen_at:
                ra, rb = find(seen_at[z]), find(e)
                if ra != rb:
                    parent[ra] = rb
            else:
                seen_at[z] = e
    groups: dict[int, list[int]] = {}
    for e in ids:
        groups.setdefault(find(e), []).append(e)
    return list(groups.values())


def split_components(ends: Sequence[tuple[int, int]], edge_ids: Sequence[int], x: int, y: int) -> list[list[int]]:
    """Split components of ``{x, y}``; a single class means no split pair."""
    return _classes(ends, edge_ids, x, y)


def maximal_split_pairs(g_star: Multigraph, poles: tuple[int, int]) -> list[tuple[int, int]]:
    """Maximal split pairs of ``G = G* + (s, t)`` with respect to the poles.

    A pair is a split pair when it has at least two split components; it is
    maximal when every other split pair keeps it and both poles inside one of
    its split components."""
    s, t = poles
    ends = list(g_star.edges) + [(s, t)]
    ids = list(range(len(ends)))
    verts = sorted(set(g_star.vertices) | {s, t})
    pairs: dict[tuple[int, int], list[set[int]]] = {}
    for x, y in itertools.combinations(verts, 2):
        if {x, y} == {s, t}:
            continue
        comps = _classes(ends, ids, x, y)
        if len(comps) >= 2:
            pairs[(x, y)] = [{z for e in c for z in ends[e]} for c in comps]
    out = []
    for (x, y) in pairs:
        want = {x, y, s, t}
        ok = True
        for (x2, y2), comps in pairs.items():
            if (x2, y2) == (x, y):
                continue
            if not any(want <= c for c in comps):
                ok = False
                break
        if ok:
            out.append((x, y))
    return out


def build_spqr_reference(g: ColoredGraph, ref_edge: int = 0) -> SpqrTree:
    """SPQR-tree of a biconnected graph by the recursive definition."""
    if g.m < 2 or not is_biconnected(g):
        raise NotBiconnected("graph is not biconnected")
    ends = list(g.edges)
    nodes: list[SpqrNode] = []
    q_of_edge = [-1] * g.m

    def new_node(kind: str, poles: tuple[int, int], parent: int | None) -> SpqrNode:
        nd = SpqrNode(len(nodes), kind, poles, parent)
        nodes.append(nd)
        return nd

    def make_q(e: int, parent: int | None) -> SpqrNode:
        a, b = ends[e]
        nd = new_node(Q, (a, b), parent)
        nd.edge = e
        nd.skeleton = Multigraph([a, b], [(a, b)], [("real", e)])
        q_of_edge[e] = nd.id
        return nd

    root = make_q(ref_edge, None)
    rest = [e for e in range(g.m) if e != ref_edge]
    work = [(rest, ends[ref_edge], root.id)]
    while work:
        edge_ids, (s, t), parent = work.pop()
        if len(edge_ids) == 1:
            e = edge_ids[0]
            child = make_q(e, parent)
            _attach(nodes, parent, child)
            continue
        parts = _classes(ends, edge_ids, s, t)
        if len(parts) >= 2:
            node = new_node(P, (s, t), parent)
            _attach(nodes, parent, node)
            node.skeleton = Multigraph([s, t], [(s, t)], [("parent", parent)])
            for part in sorted(parts, key=min):
                work.append((part, (s, t), node.id))
            continue
        blocks = [sorted(b) for b in biconnected_edge_blocks(0, ends, edge_ids)]
        if len(blocks) >= 2:
            node = new_node(S, (s, t), parent)
            _attach(nodes, parent, node)
            node.skeleton = Multigraph([s, t], [(s, t)], [("parent", parent)])
            x = s
            left = list(blocks)
            chain = []
            while left:
                i = next(k for k, b in enumerate(left) if any(x in ends[e] for e in b))
                b = left.pop(i)
                bverts = {z for e in b for z in ends[e]}
                if left:
                    nxt = next(z for z in bverts if z != x and any(z in ends[e] for bb in left for e in bb))
                else:
                    nxt = t
                chain.append((b, (x, nxt)))
                x = nxt
            for b, pr in chain:
                work.append((b, pr, node.id))
            continue
        node = new_node(R, (s, t), parent)
        _attach(nodes, parent, node)
        node.skeleton = Multigraph([s, t], [(s, t)], [("parent", parent)])
        gs = Multigraph(sorted({z for e in edge_ids for z in ends[e]}), [ends[e] for e in edge_ids])
        ids_all = list(edge_ids) + [-1]
        ends_ext = {e: ends[e] for e in edge_ids}
        ends_ext[-1] = (s, t)
        for x, y in maximal_split_pairs(gs, (s, t)):
            comps = _classes(ends_ext, ids_all, x, y)
            sub = sorted(e for c in comps if -1 not in c for e in c)
            work.append((sub, (x, y), node.id))
    for nd in nodes:
        if nd.kind in (S, P, R):
            _finish_skeleton(nd, nodes)
    return SpqrTree(g, ref_edge, nodes, root.id, q_of_edge)


def _attach(nodes: list[SpqrNode], parent: int, child: SpqrNode) -> None:
    nodes[parent].children.append(child.id)


def _finish_skeleton(nd: SpqrNode, nodes: list[SpqrNode]) -> None:
    sk = nd.skeleton
    assert sk is not None
    if nd.kind == S:
        # order children along the path from u to v
        order = []
        x = nd.poles[0]
        left = list(nd.children)
        while left:
            i = next(k for k, c in enumerate(left) if x in nodes[c].poles)
            c = left.pop(i)
            order.append(c)
            a, b = nodes[c].poles
            x = b if a == x else a
        nd.children = order
    verts = set(sk.vertices)
    for c in nd.children:
        child = nodes[c]
        nd.child_slot[c] = len(sk.edges)
        sk.edges.append(child.poles)
        sk.tags.append(("real", child.edge) if child.kind == Q else ("virtual", c))
        verts.update(child.poles)
    sk.vertices = sorted(verts)
