"""Rooted SPQR-trees.

:func:`build_spqr` finds the triconnected components with the linear-time
path-search method (Hopcroft-Tarjan, in the corrected form of Gutwenger and
Mutzel), merges adjacent bonds and adjacent polygons, and roots the result at
the Q-node of a reference edge. The slow constructive builder in
:mod:`p2be.spqr_reference` serves as its test oracle.

Conventions used throughout the engine:

* ``node.poles = (u, v)``; the skeleton lists the parent edge first, stored
  as ``(u, v)`` and tagged ``("parent", parent_id)``.
* every child ``c`` owns one skeleton edge stored as ``nodes[c].poles``;
  ``node.child_slot[c]`` is its index in ``skeleton.edges``.
* children of an S-node are listed along the path from ``u`` to ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .graph import ColoredGraph, Multigraph, is_biconnected

S, P, Q, R = "S", "P", "Q", "R"


class NotBiconnected(ValueError):
    """SPQR-trees are only defined for biconnected graphs."""


@dataclass
class SpqrNode:
    id: int
    kind: str
    poles: tuple[int, int]
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    skeleton: Multigraph | None = None
    child_slot: dict[int, int] = field(default_factory=dict)
    edge: int | None = None  # real edge id of a Q-node

    @property
    def is_leaf(self) -> bool:
        return self.kind == Q


@dataclass
class SpqrTree:
    graph: ColoredGraph
    ref_edge: int
    nodes: list[SpqrNode]
    root: int
    q_of_edge: list[int]

    @property
    def root_child(self) -> SpqrNode:
        return self.nodes[self.nodes[self.root].children[0]]

    def inner_nodes(self) -> list[SpqrNode]:
        return [nd for nd in self.nodes if nd.kind != Q]

    def postorder(self) -> list[int]:
        """Node ids with every child before its parent (root last)."""
        out: list[int] = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.nodes[x].children):
                stack.append((c, False))
        return out

    def counts(self) -> dict[str, int]:
        out = {S: 0, P: 0, Q: 0, R: 0}
        for nd in self.nodes:
            out[nd.kind] += 1
        return out


def pertinent_edges(tree: SpqrTree, node_id: int) -> list[int]:
    """Real edge ids of the pertinent graph of a node, sorted."""
    out = []
    stack = [node_id]
    nodes = tree.nodes
    while stack:
        x = stack.pop()
        nd = nodes[x]
        if nd.kind == Q:
            out.append(nd.edge)
        stack.extend(nd.children)
    return sorted(out)


def pertinent_graph(tree: SpqrTree, node_id: int) -> ColoredGraph:
    """Pertinent graph on the full vertex range of the input graph (vertices
    outside it stay isolated); edge ``i`` is the ``i``-th pertinent edge in
    id order."""
    g = tree.graph
    ids = pertinent_edges(tree, node_id)
    return ColoredGraph(g.n, tuple(g.edges[e] for e in ids), tuple(g.colors[e] for e in ids))


def signature(tree: SpqrTree) -> set[tuple[str, frozenset, frozenset]]:
    """Builder-independent fingerprint: (kind, pole set, pertinent edges)."""
    out = set()
    for nd in tree.nodes:
        if nd.id == tree.root:
            continue
        out.add((nd.kind, frozenset(nd.poles), frozenset(pertinent_edges(tree, nd.id))))
    return out


def to_dot(tree: SpqrTree) -> str:
    """Debug rendering: one box per node with its kind, poles and skeleton."""
    lines = ["graph spqr {", "  node [shape=box, fontname=monospace];"]
    for nd in tree.nodes:
        if nd.kind == Q:
            label = f"Q e{nd.edge} {nd.poles}"
        else:
            sk = nd.skeleton
            parts = []
            for (a, b), (kind, ref) in zip(sk.edges, sk.tags):
                mark = {"parent": "^", "real": "e", "virtual": "#"}[kind]
                parts.append(f"{a}-{b}{mark}{ref}")
            label = f"{nd.kind} {nd.poles}\\n" + " ".join(parts)
        lines.append(f'  n{nd.id} [label="{label}"];')
    for nd in tree.nodes:
        for c in nd.children:
            lines.append(f"  n{nd.id} -- n{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# linked lists with stable handles


class _Lists:
    """Many doubly linked lists over one slot pool; a handle is a slot index."""

    __slots__ = ("head", "tail", "size", "val", "nxt", "prv", "owner")

    def __init__(self, nlists: int) -> None:
        self.head = [-1] * nlists
        self.tail = [-1] * nlists
        self.size = [0] * nlists
        self.val: list[int] = []
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.owner: list[int] = []

    def push_back(self, lst: int, x: int) -> int:
        s = len(self.val)
        self.val.append(x)
        self.owner.append(lst)
        t = self.tail[lst]
        self.prv.append(t)
        self.nxt.append(-1)
        if t == -1:
            self.head[lst] = s
        else:
            self.nxt[t] = s
        self.tail[lst] = s
        self.size[lst] += 1
        return s

    def push_front(self, lst: int, x: int) -> int:
        s = len(self.val)
        self.val.append(x)
        self.owner.append(lst)
        h = self.head[lst]
        self.nxt.append(h)
        self.prv.append(-1)
        if h == -1:
            self.tail[lst] = s
        else:
            self.prv[h] = s
        self.head[lst] = s
        self.size[lst] += 1
        return s

    def delete(self, s: int) -> None:
        lst = self.owner[s]
        p, q = self.prv[s], self.nxt[s]
        if p == -1:
            self.head[lst] = q
        else:
            self.nxt[p] = q
        if q == -1:
            self.tail[lst] = p
        else:
            self.prv[q] = p
        self.size[lst] -= 1
        self.owner[s] = -1

    def iter(self, lst: int) -> Iterator[int]:
        s = self.head[lst]
        while s != -1:
            yield self.val[s]
            s = self.nxt[s]


# ---------------------------------------------------------------------------
# triconnected components

BOND, POLYGON, RIGID = "bond", "polygon", "rigid"


def _run(gen_factory, root) -> None:
    """Drive a recursive generator: ``yield w`` means "recurse into w"."""
    stack = [gen_factory(root)]
    while stack:
        try:
            w = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue
        stack.append(gen_factory(w))


def triconnected_components(n: int, ends: list[tuple[int, int]]) -> tuple[list[tuple[str, list[int]]], list[tuple[int, int]]]:
    """Split a simple biconnected graph into bonds, polygons and rigid parts.

    Returns the merged components (kind, edge ids) and the endpoint list of
    all edges, real ones first; ids ``>= len(ends)`` are virtual edges, each
    shared by exactly two components."""
    m = len(ends)
    src = [a for a, _ in ends]
    tgt = [b for _, b in ends]
    UNSEEN, TREE, FROND = 0, 1, 2
    etype = [UNSEEN] * m

    inc: list[list[int]] = [[] for _ in range(n)]
    for e, (a, b) in enumerate(ends):
        inc[a].append(e)
        inc[b].append(e)

    number = [0] * n
    lowpt1 = [0] * n
    lowpt2 = [0] * n
    nd = [0] * n
    father = [-1] * n
    tree_arc = [-1] * n
    degree = [len(inc[v]) for v in range(n)]

    # first DFS: numbering, lowpoints, descendant counts
    start = 0
    number[start] = lowpt1[start] = lowpt2[start] = 1
    nd[start] = 1
    count = 1
    ptr = [0] * n
    stack = [start]
    while stack:
        v = stack[-1]
        if ptr[v] < len(inc[v]):
            e = inc[v][ptr[v]]
            ptr[v] += 1
            if etype[e] != UNSEEN:
                continue
            w = src[e] ^ tgt[e] ^ v
            if number[w] == 0:
                etype[e] = TREE
                tree_arc[w] = e
                father[w] = v
                count += 1
                number[w] = lowpt1[w] = lowpt2[w] = count
                nd[w] = 1
                stack.append(w)
            else:
                etype[e] = FROND
                nw = number[w]
                if nw < lowpt1[v]:
                    lowpt2[v] = lowpt1[v]
                    lowpt1[v] = nw
                elif nw > lowpt1[v]:
                    lowpt2[v] = min(lowpt2[v], nw)
        else:
            stack.pop()
            if stack:
                p = stack[-1]
                if lowpt1[v] < lowpt1[p]:
                    lowpt2[p] = min(lowpt1[p], lowpt2[v])
                    lowpt1[p] = lowpt1[v]
                elif lowpt1[v] == lowpt1[p]:
                    lowpt2[p] = min(lowpt2[p], lowpt2[v])
                else:
                    lowpt2[p] = min(lowpt2[p], lowpt1[v])
                nd[p] += nd[v]
    if count != n:
        raise NotBiconnected("graph is disconnected")

    # tree arcs point down, fronds point up
    for e in range(m):
        up = number[tgt[e]] > number[src[e]]
        if (up and etype[e] == FROND) or (not up and etype[e] == TREE):
            src[e], tgt[e] = tgt[e], src[e]

    # acceptable adjacency structure
    buckets: list[list[int]] = [[] for _ in range(3 * n + 3)]
    for e in range(m):
        w = tgt[e]
        if etype[e] == FROND:
            phi = 3 * number[w] + 1
        elif lowpt2[w] < number[src[e]]:
            phi = 3 * lowpt1[w]
        else:
            phi = 3 * lowpt1[w] + 2
        buckets[phi].append(e)
    adj = _Lists(n)
    in_adj = [-1] * m
    for bucket in buckets:
        for e in bucket:
            in_adj[e] = adj.push_back(src[e], e)

    # second DFS: renumber so that paths come out in order; collect highpoints
    newnum = [0] * n
    highpt = _Lists(n)
    in_high = [-1] * m
    start_flag = [False] * m
    num_count = n
    new_path = True
    cursor = [-1] * n
    newnum[start] = num_count - nd[start] + 1
    cursor[start] = adj.head[start]
    stack = [start]
    while stack:
        v = stack[-1]
        s = cursor[v]
        if s == -1:
            stack.pop()
            if stack:
                num_count -= 1
            continue
        cursor[v] = adj.nxt[s]
        e = adj.val[s]
        w = tgt[e]
        if new_path:
            new_path = False
            start_flag[e] = True
        if etype[e] == TREE:
            newnum[w] = num_count - nd[w] + 1
            cursor[w] = adj.head[w]
            stack.append(w)
        else:
            in_high[e] = highpt.push_back(w, newnum[v])
            new_path = True

    old2new = [0] * (n + 1)
    for v in range(n):
        old2new[number[v]] = newnum[v]
    nodeat = [0] * (n + 1)
    for v in range(n):
        nodeat[newnum[v]] = v
        lowpt1[v] = old2new[lowpt1[v]]
        lowpt2[v] = old2new[lowpt2[v]]

    comps: list[list[int]] = []
    estack: list[int] = []
    th = [0]
    ta = [-1]
    tb = [0]

    def new_edge(a: int, b: int, kind: int = UNSEEN) -> int:
        src.append(a)
        tgt.append(b)
        etype.append(kind)
        start_flag.append(False)
        in_adj.append(-1)
        in_high.append(-1)
        return len(src) - 1

    def del_high(e: int) -> None:
        s = in_high[e]
        if s != -1:
            highpt.delete(s)
            in_high[e] = -1

    def high(v: int) -> int:
        h = highpt.head[v]
        return 0 if h == -1 else highpt.val[h]

    def first_child_num(w: int) -> int:
        h = adj.head[w]
        return newnum[tgt[adj.val[h]]] if h != -1 else 0

    def pop_t() -> None:
        th.pop()
        ta.pop()
        tb.pop()

    def path_search(v: int):
        vnum = newnum[v]
        outv = adj.size[v]
        it = adj.head[v]
        while it != -1:
            it_next = adj.nxt[it]
            e = adj.val[it]
            w = tgt[e]
            wnum = newnum[w]
            if etype[e] == TREE:
                if start_flag[e]:
                    lw1 = lowpt1[w]
                    if ta[-1] > lw1:
                        y = 0
                        b = 0
                        while ta[-1] > lw1:
                            y = max(y, th[-1])
                            b = tb[-1]
                            pop_t()
                        th.append(y)
                        ta.append(lw1)
                        tb.append(b)
                    else:
                        th.append(wnum + nd[w] - 1)
                        ta.append(lw1)
                        tb.append(vnum)
                    th.append(0)
                    ta.append(-1)
                    tb.append(0)

                yield w

                estack.append(tree_arc[w])

                # type-2 separation pairs
                while vnum != 1 and (ta[-1] == vnum or (degree[w] == 2 and first_child_num(w) > wnum)):
                    a = ta[-1]
                    b = tb[-1]
                    if a == vnum and father[nodeat[b]] == nodeat[a]:
                        pop_t()
                        continue
                    e_ab = -1
                    if degree[w] == 2 and first_child_num(w) > wnum:
                        e1 = estack.pop()
                        e2 = estack.pop()
                        adj.delete(in_adj[e2])
                        x = tgt[e2]
                        e_virt = new_edge(v, x)
                        degree[x] -= 1
                        degree[v] -= 1
                        comps.append([e1, e2, e_virt])
                        if estack:
                            top = estack[-1]
                            if src[top] == x and tgt[top] == v:
                                e_ab = estack.pop()
                                adj.delete(in_adj[e_ab])
                                del_high(e_ab)
                    else:
                        h = th[-1]
                        pop_t()
                        comp = []
                        while estack:
                            xy = estack[-1]
                            x0, x1 = src[xy], tgt[xy]
                            n0, n1 = newnum[x0], newnum[x1]
                            if not (a <= n0 <= h and a <= n1 <= h):
                                break
                            if (n0 == a and n1 == b) or (n1 == a and n0 == b):
                                e_ab = estack.pop()
                                adj.delete(in_adj[e_ab])
                                del_high(e_ab)
                            else:
                                eh = estack.pop()
                                if it != in_adj[eh]:
                                    adj.delete(in_adj[eh])
                                    del_high(eh)
                                comp.append(eh)
                                degree[x0] -= 1
                                degree[x1] -= 1
                        e_virt = new_edge(nodeat[a], nodeat[b])
                        comp.append(e_virt)
                        comps.append(comp)
                        x = nodeat[b]
                    if e_ab != -1:
                        e_virt2 = new_edge(v, x)
                        comps.append([e_ab, e_virt, e_virt2])
                        e_virt = e_virt2
                        degree[x] -= 1
                        degree[v] -= 1
                    estack.append(e_virt)
                    adj.val[it] = e_virt
                    in_adj[e_virt] = it
                    degree[x] += 1
                    degree[v] += 1
                    father[x] = v
                    tree_arc[x] = e_virt
                    etype[e_virt] = TREE
                    w = x
                    wnum = newnum[w]

                # type-1 separation pair
                if lowpt2[w] >= vnum and lowpt1[w] < vnum and (father[v] != start or outv >= 2):
                    comp = []
                    lo, hi = wnum, wnum + nd[w]
                    while estack:
                        xy = estack[-1]
                        n0, n1 = newnum[src[xy]], newnum[tgt[xy]]
                        if not (lo <= n0 < hi or lo <= n1 < hi):
                            break
                        estack.pop()
                        comp.append(xy)
                        del_high(xy)
                        degree[src[xy]] -= 1
                        degree[tgt[xy]] -= 1
                    lw = nodeat[lowpt1[w]]
                    e_virt = new_edge(v, lw)
                    comp.append(e_virt)
                    comps.append(comp)
                    if estack:
                        top = estack[-1]
                        if (src[top] == v and tgt[top] == lw) or (src[top] == lw and tgt[top] == v):
                            eh = estack.pop()
                            if it != in_adj[eh]:
                                adj.delete(in_adj[eh])
                            e_virt2 = new_edge(v, lw)
                            comps.append([eh, e_virt, e_virt2])
                            in_high[e_virt2] = in_high[eh]
                            in_high[eh] = -1
                            e_virt = e_virt2
                            degree[v] -= 1
                            degree[lw] -= 1
                    if lw != father[v]:
                        estack.append(e_virt)
                        adj.val[it] = e_virt
                        in_adj[e_virt] = it
                        etype[e_virt] = FROND
                        if in_high[e_virt] == -1 and high(lw) < vnum:
                            in_high[e_virt] = highpt.push_front(lw, vnum)
                        degree[v] += 1
                        degree[lw] += 1
                    else:
                        adj.delete(it)
                        e_virt2 = new_edge(lw, v, TREE)
                        eh = tree_arc[v]
                        comps.append([e_virt, e_virt2, eh])
                        tree_arc[v] = e_virt2
                        in_adj[e_virt2] = in_adj[eh]
                        adj.val[in_adj[eh]] = e_virt2

                if start_flag[e]:
                    while ta[-1] != -1:
                        pop_t()
                    pop_t()
                while ta[-1] != -1 and tb[-1] != vnum and high(v) > th[-1]:
                    pop_t()
                outv -= 1
            else:
                if start_flag[e]:
                    if ta[-1] > wnum:
                        y = 0
                        b = 0
                        while ta[-1] > wnum:
                            y = max(y, th[-1])
                            b = tb[-1]
                            pop_t()
                        th.append(y)
                        ta.append(wnum)
                        tb.append(b)
                    else:
                        th.append(vnum)
                        ta.append(wnum)
                        tb.append(vnum)
                estack.append(e)
            it = it_next

    _run(path_search, start)
    if estack:
        comps.append(list(estack))

    all_ends = list(zip(src, tgt))
    return _merge(comps, all_ends, m), all_ends


def _classify(edge_ids: list[int], ends: list[tuple[int, int]]) -> str:
    deg: dict[int, int] = {}
    for e in edge_ids:
        for x in ends[e]:
            deg[x] = deg.get(x, 0) + 1
    if len(deg) == 2:
        return BOND
    if all(d == 2 for d in deg.values()):
        return POLYGON
    return RIGID


def _merge(comps: list[list[int]], ends: list[tuple[int, int]], m: int) -> list[tuple[str, list[int]]]:
    kinds = [_classify(c, ends) for c in comps]
    parent = list(range(len(comps)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owners: dict[int, list[int]] = {}
    for i, c in enumerate(comps):
        for e in c:
            if e >= m:
                owners.setdefault(e, []).append(i)
    dropped: set[int] = set()
    for e, (i, j) in owners.items():
        if kinds[i] == kinds[j] and kinds[i] != RIGID:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
            dropped.add(e)
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(comps):
        groups.setdefault(find(i), []).extend(e for e in c if e not in dropped)
    out = []
    for r in sorted(groups):
        out.append((kinds[r], groups[r]))
    return out


# ---------------------------------------------------------------------------
# rooted tree assembly


def build_spqr(g: ColoredGraph, ref_edge: int = 0, check: bool = True) -> SpqrTree:
    """SPQR-tree of a biconnected graph rooted at the Q-node of ``ref_edge``."""
    if g.m < 2:
        raise NotBiconnected("need at least two edges")
    if check and not is_biconnected(g):
        raise NotBiconnected("graph is not biconnected")
    if not 0 <= ref_edge < g.m:
        raise ValueError(f"reference edge {ref_edge} out of range")
    comps, ends = triconnected_components(g.n, list(g.edges))
    m = g.m
    home: dict[int, int] = {}
    owners: dict[int, list[int]] = {}
    for i, (_, es) in enumerate(comps):
        for e in es:
            if e < m:
                home[e] = i
            else:
                owners.setdefault(e, []).append(i)

    nodes: list[SpqrNode] = []
    q_of_edge = [-1] * m
    kind_of = {BOND: P, POLYGON: S, RIGID: R}

    def new_node(kind: str, poles: tuple[int, int], parent: int | None) -> SpqrNode:
        nd = SpqrNode(len(nodes), kind, poles, parent)
        nodes.append(nd)
        return nd

    a0, b0 = g.edges[ref_edge]
    root = new_node(Q, (a0, b0), None)
    root.edge = ref_edge
    root.skeleton = Multigraph([a0, b0], [(a0, b0)], [("real", ref_edge)])
    q_of_edge[ref_edge] = root.id

    # (component, node, parent edge id in the component)
    first = new_node(kind_of[comps[home[ref_edge]][0]], (a0, b0), root.id)
    root.children.append(first.id)
    queue = [(home[ref_edge], first, ref_edge)]
    head = 0
    while head < len(queue):
        ci, node, pedge = queue[head]
        head += 1
        u, v = node.poles
        others = [e for e in comps[ci][1] if e != pedge]
        if node.kind == S:
            others = _series_order(others, ends, u, v)
        verts: list[int] = []
        seen: set[int] = set()
        sk_edges = [(u, v)]
        tags = [("parent", node.parent)]
        for e in others:
            a, b = ends[e]
            if e < m:
                a, b = g.edges[e]
                child = new_node(Q, (a, b), node.id)
                child.edge = e
                child.skeleton = Multigraph([a, b], [(a, b)], [("real", e)])
                q_of_edge[e] = child.id
                tags.append(("real", e))
            else:
                i, j = owners[e]
                cj = j if i == ci else i
                child = new_node(kind_of[comps[cj][0]], (a, b), node.id)
                queue.append((cj, child, e))
                tags.append(("virtual", child.id))
            node.child_slot[child.id] = len(sk_edges)
            node.children.append(child.id)
            sk_edges.append((a, b))
        for a, b in sk_edges:
            for x in (a, b):
                if x not in seen:
                    seen.add(x)
                    verts.append(x)
        node.skeleton = Multigraph(verts, sk_edges, tags)
    return SpqrTree(g, ref_edge, nodes, root.id, q_of_edge)


def _series_order(edge_ids: list[int], ends: list[tuple[int, int]], u: int, v: int) -> list[int]:
    """Order the non-parent edges of a polygon as a path from ``u`` to ``v``."""
    at: dict[int, list[int]] = {}
    for e in edge_ids:
        a, b = ends[e]
        at.setdefault(a, []).append(e)
        at.setdefault(b, []).append(e)
    out = []
    used: set[int] = set()
    x = u
    while x != v or len(out) < len(edge_ids):
        nxt = [e for e in at[x] if e not in used]
        e = nxt[0]
        used.add(e)
        out.append(e)
        a, b = ends[e]
        x = b if a == x else a
        if len(out) == len(edge_ids):
            break
    return out
