"""Colored simple graphs, skeleton multigraphs and block decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

RED = 0
BLUE = 1
COLOR_NAMES = ("r", "b")


def parse_color(token: str | int) -> int:
    if token in (RED, BLUE):
        return int(token)
    key = str(token).strip().lower()
    if key in ("r", "red", "1"):
        return RED
    if key in ("b", "blue", "2"):
        return BLUE
    raise ValueError(f"unknown color {token!r}")


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected simple graph on vertices ``0..n-1``; edge ``i`` is ``edges[i]``
    and lives on page ``colors[i]`` (RED or BLUE)."""

    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative vertex count")
        if len(self.edges) != len(self.colors):
            raise ValueError("edges and colors differ in length")
        seen: set[tuple[int, int]] = set()
        for i, (a, b) in enumerate(self.edges):
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge {i} has an endpoint outside 0..{self.n - 1}")
            if a == b:
                raise ValueError(f"edge {i} is a self-loop")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ValueError(f"edge {i} duplicates {key}")
            seen.add(key)
        for i, c in enumerate(self.colors):
            if c not in (RED, BLUE):
                raise ValueError(f"edge {i} has color {c!r}")

    @classmethod
    def from_edges(cls, n: int, triples: Iterable[Sequence]) -> "ColoredGraph":
        """Build from ``(u, v, color)`` triples; colors may be 0/1 or 'r'/'b'."""
        edges = []
        colors = []
        for u, v, c in triples:
            edges.append((int(u), int(v)))
            colors.append(parse_color(c))
        return cls(n, tuple(edges), tuple(colors))

    @property
    def m(self) -> int:
        return len(self.edges)

    def triples(self) -> list[tuple[int, int, int]]:
        return [(a, b, c) for (a, b), c in zip(self.edges, self.colors)]

    def incidence(self) -> list[list[int]]:
        """Edge ids incident to each vertex, in edge-id order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (a, b) in enumerate(self.edges):
            inc[a].append(i)
            inc[b].append(i)
        return inc

    def color_classes(self) -> tuple[list[int], list[int]]:
        red = [i for i, c in enumerate(self.colors) if c == RED]
        blue = [i for i, c in enumerate(self.colors) if c == BLUE]
        return red, blue

    def is_monochromatic(self) -> bool:
        return len(set(self.colors)) <= 1

    def induced_on_edges(self, edge_ids: Sequence[int]) -> tuple["ColoredGraph", list[int], list[int]]:
        """Subgraph spanned by ``edge_ids`` with compact vertex ids.

        Returns the subgraph, the local-to-global vertex map and the
        local-to-global edge map (local edge ``i`` is ``edge_ids[i]``)."""
        local: dict[int, int] = {}
        verts: list[int] = []
        edges = []
        colors = []
        for e in edge_ids:
            a, b = self.edges[e]
            for x in (a, b):
                if x not in local:
                    local[x] = len(verts)
                    verts.append(x)
            edges.append((local[a], local[b]))
            colors.append(self.colors[e])
        return ColoredGraph(len(verts), tuple(edges), tuple(colors)), verts, list(edge_ids)


@dataclass
class Multigraph:
    """Skeleton graph: parallel edges allowed; each edge carries a tag.

    ``tags[i]`` is ``("real", edge_id)``, ``("virtual", node_id)`` for a child
    node, or ``("parent", node_id)`` for the edge toward the parent."""

    vertices: list[int]
    edges: list[tuple[int, int]]
    tags: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.tags:
            self.tags = [("real", i) for i in range(len(self.edges))]
        if len(self.tags) != len(self.edges):
            raise ValueError("one tag per edge required")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self) -> dict[int, int]:
        deg = {v: 0 for v in self.vertices}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def connected_components(g: ColoredGraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted; isolated vertices
    form singletons. Components are ordered by their smallest vertex."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda comp: comp[0])


@dataclass
class BcTree:
    """Block-cutvertex structure of a connected graph.

    ``blocks[i]`` lists the edge ids of block ``i`` (a bridge is a one-edge
    block); ``block_vertices[i]`` its vertices; ``cutvertices`` is sorted."""

    blocks: list[list[int]]
    block_vertices: list[list[int]]
    cutvertices: list[int]
    vertex_blocks: dict[int, list[int]]

    def tree_edges(self) -> list[tuple[int, int]]:
        """Bipartite arcs ``(block index, cutvertex)``."""
        cut = set(self.cutvertices)
        arcs = []
        for i, verts in enumerate(self.block_vertices):
            arcs.extend((i, v) for v in verts if v in cut)
        return arcs


def biconnected_edge_blocks(n: int, edges: Sequence[tuple[int, int]], edge_ids: Iterable[int] | None = None) -> list[list[int]]:
    """Partition the given edges into biconnected blocks (iterative Tarjan).

    Works on any subset of a multigraph's edges; isolated vertices yield
    nothing. Blocks come out in DFS completion order."""
    ids = range(len(edges)) if edge_ids is None else edge_ids
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in ids:
        a, b = edges[e]
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[list[int]] = []
    counter = 0
    for root in adj:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: list[int] = []
        stack = [(root, -1, 0)]
        while stack:
            v, in_edge, i = stack[-1]
            nbrs = adj[v]
            if i < len(nbrs):
                stack[-1] = (v, in_edge, i + 1)
                w, e = nbrs[i]
                if e == in_edge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    estack.append(e)
                    stack.append((w, e, 0))
                elif disc[w] < disc[v]:
                    estack.append(e)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                stack.pop()
                if not stack:
                    break
                p = stack[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
                if low[v] >= disc[p]:
                    block = []
                    while True:
                        e = estack.pop()
                        block.append(e)
                        if e == in_edge:
                            break
                    blocks.append(block)
    return blocks


def bc_tree(g: ColoredGraph) -> BcTree:
    """Block-cutvertex tree of a connected graph."""
    if g.n > 1 and len(connected_components(g)) != 1:
        raise ValueError("bc_tree needs a connected graph; split components first")
    blocks = [sorted(b) for b in biconnected_edge_blocks(g.n, g.edges)]
    blocks.sort(key=lambda b: b[0])
    block_vertices = []
    vertex_blocks: dict[int, list[int]] = {}
    for i, blk in enumerate(blocks):
        verts = sorted({x for e in blk for x in g.edges[e]})
        block_vertices.append(verts)
        for v in verts:
            vertex_blocks.setdefault(v, []).append(i)
    cut = sorted(v for v, bs in vertex_blocks.items() if len(bs) >= 2)
    return BcTree(blocks, block_vertices, cut, vertex_blocks)


def is_biconnected(g: ColoredGraph) -> bool:
    if g.n < 2:
        return False
    if g.n == 2:
        return g.m == 1
    if len(connected_components(g)) != 1:
        return False
    return len(biconnected_edge_blocks(g.n, g.edges)) == 1
