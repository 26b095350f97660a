"""Rotation systems, faces, planarity and the embedding-level verifiers.

Edge ``e = (a, b)`` owns two darts: ``2e`` runs a -> b and ``2e + 1`` runs
b -> a. A rotation lists, for every vertex, the darts leaving it in clockwise
order. Faces are traced by arriving at ``b`` along ``a -> b`` and leaving along
the dart that follows ``b -> a`` clockwise at ``b``; the angle between a dart
``d`` at ``x`` and its clockwise successor therefore belongs to the face of the
twin ``d ^ 1`` (the dart pointing into ``x``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .graph import ColoredGraph, Multigraph, biconnected_edge_blocks


class NotPlanar(Exception):
    """Raised when a graph has no planar embedding."""


@dataclass
class RotationEmbedding:
    """Combinatorial embedding of a (multi)graph over arbitrary vertex labels."""

    ends: list[tuple[int, int]]
    rotation: dict[int, list[int]]
    outer_face: int | None = None
    _pos: list[int] | None = field(default=None, repr=False)
    _faces: list[list[int]] | None = field(default=None, repr=False)
    _face_of: list[int] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        seen = [0] * (2 * len(self.ends))
        for v, darts in self.rotation.items():
            for d in darts:
                if self.tail(d) != v:
                    raise ValueError(f"dart {d} listed at {v} but leaves {self.tail(d)}")
                seen[d] += 1
        if any(s != 1 for s in seen):
            raise ValueError("every dart must appear exactly once in the rotation")

    # dart helpers -------------------------------------------------------
    def tail(self, d: int) -> int:
        return self.ends[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.ends[d >> 1][1 - (d & 1)]

    @property
    def num_edges(self) -> int:
        return len(self.ends)

    def vertices(self) -> list[int]:
        return list(self.rotation)

    @property
    def pos(self) -> list[int]:
        if self._pos is None:
            pos = [0] * (2 * len(self.ends))
            for darts in self.rotation.values():
                for i, d in enumerate(darts):
                    pos[d] = i
            self._pos = pos
        return self._pos

    def next_cw(self, d: int) -> int:
        darts = self.rotation[self.tail(d)]
        return darts[(self.pos[d] + 1) % len(darts)]

    def prev_cw(self, d: int) -> int:
        darts = self.rotation[self.tail(d)]
        return darts[(self.pos[d] - 1) % len(darts)]

    def next_in_face(self, d: int) -> int:
        return self.next_cw(d ^ 1)

    # faces --------------------------------------------------------------
    def _trace(self) -> None:
        ends = self.ends
        rot = self.rotation
        pos = self.pos
        face_of = [-1] * (2 * len(ends))
        faces: list[list[int]] = []
        for start in range(2 * len(ends)):
            if face_of[start] != -1:
                continue
            fid = len(faces)
            cycle = []
            d = start
            while face_of[d] == -1:
                face_of[d] = fid
                cycle.append(d)
                t = d ^ 1
                darts = rot[ends[t >> 1][t & 1]]
                d = darts[(pos[t] + 1) % len(darts)]
            faces.append(cycle)
        self._faces = faces
        self._face_of = face_of

    @property
    def faces(self) -> list[list[int]]:
        if self._faces is None:
            self._trace()
        return self._faces  # type: ignore[return-value]

    @property
    def face_of(self) -> list[int]:
        if self._face_of is None:
            self._trace()
        return self._face_of  # type: ignore[return-value]

    def face_vertices(self, f: int) -> list[int]:
        return [self.tail(d) for d in self.faces[f]]

    def mirrored(self) -> "RotationEmbedding":
        return RotationEmbedding(list(self.ends), {v: list(reversed(ds)) for v, ds in self.rotation.items()})

    def euler_ok(self) -> bool:
        """V - E + F = 2 on every connected component (isolated vertices count
        one face each)."""
        parent = {v: v for v in self.rotation}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.ends:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        counts: dict[int, list[int]] = {}
        for v in self.rotation:
            counts.setdefault(find(v), [0, 0, 0])[0] += 1
        for a, _ in self.ends:
            counts[find(a)][1] += 1
        for cyc in self.faces:
            counts[find(self.tail(cyc[0]))][2] += 1
        for v, e, f in counts.values():
            if e == 0:
                f = 1
            if v - e + f != 2:
                return False
        return True


def faces(emb: RotationEmbedding) -> list[list[int]]:
    """Face boundaries as cyclic dart lists."""
    return emb.faces


def embedding_from_networkx(pe: nx.PlanarEmbedding, ends: Sequence[tuple[int, int]]) -> RotationEmbedding:
    """Translate a networkx embedding of a simple graph onto dart ids."""
    dart_at: dict[tuple[int, int], int] = {}
    for e, (a, b) in enumerate(ends):
        dart_at[(a, b)] = 2 * e
        dart_at[(b, a)] = 2 * e + 1
    rotation = {}
    for v in pe.nodes:
        rotation[v] = [dart_at[(v, w)] for w in pe.neighbors_cw_order(v)]
    return RotationEmbedding(list(ends), rotation)


def planar_embed(g: Multigraph | ColoredGraph) -> RotationEmbedding:
    """Planar rotation system for ``g`` or :class:`NotPlanar`.

    Parallel edges are subdivided before calling the networkx embedder and
    contracted back afterwards, so skeleton multigraphs are accepted."""
    if isinstance(g, ColoredGraph):
        vertices = list(range(g.n))
        ends = list(g.edges)
    else:
        vertices = list(g.vertices)
        ends = list(g.edges)
    h = nx.Graph()
    h.add_nodes_from(vertices)
    seen: set[tuple[int, int]] = set()
    subdiv: dict[int, tuple] = {}
    for e, (a, b) in enumerate(ends):
        if a == b:
            raise ValueError("self-loops are not supported")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            mid = ("sub", e)
            subdiv[e] = mid
            h.add_edge(a, mid)
            h.add_edge(mid, b)
        else:
            seen.add(key)
            h.add_edge(a, b)
    ok, pe = nx.check_planarity(h)
    if not ok:
        raise NotPlanar()
    dart_at: dict[tuple, int] = {}
    for e, (a, b) in enumerate(ends):
        if e in subdiv:
            dart_at[(a, subdiv[e])] = 2 * e
            dart_at[(b, subdiv[e])] = 2 * e + 1
        else:
            dart_at[(a, b)] = 2 * e
            dart_at[(b, a)] = 2 * e + 1
    rotation = {v: [dart_at[(v, w)] for w in pe.neighbors_cw_order(v)] for v in vertices}
    return RotationEmbedding(ends, rotation)


def has_face_with_all_vertices(emb: RotationEmbedding, vertices: Iterable[int] | None = None) -> int | None:
    """Id of a face whose boundary visits every vertex (of ``vertices`` if
    given), or ``None``. Each dart is inspected once."""
    target = set(emb.rotation) if vertices is None else set(vertices)
    need = len(target)
    mark: dict[int, int] = {}
    for fid, cyc in enumerate(emb.faces):
        count = 0
        for d in cyc:
            x = emb.tail(d)
            if x in target and mark.get(x) != fid:
                mark[x] = fid
                count += 1
        if count == need:
            return fid
    return None


def cyclic_blocks(seq: Sequence[int]) -> int:
    """Number of maximal runs of equal symbols in a cyclic sequence."""
    k = len(seq)
    if k == 0:
        return 0
    changes = sum(1 for i in range(k) if seq[i] != seq[i - 1])
    return max(changes, 1)


def verify_disjunctive(emb: RotationEmbedding, g: ColoredGraph) -> bool:
    """Every vertex sees at most two maximal monochromatic runs around it."""
    colors = g.colors
    for darts in emb.rotation.values():
        if len(darts) > 2 and cyclic_blocks([colors[d >> 1] for d in darts]) > 2:
            return False
    return True


def restrict(emb: RotationEmbedding, edge_ids: Iterable[int]) -> RotationEmbedding:
    """Sub-embedding on a subset of edges. Local edge ``i`` is the ``i``-th
    smallest kept id; vertices left without edges are dropped."""
    ids = sorted(set(edge_ids))
    local = {e: i for i, e in enumerate(ids)}
    ends = [emb.ends[e] for e in ids]
    # only the endpoints of kept edges are visited, so many small restrictions
    # of one large embedding stay linear overall
    touched = dict.fromkeys(v for ab in ends for v in ab)
    rotation: dict[int, list[int]] = {}
    for v in touched:
        rotation[v] = [2 * local[d >> 1] + (d & 1) for d in emb.rotation[v] if (d >> 1) in local]
    return RotationEmbedding(ends, rotation)


def _component_embeddings(emb: RotationEmbedding) -> list[tuple[RotationEmbedding, list[int]]]:
    parent = {v: v for v in emb.rotation}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in emb.ends:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for e, (a, _) in enumerate(emb.ends):
        groups.setdefault(find(a), []).append(e)
    return [(restrict(emb, ids), ids) for ids in groups.values()]


def verify_splitter_free(emb: RotationEmbedding, g: ColoredGraph, method: str = "fast", max_cycles: int = 200_000) -> bool:
    """True iff no monochromatic cycle has a vertex or an opposite-color edge
    strictly on both of its sides.

    ``method="exhaustive"`` enumerates every simple monochromatic cycle and is
    exponential in the worst case (it raises once ``max_cycles`` is exceeded);
    it is meant for small test graphs. ``method="fast"`` decides the same
    property block by block in polynomial time. Disconnected inputs are judged
    component by component, since their relative placement is not part of a
    rotation system."""
    if method not in ("fast", "exhaustive"):
        raise ValueError(method)
    for sub, ids in _component_embeddings(emb):
        colors = [g.colors[e] for e in ids]
        if method == "fast":
            if not _splitter_free_fast(sub, colors):
                return False
        elif not _splitter_free_exhaustive(sub, colors, max_cycles):
            return False
    return True


def _splitter_free_fast(emb: RotationEmbedding, colors: Sequence[int]) -> bool:
    pos = emb.pos
    for c in (0, 1):
        mono = [e for e, col in enumerate(colors) if col == c]
        if not mono:
            continue
        for block in biconnected_edge_blocks(0, emb.ends, mono):
            if len(block) < 2:
                continue
            in_block = set(block)
            sub = restrict(emb, block)
            back = sorted(in_block)
            dirty: set[int] = set()
            for v, darts in sub.rotation.items():
                full = emb.rotation[v]
                deg = len(full)
                k = len(darts)
                for i in range(k):
                    d = darts[i]
                    nd = darts[(i + 1) % k]
                    od = 2 * back[d >> 1] + (d & 1)
                    ond = 2 * back[nd >> 1] + (nd & 1)
                    gap = (pos[ond] - pos[od] - 1) % deg
                    if gap > 0:
                        dirty.add(sub.face_of[d ^ 1])
            if len(dirty) >= 2:
                return False
            verts = set(sub.rotation)
            if len(dirty) == 1:
                (f,) = dirty
                if set(sub.face_vertices(f)) != verts:
                    return False
            else:
                if has_face_with_all_vertices(sub) is not None:
                    continue
                if not _no_separating_cycle(sub):
                    return False
    return True


def _no_separating_cycle(sub: RotationEmbedding) -> bool:
    """For a clean biconnected plane block: no cycle separates two vertices.

    A cycle strictly separates ``x`` from ``y`` iff ``y`` misses the boundary of
    the face of ``sub - x`` that used to contain ``x``."""
    verts = list(sub.rotation)
    for x in verts:
        keep = [e for e, (a, b) in enumerate(sub.ends) if a != x and b != x]
        rest = restrict(sub, keep)
        # the merged face contains the angles around x: pick a neighbour dart
        d = sub.rotation[x][0]
        y0 = sub.head(d)
        # in `rest`, the face containing the old angle before d at y0
        local = {e: i for i, e in enumerate(sorted(keep))}
        darts_y = [dd for dd in sub.rotation[y0] if (dd >> 1) in local]
        if not darts_y:
            return False
        # the dart at y0 just clockwise after the twin of d survives in rest
        full = sub.rotation[y0]
        i = sub.pos[d ^ 1]
        k = len(full)
        nxt = None
        for step in range(1, k + 1):
            cand = full[(i + step) % k]
            if (cand >> 1) in local:
                nxt = cand
                break
        assert nxt is not None
        # the angle (twin of d, nxt) lies in the face of the dart entering y0 before nxt
        prev = None
        for step in range(1, k + 1):
            cand = full[(i - step) % k]
            if (cand >> 1) in local:
                prev = cand
                break
        assert prev is not None
        lp = 2 * local[prev >> 1] + (prev & 1)
        f = rest.face_of[lp ^ 1]
        boundary = set(rest.face_vertices(f))
        for y in verts:
            if y != x and y not in boundary:
                return False
    return True


def _splitter_free_exhaustive(emb: RotationEmbedding, colors: Sequence[int], max_cycles: int) -> bool:
    face_of = emb.face_of
    nfaces = len(emb.faces)
    m = len(emb.ends)
    # dual adjacency: faces joined across each edge
    for c in (0, 1):
        mono = [e for e in range(m) if colors[e] == c]
        for cyc_edges in _simple_cycles(emb.ends, mono, max_cycles):
            on_cycle = set(cyc_edges)
            cyc_verts = {x for e in cyc_edges for x in emb.ends[e]}
            # flood fill faces without crossing the cycle
            comp = [-1] * nfaces
            adj: dict[int, list[int]] = {}
            for e in range(m):
                if e in on_cycle:
                    continue
                f1, f2 = face_of[2 * e], face_of[2 * e + 1]
                adj.setdefault(f1, []).append(f2)
                adj.setdefault(f2, []).append(f1)
            label = 0
            for f in range(nfaces):
                if comp[f] != -1:
                    continue
                comp[f] = label
                stack = [f]
                while stack:
                    x = stack.pop()
                    for y in adj.get(x, ()):
                        if comp[y] == -1:
                            comp[y] = label
                            stack.append(y)
                label += 1
            dirty_sides: set[int] = set()
            for v, darts in emb.rotation.items():
                if v not in cyc_verts:
                    dirty_sides.add(comp[face_of[darts[0]]])
            for e in range(m):
                if e not in on_cycle and colors[e] != c:
                    dirty_sides.add(comp[face_of[2 * e]])
            if len(dirty_sides) >= 2:
                return False
    return True


def _simple_cycles(ends: Sequence[tuple[int, int]], edge_ids: Sequence[int], cap: int):
    """Yield each simple cycle (as an edge-id list) of the subgraph once."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edge_ids:
        a, b = ends[e]
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    count = 0
    for start in sorted(adj):
        # cycles whose smallest vertex is `start`
        path_edges: list[int] = []
        on_path = {start}
        stack = [(start, iter(adj[start]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w, e in it:
                if path_edges and e == path_edges[-1]:
                    continue
                if w == start and len(path_edges) >= 2:
                    # report each cycle in one direction only
                    first = path_edges[0]
                    if first < e:
                        count += 1
                        if count > cap:
                            raise RuntimeError("cycle enumeration cap exceeded")
                        yield path_edges + [e]
                    continue
                if w > start and w not in on_path:
                    on_path.add(w)
                    path_edges.append(e)
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if path_edges and stack:
                    path_edges.pop()
                    on_path.discard(v)
