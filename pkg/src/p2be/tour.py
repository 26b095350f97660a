"""Spine extraction from a disjunctive, splitter-free embedding of a block.

The green graph puts one node in every face and joins each vertex to the faces
where its colors change: a vertex whose red run is followed clockwise by its
blue run inside face ``f`` gets the arc ``v -> f``, the opposite change gets
``f -> v``, and a one-colored vertex gets a two-way link to a face that holds
an edge of the other color. Every vertex then has one arc in and one arc out,
and arcs alternate around every face node.

Peeling the outer boundary layer by layer splits the arcs into directed
closed walks that form a tree (each walk touches one of the previous layer).
Walking that tree depth-first, entering a child walk through the arc that
follows the incoming arc clockwise, gives an Eulerian tour whose transitions
never cross; the order in which it meets the vertices is the spine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .embedding import RotationEmbedding


class TourError(RuntimeError):
    """A structural invariant of the green graph or its tour failed."""


@dataclass
class GreenGraph:
    """Plane digraph on block vertices (ids ``0..nv-1``) and face nodes
    (``nv + f``). Arc ``k`` owns darts ``2k`` (forward) and ``2k + 1``."""

    nv: int
    labels: list[int]
    arcs: list[tuple[int, int]]
    embedding: RotationEmbedding
    outer_face: int

    @property
    def num_nodes(self) -> int:
        return len(self.embedding.rotation)

    def is_face_node(self, x: int) -> bool:
        return x >= self.nv


@dataclass
class BoundariesTree:
    """Directed closed walks found by peeling, with their layer index."""

    cycles: list[list[int]]  # arc ids in walk order
    step: list[int]
    parent: list[int]
    children: list[list[int]] = field(default_factory=list)
    # 0 if the outside of the walk lies clockwise after each incoming arc, 1 if counterclockwise
    side: list[int] = field(default_factory=list)

    @property
    def root(self) -> int:
        return 0


def build_green_graph(emb: RotationEmbedding, colors: Sequence[int]) -> GreenGraph:
    """Green graph of a block embedding; ``colors[e]`` is the color of
    ``emb.ends[e]``."""
    labels = sorted(emb.rotation)
    local = {v: i for i, v in enumerate(labels)}
    nv = len(labels)
    face_of = emb.face_of
    faces = emb.faces
    # green arcs sitting in the angle after dart d (clockwise) at its tail
    in_angle: dict[int, list[int]] = {}
    arcs: list[tuple[int, int]] = []

    def add(d_angle: int, src: int, dst: int) -> None:
        in_angle.setdefault(d_angle, []).append(len(arcs))
        arcs.append((src, dst))

    has_color: list[list[bool]] = [[False, False] for _ in faces]
    for f, cyc in enumerate(faces):
        for d in cyc:
            has_color[f][colors[d >> 1]] = True
    for v in labels:
        darts = emb.rotation[v]
        k = len(darts)
        x = local[v]
        changes = 0
        for i, d in enumerate(darts):
            d2 = darts[(i + 1) % k]
            c1, c2 = colors[d >> 1], colors[d2 >> 1]
            if c1 == c2:
                continue
            changes += 1
            f = nv + face_of[d ^ 1]
            if c1 == 0:
                add(d, x, f)
            else:
                add(d, f, x)
        if changes == 0:
            c = colors[darts[0] >> 1]
            best = None
            for d in darts:
                f = face_of[d ^ 1]
                if has_color[f][1 - c] and (best is None or f < face_of[best ^ 1]):
                    best = d
            if best is None:
                raise TourError(f"one-colored vertex {v} sees no face with the other color")
            f = nv + face_of[best ^ 1]
            add(best, x, f)
            add(best, f, x)
        elif changes != 2:
            raise TourError(f"vertex {v} has {changes} color changes")

    # A one-colored vertex's two arcs share one angle. Their order there must
    # keep arcs alternating around the face node, so orient them against the
    # nearest single arc met before them along the face.
    for f, cyc in enumerate(faces):
        corners = [d ^ 1 for d in cyc if (d ^ 1) in in_angle]
        if not corners:
            continue
        k = len(corners)
        anchor = next((i for i, d in enumerate(corners) if len(in_angle[d]) == 1), None)
        if anchor is None:
            raise TourError(f"face {f} meets only one-colored vertices")
        expect_in = arcs[in_angle[corners[anchor]][0]][1] != nv + f  # next one after an out-arc
        for t in range(1, k + 1):
            lst = in_angle[corners[(anchor + t) % k]]
            if len(lst) == 1:
                expect_in = arcs[lst[0]][1] != nv + f
                continue
            # lst = [leave w, enter w]; in trace order the face meets them
            # as [into f, out of f] unless swapped
            if not expect_in:
                lst.reverse()

    rotation: dict[int, list[int]] = {}
    for v in labels:
        out: list[int] = []
        x = local[v]
        for d in emb.rotation[v]:
            for a in in_angle.get(d, ()):
                out.append(2 * a if arcs[a][0] == x else 2 * a + 1)
        rotation[x] = out
    for f, cyc in enumerate(faces):
        fx = nv + f
        seq: list[int] = []
        for d in cyc:
            # the corner at the head of d is the angle after d ^ 1 there
            for a in in_angle.get(d ^ 1, ()):
                seq.append(2 * a if arcs[a][0] == fx else 2 * a + 1)
        if seq:  # a face with no color change anywhere gets no node
            seq.reverse()  # the trace runs counterclockwise around the face
            rotation[fx] = seq
    gemb = RotationEmbedding(arcs, rotation)
    gfaces = gemb.faces
    outer = max(range(len(gfaces)), key=lambda i: (len(gfaces[i]), -i))
    return GreenGraph(nv, labels, arcs, gemb, outer)


def check_green_graph(gg: GreenGraph) -> None:
    """Raise :class:`TourError` unless every vertex has one arc in and one out,
    arcs alternate around every face node, the graph is connected and the
    embedding satisfies Euler's formula."""
    arcs = gg.arcs
    for x, darts in gg.embedding.rotation.items():
        dirs = [(d & 1) for d in darts]  # 0 = leaving x along the arc
        if not gg.is_face_node(x):
            if sorted(dirs) != [0, 1]:
                raise TourError(f"vertex {gg.labels[x]} has in/out {dirs.count(1)}/{dirs.count(0)}")
        else:
            k = len(dirs)
            if k % 2 or any(dirs[i] == dirs[(i + 1) % k] for i in range(k)):
                raise TourError(f"arcs do not alternate around face node {x - gg.nv}")
    parent = {x: x for x in gg.embedding.rotation}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in arcs:
        parent[find(a)] = find(b)
    if len({find(x) for x in parent}) > 1:
        raise TourError("green graph is disconnected")
    if not gg.embedding.euler_ok():
        raise TourError("green graph embedding fails Euler's formula")


def peel_boundaries(gg: GreenGraph) -> BoundariesTree:
    """Split the arcs into the layers of boundary walks around the outer face.

    Faces are layered by their distance from the outer face in the dual; the
    arcs of layer ``i`` are those whose nearer face sits at distance ``i``.
    Each layer is traced as the outer face of what remains, using circular
    rotation lists from which earlier layers are unlinked."""
    emb = gg.embedding
    gfaces = emb.faces
    face_of = emb.face_of
    nf = len(gfaces)
    adj: list[list[int]] = [[] for _ in range(nf)]
    for k in range(len(gg.arcs)):
        f1, f2 = face_of[2 * k], face_of[2 * k + 1]
        adj[f1].append(f2)
        adj[f2].append(f1)
    depth = [-1] * nf
    depth[gg.outer_face] = 0
    queue = [gg.outer_face]
    for f in queue:
        for h in adj[f]:
            if depth[h] < 0:
                depth[h] = depth[f] + 1
                queue.append(h)
    m = len(gg.arcs)
    layer = [0] * m
    start_dart = [0] * m
    for k in range(m):
        d1, d2 = depth[face_of[2 * k]], depth[face_of[2 * k + 1]]
        if abs(d1 - d2) != 1:
            raise TourError(f"arc {k} separates faces at depths {d1} and {d2}")
        layer[k] = min(d1, d2)
        start_dart[k] = 2 * k if d1 < d2 else 2 * k + 1
    nxt = [0] * (2 * m)
    prv = [0] * (2 * m)
    for darts in emb.rotation.values():
        k = len(darts)
        for i, d in enumerate(darts):
            nxt[d] = darts[(i + 1) % k]
            prv[d] = darts[i - 1]
    by_layer: list[list[int]] = [[] for _ in range(max(layer, default=-1) + 1)]
    for k in range(m):
        by_layer[layer[k]].append(k)

    cycles: list[list[int]] = []
    steps: list[int] = []
    parents: list[int] = []
    sides: list[int] = []
    last_cycle_at: dict[int, int] = {}
    seen = [False] * m
    for i, ks in enumerate(by_layer):
        fresh: list[int] = []
        for k0 in ks:
            if seen[k0]:
                continue
            walk: list[int] = []
            d = start_dart[k0]
            parity = d & 1
            while True:
                k = d >> 1
                if seen[k]:
                    break
                if (d & 1) != parity or layer[k] != i:
                    raise TourError(f"layer {i} boundary is not a directed cycle")
                seen[k] = True
                walk.append(k)
                d = nxt[d ^ 1]
            if d != start_dart[k0]:
                raise TourError(f"layer {i} boundary walk does not close")
            if parity:
                walk.reverse()
            cid = len(cycles)
            cycles.append(walk)
            sides.append(parity)
            steps.append(i)
            par = -1
            if i > 0:
                for k in walk:
                    c = last_cycle_at.get(gg.arcs[k][0])
                    if c is not None and steps[c] == i - 1:
                        par = c
                        break
                if par < 0:
                    raise TourError(f"boundary cycle {cid} touches no cycle of the previous layer")
            parents.append(par)
            fresh.append(cid)
        for cid in fresh:
            for k in cycles[cid]:
                last_cycle_at[gg.arcs[k][0]] = cid
        for k in ks:
            for d in (2 * k, 2 * k + 1):
                a, b = prv[d], nxt[d]
                nxt[a] = b
                prv[b] = a
    if by_layer and sum(1 for s in steps if s == 0) != 1:
        raise TourError("the outer boundary is not a single closed walk")
    children: list[list[int]] = [[] for _ in cycles]
    for c, p in enumerate(parents):
        if p >= 0:
            children[p].append(c)
    return BoundariesTree(cycles, steps, parents, children, sides)


def euler_tour(gg: GreenGraph, bt: BoundariesTree) -> list[int]:
    """Arc sequence of the tour; starts at the lowest arc id of the root walk.

    On reaching a node along a walk, the child walks hanging there are
    entered one by one, each through its arc nearest to the incoming arc on
    the inner side of the walk; the scan stops at the next arc of the walk
    itself, so a child is only entered from the angle it sits in."""
    arcs = gg.arcs
    emb = gg.embedding
    pos = emb.pos
    rot = emb.rotation
    cycle_of = [0] * len(arcs)
    for c, walk in enumerate(bt.cycles):
        for k in walk:
            cycle_of[k] = c
    root = bt.cycles[0] if bt.cycles else []
    if not root:
        return []
    entry: dict[int, dict[int, int]] = {}  # cycle -> arc -> index in walk
    for c, walk in enumerate(bt.cycles):
        if c:
            entry[c] = {k: j for j, k in enumerate(walk)}
    visited = [False] * len(bt.cycles)
    visited[0] = True
    tour: list[int] = []
    s0 = min(range(len(root)), key=lambda j: root[j])
    stack = [[0, s0, 0]]
    pending = False
    while stack:
        top = stack[-1]
        c = top[0]
        if pending:
            pending = False
            a = tour[-1]
            x = arcs[a][1]
            darts = rot[x]
            deg = len(darts)
            step = 1 if bt.side[c] else -1
            p = pos[2 * a + 1]
            for _ in range(deg - 1):
                p = (p + step) % deg
                d = darts[p]
                k = d >> 1
                owner = cycle_of[k]
                if owner == c:
                    break
                if not (d & 1) and bt.parent[owner] == c and not visited[owner]:
                    visited[owner] = True
                    stack.append([owner, entry[owner][k], 0])
                    break
            if stack[-1] is not top:
                continue
        walk = bt.cycles[c]
        if top[2] == len(walk):
            stack.pop()
            pending = bool(stack)
            continue
        tour.append(walk[(top[1] + top[2]) % len(walk)])
        top[2] += 1
        pending = True
    if len(tour) != len(arcs):
        raise TourError(f"tour covers {len(tour)} of {len(arcs)} arcs")
    return tour


def audit_tour(gg: GreenGraph, tour: Sequence[int]) -> bool:
    """True iff the tour is a closed Eulerian walk whose in/out pairings at
    every node are pairwise non-crossing in the rotation."""
    arcs = gg.arcs
    if sorted(tour) != list(range(len(arcs))):
        return False
    k = len(tour)
    for i in range(k):
        if arcs[tour[i]][1] != arcs[tour[(i + 1) % k]][0]:
            return False
    pos = gg.embedding.pos
    pair_at: dict[int, list[tuple[int, int]]] = {}
    for i in range(k):
        a, b = tour[i], tour[(i + 1) % k]
        pair_at.setdefault(arcs[a][1], []).append((pos[2 * a + 1], pos[2 * b]))
    for x, pairs in pair_at.items():
        if len(pairs) < 2:
            continue
        owner = {}
        for pid, (p, q) in enumerate(pairs):
            owner[p] = pid
            owner[q] = pid
        stack: list[int] = []
        for p in sorted(owner):
            pid = owner[p]
            if stack and stack[-1] == pid:
                stack.pop()
            else:
                stack.append(pid)
        if stack:
            return False
    return True


def spine_order(gg: GreenGraph, tour: Sequence[int]) -> list[int]:
    """Block vertices in the order the tour reaches them."""
    return [gg.labels[gg.arcs[a][1]] for a in tour if gg.arcs[a][1] < gg.nv]


def block_spine(emb: RotationEmbedding, colors: Sequence[int], timer=None, audit: bool = True) -> tuple[list[int], GreenGraph, list[int]]:
    """Full tour pipeline for one bichromatic block: (spine, green graph, tour)."""
    from .timing import NullTimer

    timer = timer or NullTimer()
    with timer.phase("green-graph build"):
        gg = build_green_graph(emb, colors)
        check_green_graph(gg)
    with timer.phase("peeling"):
        bt = peel_boundaries(gg)
    with timer.phase("tour"):
        tour = euler_tour(gg, bt)
        if audit and not audit_tour(gg, tour):
            raise TourError("tour crosses itself")
        spine = spine_order(gg, tour)
    if len(spine) != gg.nv:
        raise TourError("tour does not meet every vertex exactly once")
    return spine, gg, tour
