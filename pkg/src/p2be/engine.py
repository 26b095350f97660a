"""Decide P2BE on a biconnected block by a bottom-up pass over its SPQR-tree.

Every node of the tree (below the root's child) gets a small table mapping
each non-dominated *state* of its pertinent graph (see
:mod:`p2be.patterns`) to a recipe that realises it: the states and flips its
children must take and, for P-nodes, their order. The root's child closes the
cycle with the reference edge and only has to be feasible. A second,
top-down pass follows the recipes and glues the skeleton rotations into one
rotation system of the block.

Nodes other than the root's child are processed in *open* mode: the rest of
the graph always holds a vertex outside their pertinent graph, so a cycle that
lies inside must keep its inner side clean. The root's child is processed in
*closed* mode, where the reference edge is an ordinary real edge.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .embedding import NotPlanar, RotationEmbedding, planar_embed
from .graph import ColoredGraph, biconnected_edge_blocks
from .patterns import (
    PBRB,
    PRBR,
    State,
    antichain,
    concat,
    cyclic_count,
    flip_state,
    rename_poles,
)
from .ptable import Entity, PContext, match
from .spqr import P, Q, R, S, SpqrTree, build_spqr
from .timing import NullTimer, Timer

REASONS = (
    "nonplanar",
    "non-outerplanar-monochromatic",
    "rigid-splitter",
    "rimmed-face-clash",
    "contrast",
    "p-node-count",
    "pole-pattern",
    "color-changes",
    "p-node-no-match",
    "rim-unavailable",
)


@dataclass(frozen=True)
class Negative:
    """A rejection with the name of the rule that fired."""

    reason: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return self.reason + (f" ({self.detail})" if self.detail else "")


class BlockRejected(Exception):
    def __init__(self, reason: str, detail: str = "") -> None:
        assert reason in REASONS, reason
        super().__init__(f"{reason}: {detail}")
        self.reason = reason
        self.detail = detail


class InternalInconsistency(RuntimeError):
    """A certificate failed its own verification; this is a bug."""


Q_STATES = (((0,), (0,), 3, 3), ((1,), (1,), 3, 3))


@lru_cache(maxsize=None)
def _joins(pv_prev: tuple, pu_next: tuple) -> bool:
    """Two consecutive S-node children meet disjunctively at their shared vertex."""
    return cyclic_count(concat((pu_next, pv_prev[::-1]))) <= 2


def _pick_reason(why: set[str], default: str) -> str:
    for r in ("rim-unavailable", "pole-pattern", "color-changes"):
        if r in why:
            return r
    return default


class BlockEngine:
    """All per-block state of the SPQR pass. Construct, then call :meth:`run`."""

    def __init__(self, g: ColoredGraph, ref_edge: int = 0, timer: Timer | None = None) -> None:
        self.g = g
        self.timer = timer or NullTimer()
        with self.timer.phase("spqr build"):
            self.tree: SpqrTree = build_spqr(g, ref_edge, check=False)
        self.nodes = self.tree.nodes
        n = len(self.nodes)
        self.slot_child: list[list[int]] = [[] for _ in range(n)]
        for nd in self.nodes:
            if nd.kind == Q:
                continue
            arr = [nd.parent] + [-1] * len(nd.children)
            for c, s in nd.child_slot.items():
                arr[s] = c
            self.slot_child[nd.id] = arr
        self.is_c: list[tuple[bool, bool]] = [(False, False)] * n
        self.cnt: list[dict[int, list[int]]] = [{} for _ in range(n)]
        self.joined: list[tuple[bool, bool]] = [(False, False)] * n
        self.forbid: list[tuple[frozenset, frozenset]] = [(frozenset(), frozenset())] * n
        self.results: list[dict | None] = [None] * n
        self.root_recipe = None
        self.skeleton_embedding: dict[int, RotationEmbedding] = {}
        self._p_memo: dict = {}

    # ------------------------------------------------------------------
    # preprocessing

    def preprocess_up(self) -> None:
        """Pole-to-pole monochromatic paths and pole color counts, bottom-up."""
        nodes = self.nodes
        colors = self.g.colors
        root = self.tree.root
        for x in self.tree.postorder():
            nd = nodes[x]
            if x == root:
                continue
            if nd.kind == Q:
                c = colors[nd.edge]
                a, b = nd.poles
                self.is_c[x] = (c == 0, c == 1)
                one = [1 - c, c]
                self.cnt[x] = {a: one, b: list(one)}
                continue
            u, v = nd.poles
            cu, cv = [0, 0], [0, 0]
            for ch in nd.children:
                cc = self.cnt[ch]
                if u in cc:
                    cu[0] += cc[u][0]
                    cu[1] += cc[u][1]
                if v in cc:
                    cv[0] += cc[v][0]
                    cv[1] += cc[v][1]
            self.cnt[x] = {u: cu, v: cv}
            kids = [self.is_c[ch] for ch in nd.children]
            if nd.kind == S:
                self.is_c[x] = (all(k[0] for k in kids), all(k[1] for k in kids))
            elif nd.kind == P:
                self.is_c[x] = (any(k[0] for k in kids), any(k[1] for k in kids))
            else:
                self.is_c[x] = (self._r_path(nd, 0), self._r_path(nd, 1))

    def _r_path(self, nd, c: int) -> bool:
        adj: dict[int, list[int]] = {}
        edges = nd.skeleton.edges
        sc = self.slot_child[nd.id]
        for s in range(1, len(edges)):
            if self.is_c[sc[s]][c]:
                a, b = edges[s]
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        u, v = nd.poles
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                return True
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def preprocess_down(self) -> None:
        """Joined flags and the colors the rest of the graph shows at each pole."""
        g = self.g
        deg = [[0, 0] for _ in range(g.n)]
        for (a, b), c in zip(g.edges, g.colors):
            deg[a][c] += 1
            deg[b][c] += 1
        nodes = self.nodes
        rc = self.tree.root_child
        ref_c = g.colors[self.tree.ref_edge]
        label = {rc.id: (ref_c == 0, ref_c == 1)}
        order = [rc.id]
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            nd = nodes[x]
            if nd.kind == Q:
                continue
            lab_par = label[x]
            sc = self.slot_child[x]
            labs = [lab_par] + [self.is_c[sc[s]] for s in range(1, len(sc))]
            on_cycle = [self._on_cycle(nd, labs, c) for c in (0, 1)]
            for s in range(1, len(sc)):
                ch = sc[s]
                j = (on_cycle[0][s], on_cycle[1][s])
                self.joined[ch] = j
                label[ch] = j
                order.append(ch)
                if nodes[ch].kind != Q:
                    fb = []
                    for p in nodes[ch].poles:
                        cc = self.cnt[ch][p]
                        bad = set()
                        if deg[p][1] - cc[1] > 0:
                            bad.add(PRBR)
                        if deg[p][0] - cc[0] > 0:
                            bad.add(PBRB)
                        fb.append(frozenset(bad))
                    self.forbid[ch] = (fb[0], fb[1])

    def _on_cycle(self, nd, labs: list[tuple[bool, bool]], c: int) -> list[bool]:
        k = len(labs)
        marked = [s for s in range(k) if labs[s][c]]
        out = [False] * k
        if nd.kind == S:
            if len(marked) == k:
                out = [True] * k
        elif nd.kind == P:
            if len(marked) >= 2:
                for s in marked:
                    out[s] = True
        else:
            for blk in biconnected_edge_blocks(0, nd.skeleton.edges, marked):
                if len(blk) >= 2:
                    for s in blk:
                        out[s] = True
        return out

    # ------------------------------------------------------------------
    # node processing

    def run(self) -> None:
        with self.timer.phase("preprocess-up"):
            self.preprocess_up()
        with self.timer.phase("preprocess-down"):
            self.preprocess_down()
        with self.timer.phase("skeleton embedding"):
            self.embed_skeletons()
        from .rnode import process_r

        nodes = self.nodes
        rc = self.tree.root_child.id
        root = self.tree.root
        t_nodes = time.perf_counter()
        for x in self.tree.postorder():
            nd = nodes[x]
            if x == root:
                continue
            if nd.kind == Q:
                self.results[x] = {Q_STATES[self.g.colors[nd.edge]]: None}
                continue
            closed = x == rc
            t0 = time.perf_counter()
            if nd.kind == S:
                out = self._process_s(nd, closed)
            elif nd.kind == P:
                out = self._process_p(nd, closed)
            else:
                out = process_r(self, nd, closed)
            self.timer.add("node:" + nd.kind, time.perf_counter() - t0)
            self.timer.count("nodes:" + nd.kind)
            if closed:
                self.root_recipe = out
            else:
                self.results[x] = out
        self.timer.count("nodes:Q", self.tree.graph.m)
        self.timer.add("node processing", time.perf_counter() - t_nodes)

    def embed_skeletons(self) -> None:
        """Embed every R skeleton up front, so a nonplanar block is reported as
        such before any other rule gets a chance to fire."""
        for nd in self.nodes:
            if nd.kind == R:
                try:
                    self.skeleton_embedding[nd.id] = planar_embed(nd.skeleton)
                except NotPlanar:
                    raise BlockRejected("nonplanar", f"R-node {nd.id} skeleton") from None

    def frame_options(self, cid: int, forward: bool) -> list[tuple[State, State, int]]:
        """Options of child ``cid`` in its parent's frame: (state seen by the
        parent, child's own state, flip). ``forward`` means the child's first
        pole is the parent's first pole."""
        out: dict[State, tuple[State, State, int]] = {}
        res = self.results[cid]
        assert res is not None
        for s in res:
            for f in (0, 1):
                eff = flip_state(s) if f else s
                if not forward:
                    eff = rename_poles(eff)
                if eff not in out:
                    out[eff] = (eff, s, f)
        return list(out.values())

    def finalize(self, x: int, raw: dict[State, object]) -> dict[State, object]:
        """Apply the rest-of-graph pole prune and the joined-rim requirement,
        normalise vacuous rims and drop dominated states."""
        jr = self.joined[x]
        fu, fv = self.forbid[x]
        out: dict[State, object] = {}
        why: set[str] = set()
        for s, rec in raw.items():
            pu, pv, rr, rb = s
            if len(pu) > 3 or len(pv) > 3:
                why.add("color-changes")
                continue
            if pu in fu or pv in fv:
                why.add("pole-pattern")
                continue
            rims = [rr, rb]
            ok = True
            for c in (0, 1):
                if not jr[c]:
                    rims[c] = 3
                elif rims[c] == 0:
                    ok = False
            if not ok:
                why.add("rim-unavailable")
                continue
            key = (pu, pv, rims[0], rims[1])
            if key not in out:
                out[key] = rec
        if not out:
            raise BlockRejected(_pick_reason(why, "color-changes"), f"{self.nodes[x].kind}-node {x}")
        keep = antichain(out)
        return {s: out[s] for s in keep}

    # S-nodes ------------------------------------------------------------

    def _process_s(self, nd, closed: bool):
        u, v = nd.poles
        x = u
        opts: list[list[tuple[State, State, int]]] = []
        for cid in nd.children:
            a, b = self.nodes[cid].poles
            fwd = a == x
            x = b if fwd else a
            opts.append(self.frame_options(cid, fwd))
        # key: (pu of first child, AND of red rims, AND of blue rims, pv of current child)
        layers: list[dict] = []
        layer: dict = {}
        for j, (eff, _, _) in enumerate(opts[0]):
            layer.setdefault((eff[0], eff[2], eff[3], eff[1]), (None, j))
        layers.append(layer)
        for i in range(1, len(opts)):
            new: dict = {}
            for key in layer:
                pv_prev = key[3]
                for j, (eff, _, _) in enumerate(opts[i]):
                    if not _joins(pv_prev, eff[0]):
                        continue
                    nk = (key[0], key[1] & eff[2], key[2] & eff[3], eff[1])
                    if nk not in new:
                        new[nk] = (key, j)
            if not new:
                raise BlockRejected("color-changes", f"S-node {nd.id} at vertex {self._s_vertex(nd, i)}")
            layers.append(new)
            layer = new
        all_c = [all(self.is_c[c][k] for c in nd.children) for k in (0, 1)]

        def recipe(key) -> list[tuple[int, State, int]]:
            picks = []
            for i in range(len(layers) - 1, -1, -1):
                prev, j = layers[i][key]
                picks.append(j)
                key = prev
            picks.reverse()
            return [(cid, opts[i][j][1], opts[i][j][2]) for i, (cid, j) in enumerate(zip(nd.children, picks))]

        if closed:
            rc = self.g.colors[self.tree.ref_edge]
            for key in layer:
                pu, rr, rb, pv = key
                if cyclic_count(concat(((rc,), pu))) > 2 or cyclic_count(concat(((rc,), pv))) > 2:
                    continue
                if all_c[rc] and (rr, rb)[rc] == 0:
                    continue
                return recipe(key)
            raise BlockRejected(
                "rigid-splitter" if all_c[rc] and self._s_closed_disjunctive(layer, rc) else "color-changes",
                f"S-node {nd.id} closing the reference cycle",
            )
        raw: dict[State, object] = {}
        for key in layer:
            pu, rr, rb, pv = key
            st = (pu, pv, rr if all_c[0] else 3, rb if all_c[1] else 3)
            if st not in raw:
                raw[st] = key
        fin = self.finalize(nd.id, raw)
        return {s: recipe(k) for s, k in fin.items()}

    def _s_closed_disjunctive(self, layer, rc: int) -> bool:
        return any(
            cyclic_count(concat(((rc,), k[0]))) <= 2 and cyclic_count(concat(((rc,), k[3]))) <= 2 for k in layer
        )

    def _s_vertex(self, nd, i: int) -> int:
        x = nd.poles[0]
        for cid in nd.children[:i]:
            a, b = self.nodes[cid].poles
            x = b if a == x else a
        return x

    # P-nodes ------------------------------------------------------------

    def _process_p(self, nd, closed: bool):
        u, v = nd.poles
        nodes = self.nodes
        colors = self.g.colors
        ref_c = colors[self.tree.ref_edge]
        ents: list[Entity] = []
        prov: list[list] = []  # per entity: per option, list of (child, state, flip)
        groups: dict[tuple, int] = {}
        n_c = [0, 0]
        q_c = [0, 0]
        n_br = 0
        for cid in nd.children:
            ch = nodes[cid]
            isc = self.is_c[cid]
            n_c[0] += isc[0]
            n_c[1] += isc[1]
            n_br += isc[0] and isc[1]
            if ch.kind == Q:
                c = colors[ch.edge]
                q_c[c] += 1
                st = Q_STATES[c]
                ents.append(Entity((st,), c, isc))
                prov.append([[(cid, st, 0)]])
                continue
            opts = self.frame_options(cid, ch.poles[0] == u)
            plain = not isc[0] and not isc[1] and all(len(o[0][0]) == 1 and len(o[0][1]) == 1 for o in opts)
            if plain:
                eff, s, f = opts[0]
                cls = (eff[0], eff[1])
                if cls in groups:
                    prov[groups[cls]][0].append((cid, s, f))
                    continue
                groups[cls] = len(ents)
                ents.append(Entity(((eff[0], eff[1], 3, 3),)))
                prov.append([[(cid, s, f)]])
                continue
            ents.append(Entity(tuple(o[0] for o in opts), None, isc))
            prov.append([[(cid, o[1], o[2])] for o in opts])
        if closed:
            n_c[ref_c] += 1
            q_c[ref_c] += 1
        for c in (0, 1):
            if n_c[c] > 3 or (n_c[c] == 3 and q_c[c] == 0):
                raise BlockRejected("p-node-count", f"P-node {nd.id}: {n_c[c]} {'rb'[c]}-edges")
        if n_br > 2 or (n_br == 2 and not (closed and len(nd.children) == 2)):
            raise BlockRejected("p-node-count", f"P-node {nd.id}: {n_br} edges carry both colors")
        self._p_pole_precheck(nd, ents, closed, ref_c)
        ctx = PContext(
            closed=closed,
            ref_color=ref_c,
            joined=self.joined[nd.id] if not closed else (False, False),
            forbid_u=self.forbid[nd.id][0],
            forbid_v=self.forbid[nd.id][1],
        )
        order = sorted(range(len(ents)), key=lambda i: ents[i].key())
        sorted_ents = tuple(ents[i] for i in order)
        memo_key = (sorted_ents, ctx)
        found = self._p_memo.get(memo_key)
        if found is None:
            found = match(sorted_ents, ctx, first_only=closed)
            self._p_memo[memo_key] = found
        if not found:
            if not closed and any(ctx.joined):
                relaxed = PContext(False, ref_c, (False, False), ctx.forbid_u, ctx.forbid_v)
                if match(sorted_ents, relaxed, first_only=True):
                    raise BlockRejected("rim-unavailable", f"P-node {nd.id}")
            raise BlockRejected("p-node-no-match", f"P-node {nd.id}")

        def recipe(arr) -> list[tuple[int, State, int]]:
            out = []
            for ei, oi in arr:
                out.extend(prov[order[ei]][oi])
            return out

        if closed:
            return recipe(next(iter(found.values())))
        return {s: recipe(arr) for s, arr in found.items()}

    def _p_pole_precheck(self, nd, ents: list[Entity], closed: bool, ref_c: int) -> None:
        for side in (0, 1):
            colsets = [set().union(*(set(o[side]) for o in e.options)) for e in ents]
            if closed:
                colsets.append({ref_c})
            bich = [i for i, cs in enumerate(colsets) if len(cs) == 2]
            if len(bich) > 2:
                raise BlockRejected("pole-pattern", f"P-node {nd.id}: {len(bich)} two-colored children at pole {nd.poles[side]}")
            for i in bich:
                e = ents[i]
                if all(len(o[side]) == 3 for o in e.options):
                    outer = e.options[0][side][0]
                    if any(j != i and (1 - outer) in cs for j, cs in enumerate(colsets)):
                        raise BlockRejected("pole-pattern", f"P-node {nd.id}: forced three-block child at pole {nd.poles[side]}")

    # ------------------------------------------------------------------
    # composition

    def compose(self) -> RotationEmbedding:
        """Follow the recipes top-down and glue skeleton rotations together."""
        nodes = self.nodes
        g = self.g
        rc = self.tree.root_child.id
        n = len(nodes)
        mirror = [0] * n
        recipe: list = [None] * n
        order_p: dict[int, list[int]] = {}
        recipe[rc] = self.root_recipe
        queue = [rc]
        i = 0
        while i < len(queue):
            x = queue[i]
            i += 1
            nd = nodes[x]
            rec = recipe[x]
            if nd.kind == R:
                items = rec.items()
            else:
                items = [(cid, (s, f)) for cid, s, f in rec]
                if nd.kind == P:
                    order_p[x] = [cid for cid, _, _ in rec]
            for cid, (s, f) in items:
                mirror[cid] = mirror[x] ^ f
                if nodes[cid].kind != Q:
                    recipe[cid] = self.results[cid][s]
                    queue.append(cid)
        # home node of each vertex: where it is not a pole (any vertex of the root child)
        home: dict[int, int] = {}
        for x in queue:
            nd = nodes[x]
            for w in nd.skeleton.vertices:
                if x == rc or w not in nd.poles:
                    home[w] = x
        rot_cache: dict[int, dict[int, list[int]]] = {}

        def skel_rot(x: int, w: int) -> list[int]:
            r = rot_cache.get(x)
            if r is None:
                r = self._skeleton_rotations(x, order_p.get(x))
                rot_cache[x] = r
            return r[w]

        rotation: dict[int, list[int]] = {}
        edges = g.edges
        for w in range(g.n):
            if w not in home:
                continue
            h = home[w]
            top = skel_rot(h, w)
            if mirror[h]:
                top = top[::-1]
            out: list[int] = []
            stack = [(h, iter(top))]
            while stack:
                x, it = stack[-1]
                s = next(it, None)
                if s is None:
                    stack.pop()
                    continue
                ch = self.slot_child[x][s]
                cn = nodes[ch]
                if cn.kind == Q:
                    e = cn.edge
                    out.append(2 * e if edges[e][0] == w else 2 * e + 1)
                    continue
                lst = skel_rot(ch, w)[1:]
                if mirror[ch]:
                    lst = lst[::-1]
                stack.append((ch, iter(lst)))
            rotation[w] = out
        return RotationEmbedding(list(g.edges), rotation)

    def _skeleton_rotations(self, x: int, p_order: list[int] | None) -> dict[int, list[int]]:
        """Clockwise slot order around every skeleton vertex, parent slot first
        at the poles."""
        nd = self.nodes[x]
        u, v = nd.poles
        cs = nd.child_slot
        if nd.kind == S:
            out = {}
            w = u
            prev = 0
            for cid in nd.children:
                a, b = self.nodes[cid].poles
                nxt = b if a == w else a
                out[w] = [prev, cs[cid]]
                prev = cs[cid]
                w = nxt
            out[v] = [0, prev]
            return out
        if nd.kind == P:
            assert p_order is not None
            slots = [cs[c] for c in p_order]
            return {u: [0] + slots, v: [0] + slots[::-1]}
        emb = self.skeleton_embedding[x]
        out = {}
        for w, darts in emb.rotation.items():
            sl = [d >> 1 for d in darts]
            if 0 in sl:
                k = sl.index(0)
                sl = sl[k:] + sl[:k]
            out[w] = sl
        return out
