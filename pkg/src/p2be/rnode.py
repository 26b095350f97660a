"""R-node processing.

A triconnected skeleton has one embedding up to a mirror (the mirror is the
parent's flip of this node), so all freedom left is the state and flip of each
child. The pass runs in four steps:

1. Per color, every block of the skeleton edges that carry a pole-to-pole path
   of that color must be outerplane around its single "dirty" face (the one
   holding foreign edges); chords must be real edges, and every other child on
   the block must turn its clean rim away from the dirty face.
2. For each joined color, the sides on which the node itself can offer a clean
   rim, together with the rims children must show for that.
3. Disjunctiveness at each skeleton vertex: children whose pattern at that
   vertex has both colors are the only unknowns; at most two may meet at a
   vertex, so constraints form paths and cycles.
4. A dynamic program over each path or cycle, then a product over them,
   assembling the patterns at the poles.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .engine import Q_STATES, BlockEngine, BlockRejected
from .graph import biconnected_edge_blocks
from .patterns import State, concat, cyclic_count
from .spqr import Q


@lru_cache(maxsize=None)
def _cyc_ok(parts: tuple) -> bool:
    return cyclic_count(concat(parts)) <= 2


def _restricted_faces(emb, slots: Sequence[int]) -> tuple[dict[int, int], dict[int, int], list[set[int]]]:
    """Faces of the sub-embedding on ``slots``.

    Returns (face of each dart, clockwise-next dart of the subset at the same
    vertex, vertex set per face). Darts use the skeleton numbering."""
    keep = set(slots)
    nxt: dict[int, int] = {}
    for w, darts in emb.rotation.items():
        sub = [d for d in darts if (d >> 1) in keep]
        k = len(sub)
        for i, d in enumerate(sub):
            nxt[d] = sub[(i + 1) % k]
    face: dict[int, int] = {}
    verts: list[set[int]] = []
    for d0 in nxt:
        if d0 in face:
            continue
        fid = len(verts)
        vs: set[int] = set()
        d = d0
        while d not in face:
            face[d] = fid
            vs.add(emb.tail(d))
            d = nxt[d ^ 1]
        verts.append(vs)
    return face, nxt, verts


def _dirty_faces(emb, nxt: dict[int, int], face: dict[int, int]) -> set[int]:
    """Faces of the sub-embedding whose angle at some vertex skips a dart that
    is not in the subset."""
    pos = emb.pos
    dirty: set[int] = set()
    for d, d2 in nxt.items():
        w = emb.tail(d)
        deg = len(emb.rotation[w])
        if (pos[d] + 1) % deg != pos[d2]:
            dirty.add(face[d ^ 1])
    return dirty


def process_r(eng: BlockEngine, nd, closed: bool):
    g = eng.g
    nodes = eng.nodes
    x = nd.id
    sk = nd.skeleton
    emb = eng.skeleton_embedding[x]
    ends = sk.edges
    m = len(ends)
    u, v = nd.poles
    sc = eng.slot_child[x]
    ref_c = g.colors[eng.tree.ref_edge]

    qcol: list[int | None] = [None] * m
    isc: list[tuple[bool, bool]] = [(False, False)] * m
    choices: dict[int, list[tuple[State, State, int]]] = {}
    for s in range(1, m):
        ch = sc[s]
        isc[s] = eng.is_c[ch]
        if nodes[ch].kind == Q:
            qcol[s] = g.colors[nodes[ch].edge]
        else:
            choices[s] = eng.frame_options(ch, True)
    if closed:
        qcol[0] = ref_c
        isc[0] = (ref_c == 0, ref_c == 1)

    # 1. rigid splitters and the rims they demand -----------------------
    req: dict[int, list[int]] = {s: [0, 0] for s in choices}
    for c in (0, 1):
        hc = [s for s in range(m) if isc[s][c] and (closed or s != 0)]
        blocks = [b for b in biconnected_edge_blocks(0, ends, hc) if len(b) >= 2]
        if not blocks:
            continue
        inb = [s for b in blocks for s in b]
        face, nxt, fverts = _restricted_faces(emb, inb)
        dirty = _dirty_faces(emb, nxt, face)
        for blk in blocks:
            bfaces = {face[2 * s] for s in blk} | {face[2 * s + 1] for s in blk}
            bd = bfaces & dirty
            if len(bd) != 1:
                raise BlockRejected("rigid-splitter", f"R-node {x}: {'rb'[c]}-block with {len(bd)} dirty faces")
            star = next(iter(bd))
            bverts = {z for s in blk for z in ends[s]}
            if not bverts <= fverts[star]:
                raise BlockRejected("rigid-splitter", f"R-node {x}: {'rb'[c]}-cycle with a vertex on each side")
            for s in blk:
                fl, fr = face[2 * s], face[2 * s + 1]
                if star not in (fl, fr):
                    if qcol[s] is None:
                        raise BlockRejected("rigid-splitter", f"R-node {x}: virtual {'rb'[c]}-chord")
                    continue
                if qcol[s] is None:
                    req[s][c] |= 1 if fl != star else 2

    # 2. rims this node can offer to its parent ----------------------------
    out_possible = [[False, False], [False, False]]
    out_req: list[tuple[int, int, int, int]] = []  # (slot, color, needed child bit, output bit index)
    if not closed:
        for c in (0, 1):
            if not eng.joined[x][c]:
                continue
            hp = [s for s in range(m) if isc[s][c] or s == 0]
            bplus = next(b for b in biconnected_edge_blocks(0, ends, hp) if 0 in b)
            if len(bplus) < 2:
                out_possible[c] = [True, True]
                continue
            face, nxt, fverts = _restricted_faces(emb, bplus)
            dirty = _dirty_faces(emb, nxt, face)
            bverts = {z for s in bplus for z in ends[s]}
            # side A is clean iff all dirt sits in the face on side B, and vice versa
            for side, far in ((0, face[0]), (1, face[1])):
                if not dirty <= {far} or not bverts <= fverts[far]:
                    continue
                ok = True
                reqs = []
                for s in bplus:
                    if s == 0:
                        continue
                    fl, fr = face[2 * s], face[2 * s + 1]
                    if far not in (fl, fr):
                        if qcol[s] is None:
                            ok = False
                            break
                        continue
                    if qcol[s] is None:
                        reqs.append((s, c, 1 if fl != far else 2, 2 * c + side))
                if ok:
                    out_possible[c][side] = True
                    out_req.extend(reqs)

    # 3. disjunctiveness structure -----------------------------------------
    def bich_at(s: int, w: int) -> bool:
        if s not in choices:
            return False
        eff = choices[s][0][0]
        return len(eff[0] if w == ends[s][0] else eff[1]) > 1

    def static_reading(d: int) -> tuple:
        s = d >> 1
        if qcol[s] is not None:
            return (qcol[s],)
        eff = choices[s][0][0]
        w = emb.tail(d)
        return eff[0] if w == ends[s][0] else eff[1][::-1]

    def reading(s: int, w: int, eff: State) -> tuple:
        return eff[0] if w == ends[s][0] else eff[1][::-1]

    unary: dict[int, list[tuple[int, tuple, tuple]]] = {}  # slot -> [(w, segment after, None)]
    binary: list[tuple[int, int, int, tuple, tuple]] = []  # (s1, s2, w, seg between s1..s2, seg s2..s1)
    pole_layout: dict[int, list] = {}
    for w, darts in emb.rotation.items():
        is_pole = not closed and w in (u, v)
        if is_pole:
            k0 = next(i for i, d in enumerate(darts) if (d >> 1) == 0)
            seq = darts[k0 + 1:] + darts[:k0]
            layout = []
            nvar = 0
            for d in seq:
                s = d >> 1
                if bich_at(s, w):
                    layout.append(("var", s))
                    nvar += 1
                else:
                    layout.append(("fix", static_reading(d)))
            if nvar > 2:
                raise BlockRejected("color-changes", f"R-node {x}: {nvar} two-colored children at pole {w}")
            pole_layout[w] = layout
            continue
        var = [i for i, d in enumerate(darts) if bich_at(d >> 1, w)]
        if len(var) > 2:
            raise BlockRejected("color-changes", f"R-node {x}: {len(var)} two-colored children at vertex {w}")
        if not var:
            if not _cyc_ok(tuple(static_reading(d) for d in darts)):
                raise BlockRejected("color-changes", f"R-node {x}: vertex {w}")
            continue
        k = len(darts)
        i0 = var[0]
        rot = [darts[(i0 + t) % k] for t in range(k)]
        if len(var) == 1:
            seg = concat(static_reading(d) for d in rot[1:])
            unary.setdefault(rot[0] >> 1, []).append((w, seg))
        else:
            j = (var[1] - i0) % k
            seg1 = concat(static_reading(d) for d in rot[1:j])
            seg2 = concat(static_reading(d) for d in rot[j + 1:])
            binary.append((rot[0] >> 1, rot[j] >> 1, w, seg1, seg2))

    # unary filters: splitter requirements, then lone disjunctive constraints
    def meets(eff: State, rq: list[int]) -> bool:
        return (eff[2] & rq[0]) == rq[0] and (eff[3] & rq[1]) == rq[1]

    def disj_unary(s: int, eff: State) -> bool:
        return all(_cyc_ok((reading(s, w, eff), seg)) for w, seg in unary.get(s, ()))

    filtered: dict[int, list[tuple[State, State, int]]] = {}
    loose: dict[int, list[tuple[State, State, int]]] = {}
    for s, opts in choices.items():
        rq = req[s]
        good = [o for o in opts if meets(o[0], rq)]
        if not good:
            only_r = any(meets(o[0], [rq[0], 0]) for o in opts)
            only_b = any(meets(o[0], [0, rq[1]]) for o in opts)
            reason = "rimmed-face-clash" if only_r and only_b else "rigid-splitter"
            raise BlockRejected(reason, f"R-node {x}: child {sc[s]} cannot turn its rims as required")
        good2 = [o for o in good if disj_unary(s, o[0])]
        if not good2:
            if any(disj_unary(s, o[0]) for o in opts):
                raise BlockRejected("contrast", f"R-node {x}: child {sc[s]} flip forced both ways")
            raise BlockRejected("color-changes", f"R-node {x}: child {sc[s]}")
        filtered[s] = good2
        loose[s] = [o for o in opts if disj_unary(s, o[0])]

    kill_req: dict[int, list[tuple[int, int, int]]] = {}
    for s, c, bit, k in out_req:
        kill_req.setdefault(s, []).append((c, bit, k))
    pole_ends: dict[int, list[int]] = {}
    for w, layout in pole_layout.items():
        for kind, val in layout:
            if kind == "var":
                pole_ends.setdefault(val, []).append(w)

    def compact(s: int, opts: list[tuple[State, State, int]]) -> list[tuple[State, State, int, int]]:
        """Collapse choices that look identical to everything around them."""
        a, b = ends[s]
        keep: dict[tuple, tuple[State, State, int, int]] = {}
        for eff, st, f in opts:
            kill = 0
            for c, bit, k in kill_req.get(s, ()):
                if not eff[2 + c] & bit:
                    kill |= 1 << k
            sig = (eff[0] if bich_at(s, a) else None, eff[1] if bich_at(s, b) else None, kill)
            if sig not in keep:
                keep[sig] = (eff, st, f, kill)
        return list(keep.values())

    comp_choices = {s: compact(s, filtered[s]) for s in filtered}

    # 4. dynamic program over the constraint paths and cycles ----------------
    adj: dict[int, list[tuple[int, int, tuple, tuple]]] = {s: [] for s in choices}
    for s1, s2, w, seg1, seg2 in binary:
        adj[s1].append((s2, w, seg1, seg2))
        adj[s2].append((s1, w, seg2, seg1))

    def pair_ok(s1: int, e1: State, s2: int, e2: State, w: int, seg1: tuple, seg2: tuple) -> bool:
        return _cyc_ok((reading(s1, w, e1), seg1, reading(s2, w, e2), seg2))

    def walk(start: int) -> tuple[list[int], list[tuple], bool]:
        """Slots of the component along its path (or cycle) and the
        constraints between consecutive slots."""
        comp = [start]
        seen = {start}
        stack = [start]
        while stack:
            y = stack.pop()
            for z, *_ in adj[y]:
                if z not in seen:
                    seen.add(z)
                    comp.append(z)
                    stack.append(z)
        ends_ = [y for y in comp if len(adj[y]) < 2]
        first = ends_[0] if ends_ else min(comp)
        cycle = not ends_
        order = [first]
        links: list[tuple] = []
        prev = -1
        cur = first
        while True:
            step = None
            for z, w, seg1, seg2 in adj[cur]:
                if z != prev and z != first and z not in order[1:]:
                    step = (z, w, seg1, seg2)
                    break
            if step is None:
                break
            links.append((cur,) + step)
            prev, cur = cur, step[0]
            order.append(cur)
        closing = None
        if cycle:
            for z, w, seg1, seg2 in adj[cur]:
                if z == first:
                    closing = (cur, z, w, seg1, seg2)
        return order, links + ([closing] if closing else []), cycle

    def pole_info(s: int, eff: State) -> tuple:
        return tuple((s, w, reading(s, w, eff)) for w in pole_ends.get(s, ()))

    def run_dp(order: list[int], links: list[tuple], cycle: bool, opts_of) -> dict:
        """Map (pole readings, surviving output bits) to a back-pointer chain."""
        first = order[0]
        layers = []
        layer = {}
        for j, (eff, _, _, kill) in enumerate(opts_of(first)):
            key = (j if cycle else -1, j, pole_info(first, eff), 15 & ~kill)
            layer.setdefault(key, None)
        layers.append(layer)
        for t in range(1, len(order)):
            s_prev, s_cur = order[t - 1], order[t]
            _, _, w, seg1, seg2 = links[t - 1]
            po, co = opts_of(s_prev), opts_of(s_cur)
            new = {}
            for key in layer:
                e_prev = po[key[1]][0]
                for j, (eff, _, _, kill) in enumerate(co):
                    if not pair_ok(s_prev, e_prev, s_cur, eff, w, seg1, seg2):
                        continue
                    nk = (key[0], j, key[2] + pole_info(s_cur, eff), key[3] & ~kill)
                    if nk not in new:
                        new[nk] = key
            if not new:
                return {}
            layers.append(new)
            layer = new
        result = {}
        for key in layer:
            if cycle and len(order) > 1:
                s_last, s_first, w, seg1, seg2 = links[-1]
                if not pair_ok(s_last, opts_of(s_last)[key[1]][0], s_first, opts_of(s_first)[key[0]][0], w, seg1, seg2):
                    continue
            rk = (key[2], key[3])
            if rk not in result:
                result[rk] = (layers, key)
        return result

    def unwind(order: list[int], opts_of, layers, key) -> dict[int, tuple]:
        picks = {}
        for t in range(len(order) - 1, -1, -1):
            picks[order[t]] = opts_of(order[t])[key[1]]
            key = layers[t][key]
        return picks

    done: set[int] = set()
    components = []
    for s in sorted(choices):
        if s in done:
            continue
        order, links, cycle = walk(s)
        done.update(order)
        opts_of = comp_choices.__getitem__
        res = run_dp(order, links, cycle, opts_of)
        if not res:
            loose_c = {y: compact(y, loose[y]) for y in order}
            if run_dp(order, links, cycle, loose_c.__getitem__):
                raise BlockRejected("contrast", f"R-node {x}: flips forced by colors and by rims disagree")
            raise BlockRejected("color-changes", f"R-node {x}: children {[sc[y] for y in order]}")
        components.append((order, opts_of, res))

    acc: dict[tuple, tuple] = {((), 15): ()}
    for ci, (_, _, res) in enumerate(components):
        new = {}
        for (pi, mk), chain in acc.items():
            for (pi2, mk2), ref in res.items():
                nk = (pi + pi2, mk & mk2)
                if nk not in new:
                    new[nk] = (chain, (ci, ref))
        acc = new
        if closed and len(acc) > 1:
            first_key = next(iter(acc))
            acc = {first_key: acc[first_key]}

    def recipe(chain) -> dict[int, tuple[State, int]]:
        out: dict[int, tuple[State, int]] = {}
        while chain:
            chain, (ci, (layers, key)) = chain
            order, opts_of, _ = components[ci]
            for s, (eff, st, f, _) in unwind(order, opts_of, layers, key).items():
                out[sc[s]] = (st, f)
        for s in range(1, m):
            if qcol[s] is not None:
                out[sc[s]] = (Q_STATES[qcol[s]], 0)
        return out

    if closed:
        return recipe(next(iter(acc.values())))

    raw: dict[State, object] = {}
    for (pi, mk), chain in acc.items():
        rd = {(s, w): r for s, w, r in pi}
        pats = []
        for w in (u, v):
            parts = []
            for kind, val in pole_layout[w]:
                parts.append(rd[(val, w)] if kind == "var" else val)
            pats.append(concat(parts))
        pu, pv = pats[0], pats[1][::-1]
        rims = [3, 3]
        for c in (0, 1):
            if eng.joined[x][c]:
                rims[c] = (1 if out_possible[c][0] and mk >> (2 * c) & 1 else 0) | (
                    2 if out_possible[c][1] and mk >> (2 * c + 1) & 1 else 0
                )
        st = (pu, pv, rims[0], rims[1])
        if st not in raw:
            raw[st] = chain
    fin = eng.finalize(x, raw)
    return {s: recipe(chain) for s, chain in fin.items()}
