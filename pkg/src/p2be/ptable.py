"""Admissible P-node orders: the alignment table, its matcher and a brute force.

The table enumerates, for every ordered pair of color-patterns (one per
pole), every alignment of their color-change points. An alignment is a weak
ordering of the change points of the two patterns; discretising it gives a
list of monochromatic segments, and a two-colored "change" slot is inserted
between consecutive segments. Monochromatic slot classes that repeat are
resolved by keeping one instance at a time, except when the only repeat is the
same class at both ends of the list, which yields a single entry.

The matcher turns entries back into alternating ``m c m ... m`` templates and
places concrete children into them; every placement is then checked exactly by
:func:`evaluate`. :func:`brute_force` tries all orders and options instead and
is what the matcher is tested against.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .patterns import ALL_PATTERNS, Pattern, State, antichain, concat, cyclic_count, name

CLOSED_OK: State = ((), (), 3, 3)


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True)
class Slot:
    """One virtual edge of a table entry."""

    pu: Pattern
    pv: Pattern
    rimmed: tuple[int, ...] = ()  # colors whose rim this slot must provide
    end: str | None = None  # "first"/"last": its rim must face away from the others

    @property
    def mono(self) -> bool:
        return len(self.pu) == 1 and len(self.pv) == 1

    def __str__(self) -> str:
        return f"{name(self.pu)}/{name(self.pv)}"


@dataclass(frozen=True)
class Entry:
    sigma_u: Pattern
    sigma_v: Pattern
    alignment: tuple[tuple[int, ...], tuple[int, ...]]
    slots: tuple[Slot, ...]

    def key(self) -> tuple:
        return tuple((s.pu, s.pv) for s in self.slots)

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.slots)


def alignments(n1: int, n2: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All weak orderings of ``n1`` increasing points against ``n2`` increasing
    points, as dense rank vectors."""
    out = set()
    tot = n1 + n2
    for ranks in itertools.product(range(tot), repeat=tot):
        a, b = ranks[:n1], ranks[n1:]
        if any(a[i] >= a[i + 1] for i in range(n1 - 1)):
            continue
        if any(b[i] >= b[i + 1] for i in range(n2 - 1)):
            continue
        if sorted(set(ranks)) != list(range(len(set(ranks)))):
            continue
        out.add((a, b))
    return sorted(out)


def discretize(s1: Pattern, s2: Pattern, a: Sequence[int], b: Sequence[int]) -> list[tuple[int, int]]:
    """Color pairs of the segments cut out by the aligned change points."""
    npos = max(list(a) + list(b) + [-1]) + 1
    return [(s1[sum(1 for x in a if x < k)], s2[sum(1 for x in b if x < k)]) for k in range(npos + 1)]


def _change(prev: int, cur: int) -> Pattern:
    return (prev, cur) if prev != cur else (cur,)


def _entry_slots(z: list[tuple[int, int]]) -> list[Slot]:
    slots: list[Slot] = []
    last = len(z) - 1
    for k, (cu, cv) in enumerate(z):
        if k:
            pu, pv = _change(z[k - 1][0], cu), _change(z[k - 1][1], cv)
            rim = tuple(sorted({pu[0]} & {pv[0]} | {pu[-1]} & {pv[-1]}))
            slots.append(Slot(pu, pv, rim))
        end = "first" if k == 0 else ("last" if k == last else None)
        slots.append(Slot((cu,), (cv,), (cu,) if cu == cv else (), end))
    return slots


def build_p_node_table() -> list[Entry]:
    """The list of admissible P-node child sequences."""
    return list(_table())


@lru_cache(maxsize=1)
def _table() -> tuple[Entry, ...]:
    out: list[Entry] = []
    seen: set[tuple] = set()
    for s1 in ALL_PATTERNS:
        for s2 in ALL_PATTERNS:
            for a, b in alignments(len(s1) - 1, len(s2) - 1):
                slots = _entry_slots(discretize(s1, s2, a, b))
                mono = [(s.pu, s.pv) for s in slots if s.mono]
                dup = [c for c in dict.fromkeys(mono) if mono.count(c) > 1]
                variants: list[list[Slot]] = []
                if not dup:
                    variants.append(slots)
                elif len(dup) == 1 and mono.count(dup[0]) == 2 and mono[0] == mono[-1] == dup[0]:
                    # the repeated class sits at both ends: keep the first one
                    variants.append(slots[:-1])
                else:
                    for cls in dup:
                        where = [i for i, s in enumerate(slots) if (s.pu, s.pv) == cls]
                        for keep in where:
                            variants.append([s for i, s in enumerate(slots) if i == keep or (s.pu, s.pv) != cls])
                for var in variants:
                    e = Entry(s1, s2, (a, b), tuple(var))
                    if e.key() not in seen:
                        seen.add(e.key())
                        out.append(e)
    return tuple(out)


def entry_is_disjunctive(e: Entry) -> bool:
    """Each pole, closed up cyclically, shows at most two color blocks."""
    pu = concat(s.pu for s in e.slots)
    pv = concat(s.pv for s in e.slots)
    return cyclic_count(pu) <= 2 and cyclic_count(pv) <= 2


def _expand(e: Entry) -> tuple[tuple[str, Pattern, Pattern], ...]:
    """Re-insert the monochromatic slots an entry dropped, giving the
    alternating ``m c m ... m`` template of its alignment."""
    out: list[tuple[str, Pattern, Pattern]] = []
    for s in e.slots:
        kind = "m" if s.mono else "c"
        if kind == "c":
            if not out or out[-1][0] == "c":
                out.append(("m", (s.pu[0],), (s.pv[0],)))
        elif out and out[-1][0] == "m":
            continue
        out.append((kind, s.pu, s.pv))
    if out[-1][0] == "c":
        out.append(("m", (out[-1][1][-1],), (out[-1][2][-1],)))
    return tuple(out)


@lru_cache(maxsize=1)
def templates() -> tuple[tuple[tuple[str, Pattern, Pattern], ...], ...]:
    return tuple(dict.fromkeys(_expand(e) for e in _table()))


# ---------------------------------------------------------------------------
# children and the exact arrangement check


@dataclass(frozen=True)
class Entity:
    """A child (or a group of interchangeable children) of a P-node.

    ``options`` are states in the P-node frame. ``q_color`` is set for a
    single real edge. ``c_edge[c]`` tells whether the entity has a color-``c``
    pole-to-pole path."""

    options: tuple[State, ...]
    q_color: int | None = None
    c_edge: tuple[bool, bool] = (False, False)

    def key(self) -> tuple:
        return (self.options, -1 if self.q_color is None else self.q_color, self.c_edge)


@dataclass(frozen=True)
class PContext:
    closed: bool = False
    ref_color: int = 0
    joined: tuple[bool, bool] = (False, False)
    # patterns a pole may not show because the rest of the graph touches it
    forbid_u: frozenset = field(default_factory=frozenset)
    forbid_v: frozenset = field(default_factory=frozenset)


Arrangement = tuple  # of (entity index, option index)


def evaluate(ents: Sequence[Entity], arr: Sequence[tuple[int, int]], ctx: PContext) -> State | None:
    """The state realised by an ordered arrangement, or None if it breaks
    disjunctiveness, splitter-freeness or a required rim."""
    opts = [ents[ei].options[oi] for ei, oi in arr]
    pu = concat(o[0] for o in opts)
    pv = concat(o[1] for o in opts)
    if ctx.closed:
        rc = (ctx.ref_color,)
        if cyclic_count(concat((rc, pu))) > 2 or cyclic_count(concat((rc, pv))) > 2:
            return None
        return CLOSED_OK if _closed_rims_ok(ents, arr, opts, ctx) else None
    if len(pu) > 3 or len(pv) > 3 or pu in ctx.forbid_u or pv in ctx.forbid_v:
        return None
    rims = [3, 3]
    k = len(arr)
    for c in (0, 1):
        pos = [i for i in range(k) if ents[arr[i][0]].c_edge[c]]
        if not pos:
            continue
        if pos[-1] - pos[0] + 1 != len(pos):
            return None
        if len(pos) >= 2:
            if any(ents[arr[i][0]].q_color != c for i in pos[1:-1]):
                return None
            if not (opts[pos[0]][2 + c] & 2 and opts[pos[-1]][2 + c] & 1):
                return None
        rim = 0
        # side A: everything before the last colored child is a real c edge
        if pos[0] == 0 and all(ents[arr[i][0]].q_color == c for i in pos[:-1]) and opts[pos[-1]][2 + c] & 1:
            rim |= 1
        if pos[-1] == k - 1 and all(ents[arr[i][0]].q_color == c for i in pos[1:]) and opts[pos[0]][2 + c] & 2:
            rim |= 2
        if ctx.joined[c]:
            if rim == 0:
                return None
            rims[c] = rim
    return (pu, pv, rims[0], rims[1])


def _closed_rims_ok(ents: Sequence[Entity], arr: Sequence[tuple[int, int]], opts: list[State], ctx: PContext) -> bool:
    # cyclic list: position 0 is the reference edge
    qcol = [ctx.ref_color] + [ents[ei].q_color for ei, _ in arr]
    rim_of = [(3, 3)] + [(o[2], o[3]) for o in opts]
    n = len(qcol)
    for c in (0, 1):
        cedge = [ctx.ref_color == c] + [ents[ei].c_edge[c] for ei, _ in arr]
        pos = [i for i in range(n) if cedge[i]]
        for ia in range(len(pos)):
            for ib in range(ia + 1, len(pos)):
                a, b = pos[ia], pos[ib]
                inner = range(a + 1, b)
                if all(qcol[i] == c for i in inner) and rim_of[a][c] & 2 and rim_of[b][c] & 1:
                    continue
                outer = [i % n for i in range(b + 1, a + n)]
                if all(qcol[i] == c for i in outer) and rim_of[a][c] & 1 and rim_of[b][c] & 2:
                    continue
                return False
    return True


# ---------------------------------------------------------------------------
# matcher


def _span_fits(tpl, i: int, j: int, opt: State) -> bool:
    us = concat(tpl[t][1] for t in range(i, j + 1))
    vs = concat(tpl[t][2] for t in range(i, j + 1))
    return us == opt[0] and vs == opt[1]


def _placements(tpl, ent: Entity) -> list[tuple[int, int, int]]:
    """(option, first slot, last slot) placements of an entity in a template.
    A monochromatic option sits in an ``m`` slot of its class; any other option
    covers a run of slots from one change slot to another."""
    out = []
    L = len(tpl)
    for oi, opt in enumerate(ent.options):
        if len(opt[0]) == 1 and len(opt[1]) == 1:
            for t in range(0, L, 2):
                if tpl[t][1] == opt[0] and tpl[t][2] == opt[1]:
                    out.append((oi, t, t))
        else:
            for i in range(1, L, 2):
                for j in range(i, L, 2):
                    if _span_fits(tpl, i, j, opt):
                        out.append((oi, i, j))
    return out


def _template_arrangements(tpl, ents: Sequence[Entity]) -> Iterator[list[tuple[int, int]]]:
    L = len(tpl)
    places = [_placements(tpl, e) for e in ents]
    if any(not p for p in places):
        return
    order = sorted(range(len(ents)), key=lambda i: len(places[i]))
    taken = [False] * L  # slot covered by a multi-colored child
    in_slot: list[list[tuple[int, int]]] = [[] for _ in range(L)]
    span_at: dict[int, tuple[int, int, int]] = {}

    def rec(k: int) -> Iterator[list[tuple[int, int]]]:
        if k == len(order):
            yield from _fill(tpl, ents, in_slot, span_at)
            return
        ei = order[k]
        for oi, i, j in places[ei]:
            if i == j and i % 2 == 0:
                if taken[i]:
                    continue
                in_slot[i].append((ei, oi))
                yield from rec(k + 1)
                in_slot[i].pop()
            else:
                if any(taken[t] or (t % 2 == 0 and in_slot[t]) for t in range(i, j + 1)):
                    continue
                for t in range(i, j + 1):
                    taken[t] = True
                span_at[i] = (ei, oi, j)
                yield from rec(k + 1)
                del span_at[i]
                for t in range(i, j + 1):
                    taken[t] = False

    yield from rec(0)


def _distinct_perms(items: list[tuple[int, int]], ents: Sequence[Entity]) -> Iterator[tuple]:
    keyed = sorted(items, key=lambda x: (ents[x[0]].key(), x[1], x[0]))
    seen = set()
    for perm in itertools.permutations(keyed):
        sig = tuple((ents[e].key(), o) for e, o in perm)
        if sig in seen:
            continue
        seen.add(sig)
        yield perm


def _fill(tpl, ents, in_slot, span_at) -> Iterator[list[tuple[int, int]]]:
    groups = [list(_distinct_perms(in_slot[t], ents)) if in_slot[t] else [()] for t in range(0, len(tpl), 2)]
    for choice in itertools.product(*groups):
        arr: list[tuple[int, int]] = []
        t = 0
        while t < len(tpl):
            if t % 2 == 0:
                arr.extend(choice[t // 2])
                t += 1
            elif t in span_at:
                ei, oi, j = span_at[t]
                arr.append((ei, oi))
                t = j + 1
            else:
                t += 1
        yield arr


def match(ents: Sequence[Entity], ctx: PContext, first_only: bool = False) -> dict[State, Arrangement]:
    """States reachable by placing ``ents`` into table templates, each with one
    arrangement realising it. Dominated states are dropped."""
    found: dict[State, Arrangement] = {}
    colors_u = set().union(*(c for e in ents for o in e.options for c in [set(o[0])]))
    colors_v = set().union(*(c for e in ents for o in e.options for c in [set(o[1])]))
    for tpl in templates():
        if {tpl[t][1][0] for t in range(0, len(tpl), 2)} - colors_u:
            continue
        if {tpl[t][2][0] for t in range(0, len(tpl), 2)} - colors_v:
            continue
        for arr in _template_arrangements(tpl, ents):
            st = evaluate(ents, arr, ctx)
            if st is not None and st not in found:
                found[st] = tuple(arr)
                if first_only:
                    return found
    keep = antichain(found)
    return {s: found[s] for s in keep}


# ---------------------------------------------------------------------------
# brute force


def brute_force(ents: Sequence[Entity], ctx: PContext) -> dict[State, Arrangement]:
    """All orders times all options, judged from first principles: every pair
    of same-color pole paths must leave one side free of foreign vertices and
    opposite-color edges. Independent of the table and of :func:`evaluate`.

    Orders are built left to right and a prefix is dropped as soon as the
    colors it puts around a pole already change more than three times, which
    no completion can repair; every surviving full order goes to the judge."""
    found: dict[State, Arrangement] = {}
    n = len(ents)
    keys = [e.key() for e in ents]
    lead = [ctx.ref_color] if ctx.closed else []
    used = [False] * n
    arr: list[tuple[int, int]] = []

    def runs(seq: list[int]) -> int:
        return sum(1 for i in range(1, len(seq)) if seq[i] != seq[i - 1]) + 1 if seq else 0

    def rec(seq_u: list[int], seq_v: list[int]) -> None:
        if len(arr) == n:
            st = _judge(ents, arr, ctx)
            if st is not None and st not in found:
                found[st] = tuple(arr)
            return
        tried = set()
        for i in range(n):
            if used[i] or keys[i] in tried:
                continue
            tried.add(keys[i])
            used[i] = True
            for o, opt in enumerate(ents[i].options):
                su = seq_u + list(opt[0])
                sv = seq_v + list(opt[1])
                if runs(su) > 3 or runs(sv) > 3:
                    continue
                arr.append((i, o))
                rec(su, sv)
                arr.pop()
            used[i] = False

    rec(list(lead), list(lead))
    keep = antichain(found)
    return {s: found[s] for s in keep}


def _judge(ents: Sequence[Entity], arr: Sequence[tuple[int, int]], ctx: PContext) -> State | None:
    # Lay the children out around the poles. Face f_i sits between item i-1
    # and item i; item 0 is the reference edge (closed) or the rest of the
    # graph (open), which always holds a vertex outside the pertinent graph.
    items = [None] + [(ents[e], ents[e].options[o]) for e, o in arr]
    k = len(items)
    seq_u: list[int] = []
    seq_v: list[int] = []
    for it in items[1:]:
        seq_u.extend(it[1][0])
        seq_v.extend(it[1][1])

    def blocks(seq: list[int], cyclic: bool) -> int:
        ch = sum(1 for i in range(1, len(seq)) if seq[i] != seq[i - 1])
        if cyclic and len(seq) > 1 and seq[0] != seq[-1]:
            ch += 1
        return ch if cyclic and ch else ch + 1

    if ctx.closed:
        if blocks([ctx.ref_color] + seq_u, True) > 2 or blocks([ctx.ref_color] + seq_v, True) > 2:
            return None
    else:
        if blocks(seq_u, False) > 3 or blocks(seq_v, False) > 3:
            return None

    def dirty_item(i: int, c: int) -> bool:
        """Item ``i`` lying strictly inside a region spoils it for color c."""
        if i == 0:
            return not (ctx.closed and ctx.ref_color == c)
        return items[i][0].q_color != c

    def side_clean(i: int, c: int, side: int) -> bool:
        if i == 0:
            return True
        return bool(items[i][1][2 + c] & side)

    def region_clean(a: int, b: int, c: int) -> bool:
        # region swept going forward from item a to item b
        j = (a + 1) % k
        while j != b:
            if dirty_item(j, c):
                return False
            j = (j + 1) % k
        return side_clean(a, c, 2) and side_clean(b, c, 1)

    def has_path(i: int, c: int) -> bool:
        if i == 0:
            return ctx.closed and ctx.ref_color == c
        return items[i][0].c_edge[c]

    for c in (0, 1):
        paths = [i for i in range(k) if has_path(i, c)]
        for a, b in itertools.combinations(paths, 2):
            if not (region_clean(a, b, c) or region_clean(b, a, c)):
                return None
    if ctx.closed:
        return CLOSED_OK
    pu, pv = concat([seq_u]), concat([seq_v])
    if pu in ctx.forbid_u or pv in ctx.forbid_v:
        return None
    rims = [3, 3]
    for c in (0, 1):
        paths = [i for i in range(1, k) if has_path(i, c)]
        if not paths or not ctx.joined[c]:
            continue
        rim = 0
        # side A of a path through item i covers items 1..i-1
        if all(not any(dirty_item(j, c) for j in range(1, i)) and side_clean(i, c, 1) for i in paths):
            rim |= 1
        if all(not any(dirty_item(j, c) for j in range(i + 1, k)) and side_clean(i, c, 2) for i in paths):
            rim |= 2
        if rim == 0:
            return None
        rims[c] = rim
    return (pu, pv, rims[0], rims[1])
