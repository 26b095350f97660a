"""Brute-force P2BE decision and book-embedding verifiers.

Nothing here shares code with the SPQR pipeline; it is the ground truth the
engine is tested against.
"""
from __future__ import annotations

import itertools
from typing import Sequence

from .graph import ColoredGraph

DEFAULT_CAP = 9


class OracleCapExceeded(ValueError):
    """The instance is larger than the brute-force search is allowed to try."""


def _interleave(pa: int, pb: int, pc: int, pd: int) -> bool:
    if pa > pb:
        pa, pb = pb, pa
    if pc > pd:
        pc, pd = pd, pc
    return pa < pc < pb < pd or pc < pa < pd < pb


def verify_book_embedding(g: ColoredGraph, spine: Sequence[int]) -> bool:
    """Pairwise check: no two edges of one color interleave along ``spine``."""
    if sorted(spine) != list(range(g.n)):
        return False
    pos = [0] * g.n
    for i, v in enumerate(spine):
        pos[v] = i
    edges = g.edges
    colors = g.colors
    for i in range(g.m):
        a, b = edges[i]
        for j in range(i + 1, g.m):
            if colors[i] != colors[j]:
                continue
            c, d = edges[j]
            if _interleave(pos[a], pos[b], pos[c], pos[d]):
                return False
    return True


def verify_book_embedding_fast(g: ColoredGraph, spine: Sequence[int]) -> bool:
    """Same verdict as :func:`verify_book_embedding` in O(n + m log m): on each
    page the edges must nest like parentheses."""
    if len(spine) != g.n or sorted(spine) != list(range(g.n)):
        return False
    pos = [0] * g.n
    for i, v in enumerate(spine):
        pos[v] = i
    for color in (0, 1):
        opens: list[list[int]] = [[] for _ in range(g.n)]
        closes: list[int] = [0] * g.n
        for (a, b), c in zip(g.edges, g.colors):
            if c != color:
                continue
            lo, hi = sorted((pos[a], pos[b]))
            opens[lo].append(hi)
            closes[hi] += 1
        stack: list[int] = []
        for p in range(g.n):
            for _ in range(closes[p]):
                if not stack or stack[-1] != p:
                    return False
                stack.pop()
            for hi in sorted(opens[p], reverse=True):
                stack.append(hi)
        if stack:
            return False
    return True


def brute_force_p2be(g: ColoredGraph, cap: int = DEFAULT_CAP, circular: bool = True) -> tuple[bool, list[int] | None]:
    """Decide P2BE by exhaustive search over spine orders.

    With ``circular=True`` vertex 0 is pinned first (interleaving is invariant
    under rotating the spine), otherwise all ``n!`` orders are tried. The search
    extends prefixes in lexicographic order and cuts a prefix as soon as two
    same-color edges are forced to interleave, so the first witness found is the
    lexicographically least accepting order."""
    n = g.n
    if n > cap:
        raise OracleCapExceeded(f"n={n} exceeds the oracle cap {cap}")
    if n <= 2 or g.m <= 1:
        return True, list(range(n))
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for (a, b), c in zip(g.edges, g.colors):
        adj[a].append((b, c))
        adj[b].append((a, c))
    pos = [-1] * n
    order: list[int] = []
    closed: list[list[tuple[int, int]]] = [[], []]

    def place(w: int) -> int | None:
        """Place ``w`` next; return how many edges were closed, or None on a
        forced crossing (nothing is modified in that case)."""
        k = len(order)
        new = []
        for x, c in adj[w]:
            px = pos[x]
            if px < 0:
                continue
            for pa, pb in closed[c]:
                if pa < px < pb:
                    return None
            # an edge still open from a placed vertex strictly after px crosses
            for y in range(len(order)):
                vy = order[y]
                if y <= px:
                    continue
                for z, cz in adj[vy]:
                    if cz == c and pos[z] < 0 and z != w:
                        return None
            new.append((c, px))
        for c, px in new:
            closed[c].append((px, k))
        pos[w] = k
        order.append(w)
        return len(new)

    def unplace(w: int, added: list[int]) -> None:
        for c, cnt in zip((0, 1), added):
            for _ in range(cnt):
                closed[c].pop()
        pos[w] = -1
        order.pop()

    def extend() -> bool:
        if len(order) == n:
            return True
        for w in range(n):
            if pos[w] >= 0:
                continue
            before = (len(closed[0]), len(closed[1]))
            if place(w) is None:
                continue
            added = [len(closed[0]) - before[0], len(closed[1]) - before[1]]
            if extend():
                return True
            unplace(w, added)
        return False

    if circular:
        place(0)
        found = extend()
    else:
        found = extend()
    return (True, list(order)) if found else (False, None)


def brute_force_linear_naive(g: ColoredGraph) -> tuple[bool, list[int] | None]:
    """Plain ``n!`` loop with the pairwise verifier; only for cross-checks."""
    for perm in itertools.permutations(range(g.n)):
        if verify_book_embedding(g, perm):
            return True, list(perm)
    return False, None
