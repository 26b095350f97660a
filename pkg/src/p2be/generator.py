"""Random positive instances built directly inside a two-page book.

Vertices sit on the spine in order ``0..n-1``. Each page starts as one face
bounded by dummy edges along the spine plus the long dummy edge ``(0, n-1)``.
Each step picks a face with probability proportional to its number of
candidate edges (vertex pairs of the face that are not yet real edges on
either page), picks a candidate uniformly, and either turns a dummy edge into a
real one or splits the face with a chord. Leftover dummy edges are dropped.
The spine order is then hidden by a random relabelling.
"""
from __future__ import annotations

import hashlib
import random
from bisect import bisect_left
from dataclasses import dataclass

from .graph import ColoredGraph

SUITE_KINDS = ("2n", "2.5n", "3n-6")


class GeneratorExhausted(RuntimeError):
    """No face has a candidate edge left before ``m`` edges were placed."""


class _Fenwick:
    def __init__(self, size: int) -> None:
        self.n = size
        self.tree = [0] * (size + 1)
        self.vals = [0] * size
        self.top = 1 << max(0, size.bit_length() - 1)

    def set(self, i: int, val: int) -> None:
        delta = val - self.vals[i]
        self.vals[i] = val
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def total(self) -> int:
        s, i = 0, self.n
        while i:
            s += self.tree[i]
            i -= i & -i
        return s

    def find(self, target: int) -> int:
        """Smallest index whose prefix sum exceeds ``target``."""
        pos = 0
        step = self.top
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] <= target:
                pos = nxt
                target -= self.tree[nxt]
            step >>= 1
        return pos


def edge_limit(n: int) -> int:
    return 3 * n - 6


def _contains(face: list[int], w: int) -> bool:
    i = bisect_left(face, w)
    return i < len(face) and face[i] == w


def generate(n: int, m: int, seed: int, relabel: bool = True) -> ColoredGraph:
    """A positive instance with ``n`` vertices and exactly ``m`` edges."""
    if n < 3:
        raise ValueError("the generator needs n >= 3")
    if not 0 <= m <= edge_limit(n):
        raise ValueError(f"m must lie in 0..{edge_limit(n)} for n={n}")
    rng = random.Random(seed)
    cap = m + 3
    faces: list[list[int]] = [list(range(n)), list(range(n))]
    page = [0, 1]
    inner = [0, 0]  # real edges with both ends in the face
    fen = _Fenwick(cap)
    faces_at: list[list[set[int]]] = [[{0} for _ in range(n)], [{1} for _ in range(n)]]
    adj: list[set[int]] = [set() for _ in range(n)]
    triples: list[tuple[int, int, int]] = []

    def weight(f: int) -> int:
        k = len(faces[f])
        return k * (k - 1) // 2 - inner[f]

    fen.set(0, weight(0))
    fen.set(1, weight(1))

    def count_inside(verts: list[int], outer: list[int], u: int, v: int) -> tuple[int, int]:
        """Edges with both ends in ``verts``, and edges from ``verts`` minus
        the chord ends ``u, v`` to the rest of ``outer``."""
        inside = 0
        cross = 0
        for w in verts:
            for x in adj[w]:
                if _contains(verts, x):
                    inside += 1
                elif w != u and w != v and _contains(outer, x):
                    cross += 1
        return inside // 2, cross

    while len(triples) < m:
        total = fen.total()
        if total <= 0:
            raise GeneratorExhausted(f"no candidate edge left after {len(triples)} of {m} edges")
        f = fen.find(rng.randrange(total))
        verts = faces[f]
        k = len(verts)
        while True:
            i, j = rng.sample(range(k), 2)
            if i > j:
                i, j = j, i
            u, v = verts[i], verts[j]
            if v not in adj[u]:
                break
        c = page[f]
        adj[u].add(v)
        adj[v].add(u)
        triples.append((u, v, c))
        if j == i + 1 or (i == 0 and j == k - 1):
            inner[f] += 1
            fen.set(f, weight(f))
        else:
            f1 = verts[i:j + 1]
            f2 = verts[:i + 1] + verts[j:]
            small, big = (f1, f2) if len(f1) <= len(f2) else (f2, f1)
            e_small, cross = count_inside(small, verts, u, v)
            e_big = inner[f] + 1 + 1 - cross - e_small
            g = len(faces)
            faces[f] = big
            inner[f] = e_big
            faces.append(small)
            page.append(c)
            inner.append(e_small)
            for w in small:
                if w != u and w != v:
                    faces_at[c][w].discard(f)
                faces_at[c][w].add(g)
            fen.set(f, weight(f))
            fen.set(g, weight(g))
        other = 1 - c
        fa, fb = faces_at[other][u], faces_at[other][v]
        for h in (fa & fb if len(fa) <= len(fb) else fb & fa):
            inner[h] += 1
            fen.set(h, weight(h))

    if relabel:
        perm = list(range(n))
        rng.shuffle(perm)
        triples = [(perm[a], perm[b], c) for a, b, c in triples]
        rng.shuffle(triples)
    return ColoredGraph.from_edges(n, triples)


def suite_edges(kind: str, n: int) -> int:
    if kind == "2n":
        return 2 * n
    if kind == "2.5n":
        return (5 * n) // 2
    if kind == "3n-6":
        return 3 * n - 6
    raise ValueError(f"unknown suite kind {kind!r}; expected one of {', '.join(SUITE_KINDS)}")


def derive_seed(seed: int, *parts: object) -> int:
    """Stable per-instance seed (independent of Python's hash randomisation)."""
    h = hashlib.sha256(repr((seed,) + parts).encode()).digest()
    return int.from_bytes(h[:8], "little")


@dataclass(frozen=True)
class SuiteInstance:
    name: str
    kind: str
    n: int
    m: int
    seed: int


def suite(kind: str, buckets: list[int], per_bucket: int, seed: int) -> list[SuiteInstance]:
    """Instance descriptors: ``per_bucket`` seeds for each bucket size."""
    out = []
    for n in buckets:
        m = suite_edges(kind, n)
        if m > edge_limit(n):
            raise ValueError(f"suite {kind} needs n >= 6 (n={n})")
        for i in range(per_bucket):
            s = derive_seed(seed, kind, n, i)
            out.append(SuiteInstance(f"{kind.replace('.', '_')}_n{n}_{i}", kind, n, m, s))
    return out


def build(inst: SuiteInstance) -> ColoredGraph:
    return generate(inst.n, inst.m, inst.seed)
