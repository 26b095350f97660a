"""Top-level decision: split into blocks, embed each, extract and merge spines."""
from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import NotPlanar, RotationEmbedding, planar_embed, restrict
from .engine import BlockEngine, BlockRejected, InternalInconsistency, Negative
from .graph import ColoredGraph, Multigraph, biconnected_edge_blocks, connected_components
from .oracle import verify_book_embedding_fast
from .timing import NullTimer, Timer
from .tour import GreenGraph, TourError, block_spine


@dataclass
class BlockCertificate:
    """What was built for one block; vertex ids are local to ``graph``."""

    graph: ColoredGraph
    vertices: list[int]  # local -> global
    edge_ids: list[int]  # local -> global
    embedding: RotationEmbedding | None
    spine: list[int]  # global ids
    green: GreenGraph | None = None
    tour: list[int] | None = None


@dataclass
class BookEmbedding:
    """A spine order of all vertices; pages are the edge colors."""

    graph: ColoredGraph
    spine: list[int]
    blocks: list[BlockCertificate] = field(default_factory=list)

    def __bool__(self) -> bool:
        return True


def outerplanar_spine(g: ColoredGraph) -> tuple[list[int], RotationEmbedding] | Negative:
    """One-page test for a block: add a vertex adjacent to everything; the
    block is outerplanar iff that graph is planar, and the new vertex's
    neighbours in rotation order are a valid spine."""
    apex = g.n
    edges = list(g.edges) + [(apex, v) for v in range(g.n)]
    try:
        emb = planar_embed(Multigraph(list(range(g.n + 1)), edges))
    except NotPlanar:
        try:
            planar_embed(g)
        except NotPlanar:
            return Negative("nonplanar", "monochromatic block")
        return Negative("non-outerplanar-monochromatic", f"block with {g.n} vertices and {g.m} edges")
    spine = [emb.head(d) for d in emb.rotation[apex]]
    return spine, restrict(emb, range(g.m))


def test_biconnected(g: ColoredGraph, ref_edge: int = 0, timer: Timer | None = None) -> RotationEmbedding | Negative:
    """Disjunctive, splitter-free embedding of a biconnected graph, or the
    rule that rules one out."""
    timer = timer or NullTimer()
    if g.m <= 1:
        rotation = {v: [] for v in range(g.n)}
        if g.m == 1:
            a, b = g.edges[0]
            rotation[a] = [0]
            rotation[b] = [1]
        return RotationEmbedding(list(g.edges), rotation)
    if g.is_monochromatic():
        res = outerplanar_spine(g)
        return res if isinstance(res, Negative) else res[1]
    try:
        eng = BlockEngine(g, ref_edge, timer)
        eng.run()
    except BlockRejected as exc:
        return Negative(exc.reason, exc.detail)
    with timer.phase("pertinent embedding"):
        return eng.compose()


def _merge_spines(n: int, comps: list[list[int]], block_spines: list[list[int]]) -> list[int]:
    """Splice block spines at cutvertices and concatenate components.

    Each block's cyclic spine is rotated to start at the cutvertex through
    which it hangs off the part already placed, and inserted right after it."""
    nxt: dict[int, int] = {}
    by_vertex: dict[int, list[int]] = {}
    for i, sp in enumerate(block_spines):
        for v in sp:
            by_vertex.setdefault(v, []).append(i)
    placed_block = [False] * len(block_spines)
    order: list[int] = []
    for comp in comps:
        root = comp[0]
        if root not in by_vertex:
            order.append(root)
            continue
        head = root
        nxt[root] = -1
        queue = [root]
        qi = 0
        while qi < len(queue):
            c = queue[qi]
            qi += 1
            for b in by_vertex.get(c, ()):
                if placed_block[b]:
                    continue
                placed_block[b] = True
                sp = block_spines[b]
                k = sp.index(c)
                rest = sp[k + 1:] + sp[:k]
                after = nxt[c]
                prev = c
                for v in rest:
                    nxt[prev] = v
                    prev = v
                    queue.append(v)
                nxt[prev] = after
        v = head
        while v != -1:
            order.append(v)
            v = nxt[v]
    return order


def test(g: ColoredGraph, verify: bool = True, timer: Timer | None = None, audit: bool = True) -> BookEmbedding | Negative:
    """Decide P2BE for any colored graph and return a verified spine."""
    timer = timer or NullTimer()
    with timer.phase("decomposition"):
        comps = connected_components(g)
        blocks = [sorted(b) for b in biconnected_edge_blocks(g.n, g.edges)]
        blocks.sort(key=lambda b: b[0])
    certs: list[BlockCertificate] = []
    for blk in blocks:
        sub, verts, eids = g.induced_on_edges(blk)
        if sub.m == 1:
            certs.append(BlockCertificate(sub, verts, eids, test_biconnected(sub), list(verts)))
            continue
        if sub.is_monochromatic():
            res = outerplanar_spine(sub)
            if isinstance(res, Negative):
                return res
            sp, emb = res
            certs.append(BlockCertificate(sub, verts, eids, emb, [verts[v] for v in sp]))
            continue
        emb = test_biconnected(sub, 0, timer)
        if isinstance(emb, Negative):
            return emb
        try:
            sp, gg, tour = block_spine(emb, sub.colors, timer, audit=audit)
        except TourError as exc:
            raise InternalInconsistency(str(exc)) from exc
        certs.append(BlockCertificate(sub, verts, eids, emb, [verts[v] for v in sp], gg, tour))
    spine = _merge_spines(g.n, comps, [c.spine for c in certs])
    if verify:
        with timer.phase("verify"):
            if not verify_book_embedding_fast(g, spine):
                raise InternalInconsistency("spine fails the book-embedding check")
    return BookEmbedding(g, spine, certs)


def decide(g: ColoredGraph) -> bool:
    return bool(test(g, verify=False, audit=False))
