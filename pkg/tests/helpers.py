"""Shared builders for the test suite."""
from __future__ import annotations

import itertools
import random
from pathlib import Path

from hypothesis import strategies as st

from p2be.graph import ColoredGraph
from p2be.io import read_file
from p2be.patterns import ALL_PATTERNS, antichain, flip_state
from p2be.ptable import Entity, PContext

FIXTURES = Path(__file__).parent / "fixtures"
R, B = 0, 1


def graph(n: int, triples) -> ColoredGraph:
    return ColoredGraph.from_edges(n, triples)


def k4(blue=()) -> ColoredGraph:
    """K4 on 0..3 with the listed pairs blue."""
    blue = {tuple(sorted(p)) for p in blue}
    return graph(4, [(a, b, B if (a, b) in blue else R) for a, b in itertools.combinations(range(4), 2)])


def wheel(rim: int, hub_color: int = R, rim_color: int = R) -> ColoredGraph:
    """Hub ``rim`` joined to the cycle 0..rim-1."""
    t = [(i, (i + 1) % rim, rim_color) for i in range(rim)]
    t += [(rim, i, hub_color) for i in range(rim)]
    return graph(rim + 1, t)


def random_graph(rng: random.Random, n: int, m: int | None = None) -> ColoredGraph:
    pairs = list(itertools.combinations(range(n), 2))
    if m is None:
        m = rng.randint(0, len(pairs))
    es = rng.sample(pairs, min(m, len(pairs)))
    return graph(n, [(a, b, rng.randint(0, 1)) for a, b in es])


@st.composite
def colored_graphs(draw, min_n: int = 0, max_n: int = 7) -> ColoredGraph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    colors = draw(st.lists(st.integers(0, 1), min_size=len(chosen), max_size=len(chosen)))
    return graph(n, [(a, b, c) for (a, b), c in zip(chosen, colors)])


def negative_corpus() -> list[tuple[str, str, ColoredGraph]]:
    """(file stem, expected reason, graph) for every curated negative."""
    out = []
    for p in sorted((FIXTURES / "negative").glob("*.p2be")):
        first = p.read_text().splitlines()[0]
        assert first.startswith("# expect: ")
        out.append((p.stem, first.removeprefix("# expect: ").strip(), read_file(p)))
    return out


# ---------------------------------------------------------------------------
# random P-node children


def _pats_with(colors: set[int]) -> list:
    return [p for p in ALL_PATTERNS if set(p) == colors]


def random_entity(rng: random.Random, max_options: int = 3) -> Entity:
    """A child with random pole patterns and rims; options come in flip pairs."""
    if rng.random() < 0.15:
        c = rng.randrange(2)
        return Entity((((c,), (c,), 3, 3),), c, (c == 0, c == 1))
    cu = {rng.randrange(2)} if rng.random() < 0.6 else {0, 1}
    cv = {rng.randrange(2)} if rng.random() < 0.6 else {0, 1}
    ce = tuple(c in cu and c in cv and rng.random() < 0.5 for c in (0, 1))
    if len(cu) == 1 and len(cv) == 1 and not any(ce):
        return Entity((((min(cu),), (min(cv),), 3, 3),))
    opts = []
    for _ in range(rng.randint(1, max_options)):
        s = (
            rng.choice(_pats_with(cu)),
            rng.choice(_pats_with(cv)),
            rng.randrange(4) if ce[0] else 3,
            rng.randrange(4) if ce[1] else 3,
        )
        opts += [s, flip_state(s)]
    return Entity(tuple(dict.fromkeys(antichain(opts))), None, ce)


def random_context(rng: random.Random) -> PContext:
    if rng.random() < 0.3:
        return PContext(True, rng.randrange(2))

    def forbid() -> frozenset:
        return frozenset(p for p in ((0, 1, 0), (1, 0, 1)) if rng.random() < 0.3)

    return PContext(False, 0, (rng.random() < 0.5, rng.random() < 0.5), forbid(), forbid())


def random_p_instance(rng: random.Random, max_slots: int = 8) -> tuple[list[Entity], PContext]:
    """At most one real edge, as in a simple graph."""
    ents = [random_entity(rng) for _ in range(rng.randint(1, max_slots))]
    qs = [e for e in ents if e.q_color is not None]
    ents = [e for e in ents if e.q_color is None] + qs[:1]
    return ents, random_context(rng)


@st.composite
def biconnected_graphs(draw, max_n: int = 9, max_ears: int = 6) -> ColoredGraph:
    """Random ear decomposition: a cycle plus ears between distinct vertices."""
    k = draw(st.integers(3, min(5, max_n)))
    n = k
    adj = {tuple(sorted((i, (i + 1) % k))) for i in range(k)}
    triples = [(i, (i + 1) % k, draw(st.integers(0, 1))) for i in range(k)]
    for _ in range(draw(st.integers(0, max_ears))):
        a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
        inner = draw(st.integers(0, min(2, max_n - n)))
        if inner == 0 and tuple(sorted((a, b))) in adj:
            continue
        path = [a] + list(range(n, n + inner)) + [b]
        n += inner
        for x, y in zip(path, path[1:]):
            adj.add(tuple(sorted((x, y))))
            triples.append((x, y, draw(st.integers(0, 1))))
    return graph(n, triples)
