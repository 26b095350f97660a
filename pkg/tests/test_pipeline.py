from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import p2be
from helpers import biconnected_graphs, colored_graphs, graph, k4, negative_corpus, wheel
from p2be.embedding import RotationEmbedding, verify_disjunctive, verify_splitter_free
from p2be.engine import REASONS
from p2be.oracle import brute_force_p2be, verify_book_embedding
from p2be.pipeline import BookEmbedding, _merge_spines, decide, outerplanar_spine
from p2be.pipeline import test as run
from p2be.pipeline import test_biconnected as run_block


def test_k4_all_red_is_not_outerplanar():
    res = run_block(k4())
    assert not res and res.reason == "non-outerplanar-monochromatic"
    assert not brute_force_p2be(k4())[0]


def test_k4_with_one_blue_edge():
    g = k4(blue=[(1, 3)])
    emb = run_block(g)
    assert isinstance(emb, RotationEmbedding)
    assert verify_disjunctive(emb, g) and verify_splitter_free(emb, g)
    res = run(g)
    assert res and verify_book_embedding(g, res.spine)


def test_red_four_cycle_with_blue_diagonals_follows_the_oracle():
    # the red cycle fixes the cyclic order, so the two blue diagonals cross
    g = graph(4, [(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 0, 0), (0, 2, 1), (1, 3, 1)])
    assert brute_force_p2be(g) == (False, None)
    assert not run(g)


def test_triangle_spine_is_a_rotation():
    res = run(graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)]))
    assert sorted(res.spine) == [0, 1, 2]


def test_components_are_concatenated():
    g = graph(6, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
    spine = run(g).spine
    assert len(spine) == 6
    assert set(spine[:3]) == {0, 1, 2} and set(spine[3:]) == {3, 4, 5}


def test_k5_block_is_nonplanar():
    t = [(a, b, (a * b) % 2) for a, b in itertools.combinations(range(5), 2)]
    res = run(graph(7, t + [(4, 5, 0), (5, 6, 1)]))
    assert not res and res.reason == "nonplanar"


def test_trivial_inputs():
    assert run(graph(0, [])).spine == []
    assert run(graph(3, [])).spine == [0, 1, 2]
    assert run(graph(2, [(0, 1, 1)])).spine == [0, 1]
    assert sorted(run(graph(5, [(0, 1, 0), (1, 2, 1), (2, 3, 0), (3, 4, 1)])).spine) == list(range(5))


def test_result_types():
    res = run(wheel(5, hub_color=1))
    assert isinstance(res, BookEmbedding) and bool(res)
    assert decide(wheel(5, hub_color=1))
    assert not decide(wheel(5))
    assert p2be.test is run and p2be.decide is decide


def test_outerplanar_spine():
    c5 = graph(5, [(i, (i + 1) % 5, 0) for i in range(5)] + [(0, 2, 0)])
    spine, emb = outerplanar_spine(c5)
    assert verify_book_embedding(c5, spine) and emb.euler_ok()
    assert outerplanar_spine(wheel(5)).reason == "non-outerplanar-monochromatic"


def test_merge_splices_blocks_at_cutvertices():
    # blocks {0,1,2} and {2,3,4} share 2; vertex 5 is alone
    order = _merge_spines(6, [[0, 1, 2, 3, 4], [5]], [[0, 1, 2], [3, 2, 4]])
    assert order == [0, 1, 2, 4, 3, 5]


@pytest.mark.parametrize("stem, reason, g", negative_corpus(), ids=lambda x: x if isinstance(x, str) else "")
def test_negative_corpus(stem, reason, g):
    res = run(g)
    assert not res
    assert res.reason == reason
    assert reason in REASONS
    assert brute_force_p2be(g)[0] is False


def test_corpus_covers_every_reason():
    assert {r for _, r, _ in negative_corpus()} == set(REASONS)


@settings(max_examples=400, deadline=None)
@given(colored_graphs(max_n=7))
def test_decision_matches_oracle(g):
    res = run(g)
    assert bool(res) == brute_force_p2be(g)[0]
    if res:
        assert verify_book_embedding(g, res.spine)
    else:
        assert res.reason in REASONS


@settings(max_examples=150, deadline=None)
@given(biconnected_graphs(max_n=8), st.data())
def test_biconnected_embedding_is_certified(g, data):
    ref = data.draw(st.integers(0, g.m - 1))
    res = run_block(g, ref)
    assert bool(res) == brute_force_p2be(g)[0]
    if res:
        assert verify_disjunctive(res, g)
        assert verify_splitter_free(res, g)
        assert verify_splitter_free(res, g, "exhaustive")


@settings(max_examples=60, deadline=None)
@given(colored_graphs(max_n=7), st.randoms(use_true_random=False))
def test_decision_survives_relabelling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = graph(g.n, [(perm[a], perm[b], c) for (a, b), c in zip(g.edges, g.colors)])
    assert bool(run(g)) == bool(run(h))
    swapped = graph(g.n, [(a, b, 1 - c) for (a, b), c in zip(g.edges, g.colors)])
    assert bool(run(g)) == bool(run(swapped))
