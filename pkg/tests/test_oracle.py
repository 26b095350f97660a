from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import colored_graphs, graph, k4
from p2be.oracle import (
    OracleCapExceeded,
    brute_force_linear_naive,
    brute_force_p2be,
    verify_book_embedding,
    verify_book_embedding_fast,
)


def test_triangle_is_positive():
    ok, spine = brute_force_p2be(graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)]))
    assert ok and sorted(spine) == [0, 1, 2]


def test_k4_examples():
    assert brute_force_p2be(k4()) == (False, None)
    # the pair (2, 4) in 1-based labels is (1, 3) here
    assert brute_force_p2be(k4(blue=[(1, 3)])) == (True, [0, 1, 2, 3])


def test_verify_examples():
    assert verify_book_embedding(k4(blue=[(1, 3)]), [0, 1, 2, 3])
    crossing = graph(4, [(0, 2, 0), (1, 3, 0)])
    assert not verify_book_embedding(crossing, [0, 1, 2, 3])
    assert not verify_book_embedding_fast(crossing, [0, 1, 2, 3])
    assert verify_book_embedding(graph(3, []), [2, 0, 1])


def test_verify_requires_a_permutation():
    g = graph(3, [(0, 1, 0)])
    assert not verify_book_embedding(g, [0, 1])
    assert not verify_book_embedding(g, [0, 1, 1])
    assert not verify_book_embedding_fast(g, [0, 1, 1])


def test_cap():
    with pytest.raises(OracleCapExceeded):
        brute_force_p2be(graph(10, []), cap=9)


def test_witness_is_lexicographically_least():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(3, 6)
        pairs = list(itertools.combinations(range(n), 2))
        g = graph(n, [(a, b, rng.randint(0, 1)) for a, b in rng.sample(pairs, rng.randint(2, len(pairs)))])
        ok, spine = brute_force_p2be(g, circular=False)
        first = next((list(p) for p in itertools.permutations(range(n)) if verify_book_embedding(g, p)), None)
        assert spine == first


@settings(max_examples=200, deadline=None)
@given(colored_graphs(max_n=6))
def test_circular_and_linear_agree(g):
    circ = brute_force_p2be(g)
    lin = brute_force_p2be(g, circular=False)
    naive = brute_force_linear_naive(g)
    assert circ[0] == lin[0] == naive[0]
    for ok, spine in (circ, lin, naive):
        if ok:
            assert verify_book_embedding(g, spine)


@settings(max_examples=300, deadline=None)
@given(colored_graphs(max_n=9), st.randoms(use_true_random=False))
def test_fast_verifier_matches_pairwise(g, rnd):
    spine = list(range(g.n))
    rnd.shuffle(spine)
    assert verify_book_embedding_fast(g, spine) == verify_book_embedding(g, spine)


@settings(max_examples=100, deadline=None)
@given(colored_graphs(max_n=7), st.integers(0, 6))
def test_rotating_a_spine_keeps_it_valid(g, k):
    ok, spine = brute_force_p2be(g)
    if ok and spine:
        k %= len(spine)
        assert verify_book_embedding(g, spine[k:] + spine[:k])
        assert verify_book_embedding(g, spine[::-1])
