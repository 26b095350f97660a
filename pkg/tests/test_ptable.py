from __future__ import annotations

import itertools
import random

import pytest

from helpers import random_p_instance
from p2be.patterns import ALL_PATTERNS, antichain, concat, cyclic_count
from p2be.ptable import (
    Entity,
    PContext,
    _judge,
    alignments,
    brute_force,
    build_p_node_table,
    discretize,
    entry_is_disjunctive,
    evaluate,
    match,
    templates,
)

RED_Q = Entity((((0,), (0,), 3, 3),), 0, (True, False))
BLUE_Q = Entity((((1,), (1,), 3, 3),), 1, (False, True))
RED_PATH = Entity((((0,), (0,), 3, 3),), None, (True, False))
BLUE_PATH = Entity((((1,), (1,), 3, 3),), None, (False, True))


def test_table_has_180_distinct_disjunctive_entries():
    table = build_p_node_table()
    assert len(table) == 180
    assert len({e.key() for e in table}) == 180
    assert all(entry_is_disjunctive(e) for e in table)


def test_table_is_cached_but_returned_as_a_fresh_list():
    a = build_p_node_table()
    a.clear()
    assert len(build_p_node_table()) == 180


def test_every_pattern_pair_is_covered():
    table = build_p_node_table()
    assert {(e.sigma_u, e.sigma_v) for e in table} == set(itertools.product(ALL_PATTERNS, ALL_PATTERNS))
    for e in table:
        assert concat(s.pu for s in e.slots) == e.sigma_u
        assert concat(s.pv for s in e.slots) == e.sigma_v


def test_alignment_counts():
    # one change point against one change point: before, together, after
    assert sorted(alignments(1, 1)) == [((0,), (0,)), ((0,), (1,)), ((1,), (0,))]
    assert alignments(0, 0) == [((), ())]
    # weak orderings of 2 + 2 ordered points (Delannoy-like count)
    assert len(alignments(2, 2)) == 13


def test_discretize_rb_against_rb():
    rb = (0, 1)
    segs = {tuple(discretize(rb, rb, a, b)) for a, b in alignments(1, 1)}
    assert segs == {((0, 0), (1, 0), (1, 1)), ((0, 0), (1, 1)), ((0, 0), (0, 1), (1, 1))}


def test_template_count_is_frozen():
    # derived once from the table and frozen
    assert len(templates()) == 124
    for tpl in templates():
        kinds = "".join(k for k, _, _ in tpl)
        assert kinds == "m" + "cm" * (len(tpl) // 2)


def test_four_red_paths_do_not_fit():
    ents = [RED_PATH] * 4 + [BLUE_Q]
    assert match(ents, PContext()) == {} == brute_force(ents, PContext())


def test_three_red_paths_with_a_red_edge_fit():
    ents = [RED_PATH, RED_PATH, RED_Q, BLUE_PATH]
    ctx = PContext()
    assert match(ents, ctx)
    assert set(match(ents, ctx)) == set(brute_force(ents, ctx))


def test_rbr_pole_with_br_neighbor_is_rejected():
    rbr = Entity((((0, 1, 0), (0,), 3, 3),), None, (False, False))
    br = Entity((((1, 0), (0,), 3, 3), ((0, 1), (0,), 3, 3)), None, (False, False))
    assert match([rbr, br], PContext()) == {}
    assert brute_force([rbr, br], PContext()) == {}


def test_evaluate_reports_state_of_an_order():
    ents = [RED_Q, BLUE_PATH]
    st = evaluate(ents, [(0, 0), (1, 0)], PContext())
    assert st[:2] == ((0, 1), (0, 1))
    assert evaluate(ents, [(1, 0), (0, 0)], PContext())[:2] == ((1, 0), (1, 0))


def naive(ents, ctx):
    """Every permutation times every option vector, no pruning at all."""
    found = {}
    for perm in itertools.permutations(range(len(ents))):
        for opts in itertools.product(*(range(len(ents[i].options)) for i in perm)):
            arr = list(zip(perm, opts))
            st = _judge(ents, arr, ctx)
            if st is not None:
                found.setdefault(st, tuple(arr))
    return set(antichain(found))


@pytest.mark.parametrize("seed", range(4))
def test_pruned_brute_force_equals_naive(seed):
    rng = random.Random(seed)
    for _ in range(60):
        ents, ctx = random_p_instance(rng, max_slots=5)
        assert set(brute_force(ents, ctx)) == naive(ents, ctx)


@pytest.mark.parametrize("seed", range(3))
def test_matcher_agrees_with_brute_force(seed):
    rng = random.Random(1000 + seed)
    for _ in range(80):
        ents, ctx = random_p_instance(rng, max_slots=6)
        assert set(match(ents, ctx)) == set(brute_force(ents, ctx))


def test_matcher_witness_realises_its_state():
    rng = random.Random(7)
    for _ in range(100):
        ents, ctx = random_p_instance(rng, max_slots=6)
        for st, arr in match(ents, ctx).items():
            assert evaluate(ents, arr, ctx) == st
            assert sorted(i for i, _ in arr) == list(range(len(ents)))


def test_closed_context_checks_reference_color():
    # a blue and a red path close up fine around a red reference edge, but an
    # RBR child next to a blue reference edge shows B,R,B,R around the pole
    ents = [BLUE_PATH, RED_PATH]
    assert match(ents, PContext(True, 0))
    rbr = Entity((((0, 1, 0), (0, 1, 0), 3, 3),), None, (False, False))
    assert match([rbr, BLUE_PATH], PContext(True, 1)) == {}
    assert cyclic_count(concat(((1,), (0, 1, 0)))) == 4
