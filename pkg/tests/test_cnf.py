import random

import pytest

from paracount.cnf import (
    EdgeCNF,
    characteristic_assignment,
    count_cycle_cover2_cnf,
    count_log_reach2_cnf,
    cover_cycles,
    cyclecover_gate_passes,
    enumerate_cycle_covers,
    eval_cnf,
    parse_dimacs,
    reach2cnf_gate_passes,
)
from paracount.errors import CountingError
from paracount.graphs import DirectedGraph, enumerate_walks, validate_graph
from paracount.walks import count_log_reach_b

DIAMOND = validate_graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
TWO_LOOPS = validate_graph(2, [(0, 0), (1, 1), (0, 1), (1, 0)])


def rand_degree2_graph(rng, max_n=6):
    n = rng.randint(1, max_n)
    edges = []
    for u in range(n):
        targets = list(range(n))
        rng.shuffle(targets)
        edges += [(u, v) for v in targets[: rng.randint(0, 2)]]
    return DirectedGraph(n, tuple(edges))


def rand_cnf(rng, g):
    clauses = []
    for _ in range(rng.randint(0, 3)):
        clause = []
        for _ in range(rng.randint(0, 3)):
            if g.edges:
                e = rng.randrange(len(g.edges))
                clause.append((e + 1) if rng.random() < 0.5 else -(e + 1))
        clauses.append(clause)
    return EdgeCNF.from_dimacs_literals(clauses)


def walk_edges(g, walk):
    ids = {(u, v): i for i, (u, v) in enumerate(g.edges)}
    return {ids[(walk[i], walk[i + 1])] for i in range(len(walk) - 1)}


def test_eval_cnf_examples():
    assert eval_cnf(EdgeCNF.empty(), {}) is True
    neg = EdgeCNF.from_dimacs_literals([[-1]])
    assert eval_cnf(neg, {0: 1}) is False
    phi = EdgeCNF.from_dimacs_literals([[1, 2], [-1]])
    assert eval_cnf(phi, {0: 0, 1: 1}) is True


def test_eval_cnf_unassigned_variable():
    phi = EdgeCNF.from_dimacs_literals([[1]])
    with pytest.raises(CountingError) as err:
        eval_cnf(phi, {})
    assert err.value.code == "unassigned-variable"


def test_empty_clause_is_unsatisfiable():
    phi = EdgeCNF(((),))  # one empty clause
    assert eval_cnf(phi, {}) is False


def test_dimacs_parse():
    phi = parse_dimacs("c comment\np cnf 4 2\n1 -2 0\n3 4 0\n")
    assert phi.clauses == (((0, True), (1, False)), ((2, True), (3, True)))
    assert phi.size() == 2 + 4


def test_reach2cnf_empty_cnf_equals_unconstrained():
    rng = random.Random(21)
    for _ in range(25):
        g = rand_degree2_graph(rng)
        s, t = rng.randrange(g.n), rng.randrange(g.n)
        a, k = rng.randint(0, 4), rng.randint(0, 3)
        assert count_log_reach2_cnf(g, s, t, EdgeCNF.empty(), a, k) == (
            count_log_reach_b(g, s, t, a, k, 2)
        )


def test_reach2cnf_diamond_negated_edge():
    # Forbid edge (0,1): of the two 2-edge walks only (0,2,3) survives.
    e = DIAMOND.edge_id(0, 1)
    phi = EdgeCNF.from_dimacs_literals([[-(e + 1)]])
    assert count_log_reach2_cnf(DIAMOND, 0, 3, phi, 2, 1) == 1


def test_reach2cnf_gate_zero():
    phi = EdgeCNF.empty()
    assert not reach2cnf_gate_passes(DIAMOND, phi, 5, 1)  # 5 > 1*ceil(log2 4)
    assert count_log_reach2_cnf(DIAMOND, 0, 3, phi, 5, 1) == 0


def test_reach2cnf_degree_bound():
    g = validate_graph(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(CountingError) as err:
        count_log_reach2_cnf(g, 0, 3, EdgeCNF.empty(), 1, 1)
    assert err.value.code == "degree-bound-violated"


def test_reach2cnf_matches_filter_oracle():
    rng = random.Random(22)
    for _ in range(40):
        g = rand_degree2_graph(rng)
        s, t = rng.randrange(g.n), rng.randrange(g.n)
        a, k = rng.randint(0, 4), rng.randint(0, 3)
        phi = rand_cnf(rng, g)
        if reach2cnf_gate_passes(g, phi, a, k):
            expected = sum(
                1
                for w in enumerate_walks(g, s, t, a)
                if eval_cnf(phi, characteristic_assignment(g, walk_edges(g, w)))
            )
        else:
            expected = 0
        assert count_log_reach2_cnf(g, s, t, phi, a, k) == expected


def test_enumerate_cycle_covers_examples():
    covers = enumerate_cycle_covers(TWO_LOOPS)
    ids = {e: i for i, e in enumerate(TWO_LOOPS.edges)}
    assert covers == sorted(
        [
            tuple(sorted((ids[(0, 0)], ids[(1, 1)]))),
            tuple(sorted((ids[(0, 1)], ids[(1, 0)]))),
        ]
    )
    assert len(enumerate_cycle_covers(validate_graph(1, [(0, 0)]))) == 1
    assert enumerate_cycle_covers(validate_graph(1, [])) == []


def test_cycle_cover_counter_examples():
    # Only {(0,1),(1,0)} covers two vertices non-trivially.
    assert count_cycle_cover2_cnf(TWO_LOOPS, EdgeCNF.empty(), 2, 1) == 1
    # k = 0 admits exactly the all-self-loop cover.
    assert count_cycle_cover2_cnf(TWO_LOOPS, EdgeCNF.empty(), 2, 0) == 1
    # An empty clause is unsatisfiable.
    unsat = EdgeCNF(((),))
    assert count_cycle_cover2_cnf(TWO_LOOPS, unsat, 2, 1) == 0


def test_cycle_cover_gate():
    assert cyclecover_gate_passes(TWO_LOOPS, EdgeCNF.empty(), 3)  # 3 <= ceil(log2 6)
    assert not cyclecover_gate_passes(TWO_LOOPS, EdgeCNF.empty(), 4)
    assert count_cycle_cover2_cnf(TWO_LOOPS, EdgeCNF.empty(), 4, 1) == 0


def test_cycle_cover_counter_matches_filter_oracle():
    rng = random.Random(23)
    for _ in range(40):
        g = rand_degree2_graph(rng, 5)
        phi = rand_cnf(rng, g)
        a, k = rng.randint(0, 3), rng.randint(0, 3)
        got = count_cycle_cover2_cnf(g, phi, a, k)
        if not cyclecover_gate_passes(g, phi, a):
            assert got == 0
            continue
        expected = 0
        for cover in enumerate_cycle_covers(g):
            nontrivial = [c for c in cover_cycles(g, cover) if len(c) > 1]
            if len(nontrivial) > k:
                continue
            if sum(map(len, nontrivial)) != k * a:
                continue
            if eval_cnf(phi, characteristic_assignment(g, set(cover))):
                expected += 1
        assert got == expected
        assert got <= len(enumerate_cycle_covers(g))


def test_cycle_cover_class_sums_bounded_by_total():
    # For fixed a >= 1 the k classes split covers by their number of
    # non-trivially covered vertices, so the class sums cannot exceed the
    # total number of cycle covers.
    rng = random.Random(24)
    for _ in range(25):
        g = rand_degree2_graph(rng, 5)
        total = len(enumerate_cycle_covers(g))
        for a in range(1, 4):
            class_sum = sum(
                count_cycle_cover2_cnf(g, EdgeCNF.empty(), a, k)
                for k in range(0, g.n + 1)
            )
            assert class_sum <= total


def test_cnf_variable_range_checked():
    phi = EdgeCNF.from_dimacs_literals([[9]])
    with pytest.raises(CountingError) as err:
        count_log_reach2_cnf(DIAMOND, 0, 3, phi, 1, 1)
    assert err.value.code == "edge-variable-out-of-range"
