from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

import oracles
from conftest import make_net
from k2bench.evaluation import compare
from k2bench.k2 import (
    FamilyCounts,
    LearnerConfig,
    _search_structures,
    estimate_cpts,
    family_counts,
    family_log_score,
    k2,
)
from k2bench.network import validate
from k2bench.sampling import CaseDatabase, sample


def _db(columns, ordinalities, rows):
    return CaseDatabase(columns, ordinalities, np.array(rows, dtype=np.int64))


def _random_db(rng, k=4, max_cases=30):
    ords = tuple(int(rng.integers(2, 4)) for _ in range(k))
    n = int(rng.integers(0, max_cases + 1))
    rows = (
        np.column_stack([rng.integers(0, o, size=n) for o in ords])
        if n
        else np.zeros((0, k), dtype=np.int64)
    )
    return CaseDatabase(tuple(f"c{i}" for i in range(k)), ords, rows)


def test_score_simple_counts():
    db = _db(("a",), (2,), [[0], [0], [1]])
    assert family_log_score(db, 0, []) == pytest.approx(math.log(1 / 12), abs=1e-12)


def test_score_empty_database_is_zero():
    db = _db(("a", "b"), (2, 3), np.zeros((0, 2)))
    assert family_log_score(db, 0, []) == 0.0
    assert family_log_score(db, 0, [1]) == 0.0


def test_score_matches_exact_factorial_oracle():
    rng = np.random.default_rng(64)
    for _ in range(200):
        db = _random_db(rng)
        child = int(rng.integers(4))
        parents = [p for p in range(4) if p != child and rng.random() < 0.5]
        got = family_log_score(db, child, parents)
        want = oracles.exact_family_score(db, child, parents)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_score_is_set_function_of_parents():
    rng = np.random.default_rng(8)
    db = _random_db(rng, k=5, max_cases=60)
    assert family_log_score(db, 4, [0, 2, 3]) == family_log_score(db, 4, [3, 0, 2])


def test_score_rejects_child_in_parents():
    db = _db(("a", "b"), (2, 2), [[0, 0]])
    with pytest.raises(ValueError, match="parent set"):
        family_log_score(db, 0, [0, 1])


def test_family_counts_invariants():
    rng = np.random.default_rng(12)
    db = _random_db(rng, k=4, max_cases=50)
    counts = family_counts(db, 3, (0, 1))
    assert counts.n_jk.shape == (counts.q, counts.r)
    assert counts.n_jk.sum() == db.num_cases
    assert np.array_equal(counts.n_j, counts.n_jk.sum(axis=1))


def test_k2_recovers_strong_dependency():
    net = make_net(
        [
            ("A", 2, (), [[0.5, 0.5]]),
            ("B", 2, ("A",), [[0.9, 0.1], [0.1, 0.9]]),
        ]
    )
    db = sample(net, 5000, np.random.default_rng(17))
    # the score itself must prefer the arc on this very sample
    assert family_log_score(db, 1, [0]) > family_log_score(db, 1, [])
    induced = k2(db, LearnerConfig(ordering=("A", "B")))
    assert induced.arc_names() == {("A", "B")}


def test_k2_empty_database_gives_empty_network():
    db = _db(("a", "b", "c"), (2, 2, 2), np.zeros((0, 3)))
    net = k2(db, LearnerConfig(ordering=("a", "b", "c")))
    assert not net.arcs()
    for node in net.nodes:
        assert np.allclose(node.cpt, 0.5)


def test_k2_respects_ordering_and_max_parents():
    rng = np.random.default_rng(23)
    for _ in range(20):
        db = _random_db(rng, k=5, max_cases=120)
        ordering = tuple(rng.permutation(db.column_names))
        cfg = LearnerConfig(ordering=ordering, max_parents=2)
        net = k2(db, cfg)
        position = {name: k for k, name in enumerate(ordering)}
        for parent, child in net.arc_names():
            assert position[parent] < position[child]
        assert all(len(node.parents) <= 2 for node in net.nodes)
        assert validate(net).ok


def test_k2_greedy_never_beats_exhaustive_and_beats_empty():
    rng = np.random.default_rng(34)
    for _ in range(30):
        db = _random_db(rng, k=4, max_cases=200)
        cfg = LearnerConfig(ordering=db.column_names, max_parents=3)
        net = k2(db, cfg)
        total, empty_total = 0.0, 0.0
        for i in range(4):
            score = family_log_score(db, i, net.nodes[i].parents)
            best = max(
                family_log_score(db, i, combo)
                for size in range(0, i + 1)
                for combo in itertools.combinations(range(i), size)
            )
            assert score <= best + 1e-9
            total += score
            empty_total += family_log_score(db, i, [])
        assert total >= empty_total - 1e-9


def test_k2_accepted_scores_strictly_increase():
    rng = np.random.default_rng(45)
    db = _random_db(rng, k=5, max_cases=200)
    for parents, trace in _search_structures(db, LearnerConfig(ordering=db.column_names)):
        assert len(trace) == len(parents) + 1
        assert all(later > earlier for earlier, later in zip(trace, trace[1:]))


def test_k2_more_cases_do_not_hurt_recovery():
    from k2bench.generate import GenerationConfig, generate_network

    gold = generate_network(
        GenerationConfig(variable_count_choices=(5,), max_in_degree=2, seed=7)
    )
    ordering = tuple(gold.nodes[j].name for j in gold.ordering)

    def mean_m1(cases):
        scores = []
        for rep in range(30):
            db = sample(gold, cases, np.random.default_rng(1000 + rep))
            induced = k2(db, LearnerConfig(ordering=ordering))
            scores.append(compare(gold, induced, cases=cases).m1)
        return float(np.mean(scores))

    assert mean_m1(2000) >= mean_m1(100)


def test_k2_ordering_mismatch_rejected():
    db = _db(("a", "b"), (2, 2), [[0, 0]])
    with pytest.raises(ValueError, match="ordering"):
        k2(db, LearnerConfig(ordering=("a", "z")))


def test_estimate_cpts_laplace_values():
    db = _db(("a",), (2,), [[0]] * 9 + [[1]])
    skeleton = make_net([("a", 2, (), None)])
    net = estimate_cpts(db, skeleton)
    assert np.allclose(net.nodes[0].cpt, [[10 / 12, 2 / 12]])

    empty = _db(("a",), (3,), np.zeros((0, 1)))
    uniform = estimate_cpts(empty, make_net([("a", 3, (), None)]))
    assert np.allclose(uniform.nodes[0].cpt, 1 / 3)


def test_estimate_cpts_rows_normalized_and_match_counts():
    rng = np.random.default_rng(56)
    db = _random_db(rng, k=4, max_cases=150)
    skeleton = k2(db, LearnerConfig(ordering=db.column_names))
    net = estimate_cpts(db, skeleton)
    for i, node in enumerate(net.nodes):
        assert np.allclose(node.cpt.sum(axis=1), 1.0, atol=1e-12)
        counts = family_counts(db, i, node.parents)
        expected = (counts.n_jk + 1.0) / (counts.n_j[:, None] + counts.r)
        assert np.allclose(node.cpt, expected, atol=0)


def test_estimate_cpts_honors_declared_parent_order():
    rows = [[a, b, (a + 2 * b) % 2] for a in range(2) for b in range(2) for _ in range(3)]
    db = _db(("a", "b", "c"), (2, 2, 2), rows)
    forward = estimate_cpts(db, make_net([("a", 2, (), None), ("b", 2, (), None),
                                          ("c", 2, ("a", "b"), None)]))
    swapped = estimate_cpts(db, make_net([("a", 2, (), None), ("b", 2, (), None),
                                          ("c", 2, ("b", "a"), None)]))
    # row (a=0, b=1) in declared order (a, b) is row 1; in (b, a) it is row 2
    assert np.allclose(forward.nodes[2].cpt[1], swapped.nodes[2].cpt[2])
    assert np.allclose(forward.nodes[2].cpt[2], swapped.nodes[2].cpt[1])


def test_family_counts_q_for_mixed_ordinalities():
    db = _db(("a", "b", "c"), (2, 3, 2), [[0, 2, 1], [1, 1, 0]])
    counts = family_counts(db, 2, (0, 1))
    assert counts.q == 6 and counts.r == 2
    assert isinstance(counts, FamilyCounts)
