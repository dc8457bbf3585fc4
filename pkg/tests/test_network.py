from __future__ import annotations

import itertools

import numpy as np
import pytest

import oracles
from conftest import make_net
from k2bench.generate import GenerationConfig, generate_network
from k2bench.network import (
    BeliefNetwork,
    NodeSpec,
    ZeroProbabilityEvidence,
    infer,
    joint_probability,
    parent_config_index,
    validate,
)


def test_parent_config_index_leftmost_slowest():
    # two parents with ordinalities (2, 3): leftmost advances every 3 rows
    ords = (2, 3)
    rows = [parent_config_index(v, ords) for v in itertools.product(range(2), range(3))]
    assert rows == [0, 1, 2, 3, 4, 5]
    assert parent_config_index((1, 0), ords) == 3


def test_validate_well_formed(two_node_net):
    assert validate(two_node_net).ok


def test_validate_row_sum_violation_names_node_and_row():
    net = make_net([("A", 2, (), [[0.6, 0.6]])])
    report = validate(net)
    assert not report.ok
    assert any("A" in v and "row 0" in v for v in report.violations)


def test_validate_two_cycle():
    nodes = (
        NodeSpec("A", 2, (1,), np.full((2, 2), 0.5)),
        NodeSpec("B", 2, (0,), np.full((2, 2), 0.5)),
    )
    net = BeliefNetwork("cyclic", nodes, (0, 1))
    report = validate(net)
    assert any(v.startswith("cycle") for v in report.violations)


def test_validate_ordering_violations():
    net = make_net(
        [
            ("A", 2, ("B",), [[0.5, 0.5], [0.5, 0.5]]),
            ("B", 2, (), [[0.5, 0.5]]),
        ]
    )
    report = validate(net)  # ordering (A, B) but B is A's parent
    assert any("ordering" in v for v in report.violations)

    bad = BeliefNetwork("bad", net.nodes, (0, 0))
    assert any("permutation" in v for v in validate(bad).violations)


def test_validate_structure_only_and_shape():
    net = make_net([("A", 2, (), None)])
    assert any("cpt missing" in v for v in validate(net).violations)
    wrong = make_net([("A", 3, (), [[0.5, 0.5]])])
    assert any("shape" in v for v in validate(wrong).violations)


def test_joint_probability_single_node():
    net = make_net([("A", 2, (), [[0.3, 0.7]])])
    assert joint_probability(net, {0: 0}) == pytest.approx(0.3, abs=0)


def test_joint_probability_chain(two_node_net):
    assert joint_probability(two_node_net, {0: 0, 1: 0}) == pytest.approx(0.1)


def test_joint_probability_missing_node_named(two_node_net):
    with pytest.raises(ValueError, match="missing nodes: B"):
        joint_probability(two_node_net, {0: 0})


def test_joint_probability_sums_to_one():
    for seed, count, ords in ((1, 5, (2,)), (2, 10, (3,)), (3, 8, (2, 3))):
        cfg = GenerationConfig(
            variable_count_choices=(count,), ordinality_choices=ords, seed=seed
        )
        net = generate_network(cfg)
        shape = tuple(node.ordinality for node in net.nodes)
        total = sum(
            joint_probability(net, dict(enumerate(combo)))
            for combo in itertools.product(*map(range, shape))
        )
        assert total == pytest.approx(1.0, abs=1e-9)


def test_infer_root_prior(two_node_net):
    dist = infer(two_node_net, 0, {})
    assert np.allclose(dist, [0.5, 0.5], atol=1e-12)


def test_infer_all_parents_given_equals_cpt_row(two_node_net):
    dist = infer(two_node_net, 1, {0: 1})
    assert np.allclose(dist, [0.7, 0.3], atol=1e-12)


def test_infer_matches_joint_table_oracle(rng):
    for _ in range(25):
        count = int(rng.integers(2, 9))
        cfg = GenerationConfig(
            variable_count_choices=(count,),
            max_in_degree=3,
            ordinality_choices=(2, 3),
            seed=int(rng.integers(2**32)),
        )
        net = generate_network(cfg)
        target = int(rng.integers(count))
        evidence = {
            i: int(rng.integers(net.nodes[i].ordinality))
            for i in range(count)
            if i != target and rng.random() < 0.4
        }
        got = infer(net, target, evidence)
        want = oracles.infer_from_table(net, target, evidence)
        assert np.allclose(got, want, atol=1e-12, rtol=0)
        assert got.sum() == pytest.approx(1.0, abs=1e-9)


def _permuted(net, perm):
    """Rebuild a network with nodes stored in a different order."""
    inverse = {old: new for new, old in enumerate(perm)}
    nodes = tuple(
        NodeSpec(
            name=net.nodes[old].name,
            ordinality=net.nodes[old].ordinality,
            parents=tuple(inverse[p] for p in net.nodes[old].parents),
            cpt=net.nodes[old].cpt,
        )
        for old in perm
    )
    ordering = tuple(inverse[i] for i in net.ordering)
    return BeliefNetwork(net.name, nodes, ordering)


def test_infer_invariant_under_storage_permutation(rng):
    cfg = GenerationConfig(variable_count_choices=(6,), max_in_degree=3, seed=99)
    net = generate_network(cfg)
    target, evidence = 4, {1: 0}
    baseline = infer(net, target, evidence)
    for _ in range(5):
        perm = list(rng.permutation(6))
        permuted = _permuted(net, perm)
        new_target = perm.index(target)
        new_evidence = {perm.index(i): v for i, v in evidence.items()}
        assert validate(permuted).ok
        assert np.allclose(infer(permuted, new_target, new_evidence), baseline, atol=1e-12)


def test_infer_zero_probability_evidence():
    net = make_net(
        [
            ("A", 2, (), [[1.0, 0.0]]),
            ("B", 2, ("A",), [[0.5, 0.5], [0.5, 0.5]]),
        ]
    )
    with pytest.raises(ZeroProbabilityEvidence):
        infer(net, 1, {0: 1})


def test_infer_rejects_target_in_evidence(two_node_net):
    with pytest.raises(ValueError, match="evidence"):
        infer(two_node_net, 0, {0: 1})


def test_infer_rejects_out_of_range_value(two_node_net):
    with pytest.raises(ValueError, match="out of range"):
        infer(two_node_net, 1, {0: 5})
