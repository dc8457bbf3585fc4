"""Discrete belief networks: representation, validation, joint probability,
and exact posterior inference by enumeration.

A network is a DAG over discrete variables plus one conditional probability
table (CPT) per node. CPT rows are indexed by the joint parent configuration
with the leftmost parent changing slowest (most significant digit). Evidence
and full assignments are plain mappings from node index to value index.

Networks are immutable after construction and every operation here is a pure
function of its inputs, so values can be shared freely across workers.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

# A CPT row is considered normalized when its sum is this close to 1.
ROW_SUM_TOL = 1e-9


class ZeroProbabilityEvidence(ValueError):
    """Raised when conditioning on evidence that has probability zero."""


def parent_config_index(values: Iterable[int], ordinalities: Iterable[int]) -> int:
    """CPT row index for one combination of parent values.

    The leftmost parent is the most significant digit: it changes slowest as
    the row index increases.
    """
    idx = 0
    for value, card in zip(values, ordinalities):
        idx = idx * card + value
    return idx


@dataclass(frozen=True, eq=False)
class NodeSpec:
    """One discrete variable: name, value count, parent indices, and CPT.

    ``cpt`` has shape (number of joint parent configurations, ordinality);
    it is None for structure-only nodes that have not been parameterized.
    The stored array is read-only.
    """

    name: str
    ordinality: int
    parents: tuple[int, ...] = ()
    cpt: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        if self.cpt is not None:
            cpt = np.array(self.cpt, dtype=np.float64)
            cpt.flags.writeable = False
            object.__setattr__(self, "cpt", cpt)


@dataclass(frozen=True, eq=False)
class BeliefNetwork:
    """A DAG of NodeSpec values plus an ancestral ordering.

    ``ordering[k]`` is the index of the node at ancestral position k; every
    parent of a node must occupy an earlier position than the node itself.
    """

    name: str
    nodes: tuple[NodeSpec, ...]
    ordering: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "ordering", tuple(int(i) for i in self.ordering))

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node_index(self, name: str) -> int:
        for i, node in enumerate(self.nodes):
            if node.name == name:
                return i
        raise ValueError(f"no node named {name!r} in network {self.name!r}")

    def parent_ordinalities(self, i: int) -> tuple[int, ...]:
        return tuple(self.nodes[p].ordinality for p in self.nodes[i].parents)

    def cpt_rows(self, i: int) -> int:
        """Number of CPT rows node i must have (1 when it has no parents)."""
        rows = 1
        for card in self.parent_ordinalities(i):
            rows *= card
        return rows

    def arcs(self) -> frozenset[tuple[int, int]]:
        """Directed arcs as (parent index, child index) pairs."""
        return frozenset(
            (p, i) for i, node in enumerate(self.nodes) for p in node.parents
        )

    def arc_names(self) -> frozenset[tuple[str, str]]:
        """Directed arcs as (parent name, child name) pairs."""
        return frozenset(
            (self.nodes[p].name, self.nodes[i].name)
            for i, node in enumerate(self.nodes)
            for p in node.parents
        )


@dataclass(frozen=True)
class ValidationReport:
    """All invariant violations found in a network; empty means well-formed."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(net: BeliefNetwork) -> ValidationReport:
    """Check structural and numeric invariants, reporting every violation.

    Diagnoses duplicate or unknown parents, bad orderings, directed cycles,
    CPT shape mismatches, out-of-range probabilities, and CPT rows whose sum
    differs from 1 by more than ``ROW_SUM_TOL``. Returns diagnostics rather
    than raising.
    """
    violations: list[str] = []
    n = net.num_nodes

    names = [node.name for node in net.nodes]
    for name in sorted({x for x in names if names.count(x) > 1}):
        violations.append(f"name: {name!r} used by more than one node")

    structure_ok = True
    for i, node in enumerate(net.nodes):
        if node.ordinality < 2:
            violations.append(f"node {node.name}: ordinality {node.ordinality} < 2")
        seen: set[int] = set()
        for p in node.parents:
            if p < 0 or p >= n:
                violations.append(f"node {node.name}: parent index {p} out of range")
                structure_ok = False
            elif p == i:
                violations.append(f"cycle: node {node.name} is its own parent")
                structure_ok = False
            elif p in seen:
                violations.append(f"node {node.name}: duplicate parent index {p}")
            seen.add(p)

    if sorted(net.ordering) != list(range(n)):
        violations.append("ordering: not a permutation of the node indices")
    elif structure_ok:
        position = {node_i: k for k, node_i in enumerate(net.ordering)}
        for i, node in enumerate(net.nodes):
            for p in node.parents:
                if position[p] >= position[i]:
                    violations.append(
                        f"ordering: parent {net.nodes[p].name} of {node.name} "
                        "does not precede it"
                    )

    if structure_ok:
        cyclic = _nodes_on_cycles(net)
        if cyclic:
            listed = ", ".join(net.nodes[i].name for i in sorted(cyclic))
            violations.append(f"cycle: directed cycle through {listed}")

    for i, node in enumerate(net.nodes):
        if node.cpt is None:
            violations.append(f"node {node.name}: cpt missing (structure-only)")
            continue
        expected = (net.cpt_rows(i), node.ordinality)
        if node.cpt.shape != expected:
            violations.append(
                f"node {node.name}: cpt shape {node.cpt.shape} != {expected}"
            )
            continue
        if np.any(node.cpt < 0.0) or np.any(node.cpt > 1.0):
            violations.append(f"node {node.name}: cpt has entries outside [0, 1]")
        sums = node.cpt.sum(axis=1)
        for j in np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL):
            violations.append(
                f"node {node.name}: cpt row {int(j)} sums to {sums[j]:.12g}"
            )

    return ValidationReport(tuple(violations))


def _nodes_on_cycles(net: BeliefNetwork) -> set[int]:
    """Node indices that Kahn's algorithm cannot topologically order."""
    n = net.num_nodes
    children: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for i, node in enumerate(net.nodes):
        for p in set(node.parents):
            children[p].append(i)
            indegree[i] += 1
    queue = deque(i for i in range(n) if indegree[i] == 0)
    remaining = n
    while queue:
        i = queue.popleft()
        remaining -= 1
        for c in children[i]:
            indegree[c] -= 1
            if indegree[c] == 0:
                queue.append(c)
    return {i for i in range(n) if indegree[i] > 0} if remaining else set()


def _check_assignment(net: BeliefNetwork, assignment: Mapping[int, int]) -> None:
    n = net.num_nodes
    for i, v in assignment.items():
        if i < 0 or i >= n:
            raise ValueError(f"assignment refers to unknown node index {i}")
        if v < 0 or v >= net.nodes[i].ordinality:
            raise ValueError(
                f"value {v} out of range for node {net.nodes[i].name} "
                f"(ordinality {net.nodes[i].ordinality})"
            )
        if net.nodes[i].cpt is None:
            raise ValueError(f"node {net.nodes[i].name} is not parameterized")


def _joint(net: BeliefNetwork, values: list[int]) -> float:
    """Joint probability of a full assignment given as a per-index value list."""
    p = 1.0
    for i, node in enumerate(net.nodes):
        row = 0
        for parent in node.parents:
            row = row * net.nodes[parent].ordinality + values[parent]
        p *= node.cpt[row, values[i]]
    return float(p)


def joint_probability(net: BeliefNetwork, assignment: Mapping[int, int]) -> float:
    """Probability of one full assignment: the product over nodes of
    P(value | parent values).

    ``assignment`` must cover every node; missing nodes are reported by name.
    """
    missing = [net.nodes[i].name for i in range(net.num_nodes) if i not in assignment]
    if missing:
        raise ValueError(f"assignment missing nodes: {', '.join(missing)}")
    _check_assignment(net, assignment)
    return _joint(net, [assignment[i] for i in range(net.num_nodes)])


def infer(
    net: BeliefNetwork, target: int, evidence: Mapping[int, int] | None = None
) -> np.ndarray:
    """Exact posterior P(target | evidence) by full enumeration.

    Sums the joint probability over every configuration of the free nodes,
    once per target value, then normalizes. Intended for networks small
    enough to enumerate; no factorization tricks are applied.

    Raises ZeroProbabilityEvidence when the evidence has zero marginal
    probability, and ValueError when the target appears in the evidence.
    """
    evidence = dict(evidence or {})
    n = net.num_nodes
    if target < 0 or target >= n:
        raise ValueError(f"target index {target} out of range")
    if target in evidence:
        raise ValueError(
            f"target node {net.nodes[target].name} also appears in the evidence"
        )
    _check_assignment(net, evidence)
    if net.nodes[target].cpt is None:
        raise ValueError(f"node {net.nodes[target].name} is not parameterized")

    free = [i for i in range(n) if i != target and i not in evidence]
    ranges = [range(net.nodes[i].ordinality) for i in free]
    values = [0] * n
    for i, v in evidence.items():
        values[i] = v

    unnormalized = np.zeros(net.nodes[target].ordinality)
    for t in range(net.nodes[target].ordinality):
        values[target] = t
        total = 0.0
        for combo in itertools.product(*ranges):
            for i, v in zip(free, combo):
                values[i] = v
            total += _joint(net, values)
        unnormalized[t] = total

    z = unnormalized.sum()
    if z <= 0.0:
        raise ZeroProbabilityEvidence(
            f"evidence {evidence!r} has zero probability under {net.name!r}"
        )
    return unnormalized / z
