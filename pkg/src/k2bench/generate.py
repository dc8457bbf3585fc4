"""Random generation of gold-standard belief networks.

Structure: the node count is drawn uniformly from a fixed set of choices, a
uniformly random total ordering is fixed, and each node at ordering position
k receives an in-degree drawn uniformly from {0, ..., min(max_in_degree, k)}
with that many distinct parents chosen uniformly from its predecessors. One
ordinality value is drawn per network and applied to all nodes.

Parameters: every CPT row is an independent uniform draw from the probability
simplex, built by normalizing i.i.d. unit-exponential variates.

All randomness flows through a single numpy Generator (PCG64). The draw
sequence is documented on each function so that a seed pins the output
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import BeliefNetwork, NodeSpec

# Refuse to materialize absurd tables (q rows * ordinality cells).
MAX_CPT_CELLS = 50_000_000


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs for the random network generator.

    The default in-degree cap of 4 keeps generated families small enough for
    the greedy learner to recover most arcs within the default case-count
    range; see the README calibration note. Any cap up to 10 (or beyond) can
    be configured.
    """

    variable_count_choices: tuple[int, ...] = (2, 10, 20, 30, 40, 50)
    max_in_degree: int = 4
    ordinality_choices: tuple[int, ...] = (2, 3)
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "variable_count_choices", tuple(int(v) for v in self.variable_count_choices)
        )
        object.__setattr__(
            self, "ordinality_choices", tuple(int(v) for v in self.ordinality_choices)
        )
        if not self.variable_count_choices or min(self.variable_count_choices) < 1:
            raise ValueError("variable_count_choices must be non-empty positive integers")
        if not self.ordinality_choices or min(self.ordinality_choices) < 2:
            raise ValueError("ordinality_choices must be non-empty integers >= 2")
        if self.max_in_degree < 0:
            raise ValueError("max_in_degree must be >= 0")


def generate_structure(
    cfg: GenerationConfig, rng: np.random.Generator, name: str = "net"
) -> BeliefNetwork:
    """Draw a random DAG skeleton; CPTs are left unfilled.

    Draw sequence: node count index, ordering permutation, ordinality index,
    then per ordering position one in-degree and (when positive) one
    without-replacement parent selection. Parents are stored sorted by node
    index; CPT row order is unaffected by the selection order.
    """
    n = cfg.variable_count_choices[rng.integers(len(cfg.variable_count_choices))]
    ordering = tuple(int(i) for i in rng.permutation(n))
    ordinality = cfg.ordinality_choices[rng.integers(len(cfg.ordinality_choices))]

    parents: list[tuple[int, ...]] = [()] * n
    for position, node in enumerate(ordering):
        d = int(rng.integers(min(cfg.max_in_degree, position) + 1))
        if d:
            predecessors = np.array(ordering[:position])
            chosen = rng.choice(predecessors, size=d, replace=False)
            parents[node] = tuple(sorted(int(p) for p in chosen))

    nodes = tuple(
        NodeSpec(name=f"X{i + 1}", ordinality=ordinality, parents=parents[i])
        for i in range(n)
    )
    return BeliefNetwork(name=name, nodes=nodes, ordering=ordering)


def parameterize(net: BeliefNetwork, rng: np.random.Generator) -> BeliefNetwork:
    """Fill every CPT row with an independent flat-simplex draw.

    Rows are generated node by node in storage order, one exponential matrix
    per node, normalized row-wise. Row sums are 1 up to float rounding.
    """
    nodes = []
    for i, node in enumerate(net.nodes):
        q = math.prod(net.parent_ordinalities(i))
        if q * node.ordinality > MAX_CPT_CELLS:
            raise ValueError(
                f"node {node.name}: CPT with {q} rows x {node.ordinality} "
                "columns is too large to materialize"
            )
        draws = rng.standard_exponential((q, node.ordinality))
        cpt = draws / draws.sum(axis=1, keepdims=True)
        nodes.append(
            NodeSpec(name=node.name, ordinality=node.ordinality, parents=node.parents, cpt=cpt)
        )
    return BeliefNetwork(name=net.name, nodes=tuple(nodes), ordering=net.ordering)


def generate_network(
    cfg: GenerationConfig, rng: np.random.Generator | None = None, name: str = "net"
) -> BeliefNetwork:
    """Structure plus parameters in one call.

    When ``rng`` is omitted one is created from ``cfg.seed`` (or from fresh
    OS entropy if that is also unset, in which case the output is not
    reproducible).
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    return parameterize(generate_structure(cfg, rng, name=name), rng)
