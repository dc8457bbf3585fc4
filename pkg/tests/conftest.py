from __future__ import annotations

import numpy as np
import pytest

from k2bench.network import BeliefNetwork, NodeSpec


def make_net(spec, name="net", ordering=None):
    """Build a network from (name, ordinality, parent names, cpt rows) tuples."""
    index = {entry[0]: i for i, entry in enumerate(spec)}
    nodes = tuple(
        NodeSpec(
            name=entry[0],
            ordinality=entry[1],
            parents=tuple(index[p] for p in entry[2]),
            cpt=np.array(entry[3], dtype=float) if entry[3] is not None else None,
        )
        for entry in spec
    )
    if ordering is None:
        ordering = tuple(range(len(nodes)))
    else:
        ordering = tuple(index[n] for n in ordering)
    return BeliefNetwork(name=name, nodes=nodes, ordering=ordering)


@pytest.fixture
def two_node_net():
    """A -> B, binary, with easy round numbers."""
    return make_net(
        [
            ("A", 2, (), [[0.5, 0.5]]),
            ("B", 2, ("A",), [[0.2, 0.8], [0.7, 0.3]]),
        ]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)
