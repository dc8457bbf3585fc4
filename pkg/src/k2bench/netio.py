"""JSON on-disk format for belief networks.

One document per network:

    {
      "format": "belief-network/1",
      "name": "...",
      "ordering": ["A", "B", ...],          # node names, ancestral order
      "nodes": [
        {"name": "A", "ordinality": 2, "parents": [],
         "cpt": ["0.5 0.5"]},               # one string per row, leftmost
        ...                                 # parent changes slowest
      ]
    }

Probabilities are written as decimal strings with 17 significant digits so
files round-trip bit exact. Rows whose written sum drifts from 1 by more than
ROW_SUM_TOL but at most RENORM_TOL (published tables rounded to two decimals
do this) are renormalized on load; anything farther off is an error.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .network import ROW_SUM_TOL, BeliefNetwork, NodeSpec, validate

FORMAT_TAG = "belief-network/1"
RENORM_TOL = 0.02


class NetworkFormatError(ValueError):
    """Malformed or invalid network document."""


def network_to_json(net: BeliefNetwork) -> str:
    nodes = []
    for node in net.nodes:
        rows = None
        if node.cpt is not None:
            rows = [" ".join(format(p, ".17g") for p in row) for row in node.cpt]
        nodes.append(
            {
                "name": node.name,
                "ordinality": node.ordinality,
                "parents": [net.nodes[p].name for p in node.parents],
                "cpt": rows,
            }
        )
    doc = {
        "format": FORMAT_TAG,
        "name": net.name,
        "ordering": [net.nodes[i].name for i in net.ordering],
        "nodes": nodes,
    }
    return json.dumps(doc, indent=1)


def network_from_json(text: str) -> BeliefNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise NetworkFormatError(f"missing or unsupported format tag ({FORMAT_TAG!r})")

    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise NetworkFormatError("document has no nodes")
    index = {}
    for i, raw in enumerate(raw_nodes):
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise NetworkFormatError(f"node {i} has no usable name")
        if name in index:
            raise NetworkFormatError(f"duplicate node name {name!r}")
        index[name] = i

    nodes = []
    for raw in raw_nodes:
        name = raw["name"]
        ordinality = raw.get("ordinality")
        if not isinstance(ordinality, int) or ordinality < 2:
            raise NetworkFormatError(f"node {name}: bad ordinality {ordinality!r}")
        try:
            parents = tuple(index[p] for p in raw.get("parents", []))
        except KeyError as exc:
            raise NetworkFormatError(f"node {name}: unknown parent {exc}") from exc
        cpt = _parse_cpt(raw.get("cpt"), name, ordinality)
        nodes.append(NodeSpec(name=name, ordinality=ordinality, parents=parents, cpt=cpt))

    raw_ordering = doc.get("ordering")
    if not isinstance(raw_ordering, list) or sorted(raw_ordering) != sorted(index):
        raise NetworkFormatError("ordering is not a permutation of the node names")
    ordering = tuple(index[name] for name in raw_ordering)

    net = BeliefNetwork(name=str(doc.get("name", "")), nodes=tuple(nodes), ordering=ordering)
    report = validate(net)
    problems = [v for v in report.violations if "cpt missing" not in v]
    if problems:
        raise NetworkFormatError("; ".join(problems))
    return net


def _parse_cpt(raw, name: str, ordinality: int) -> np.ndarray | None:
    if raw is None:
        return None
    rows = []
    for j, row in enumerate(raw):
        if isinstance(row, str):
            row = row.split()
        try:
            values = np.array([float(x) for x in row], dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise NetworkFormatError(f"node {name}: cpt row {j} unreadable") from exc
        if values.size != ordinality:
            raise NetworkFormatError(
                f"node {name}: cpt row {j} has {values.size} entries, "
                f"expected {ordinality}"
            )
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise NetworkFormatError(
                f"node {name}: cpt row {j} has entries outside [0, 1]"
            )
        total = values.sum()
        if abs(total - 1.0) > RENORM_TOL:
            raise NetworkFormatError(
                f"node {name}: cpt row {j} sums to {total:.6g}, "
                f"beyond the renormalization tolerance {RENORM_TOL}"
            )
        if abs(total - 1.0) > ROW_SUM_TOL:
            values = values / total
        rows.append(values)
    return np.array(rows, dtype=np.float64)


def save_network(net: BeliefNetwork, path: str | Path) -> None:
    Path(path).write_text(network_to_json(net) + "\n", encoding="utf-8")


def load_network(path: str | Path) -> BeliefNetwork:
    return network_from_json(Path(path).read_text(encoding="utf-8"))
