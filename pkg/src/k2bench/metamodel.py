"""The bundled accuracy meta-model and the discretization that feeds it.

A six-variable belief network relates dataset attributes to the two
edge-recovery metrics:

    VAR_NUM -> ARCS        number of variables determines arc count
    CASES   -> M1          case count determines recovered-arc fraction
    M_DIM, CASES -> M2     ordinality and case count determine extraneous ratio

Variable values are bins; ``VALUE_LABELS`` maps each value index to its
human-readable label. Note the bundled model's M2 variable has five values:
the ">50%" bin was never observed in the run the model was built from and has
no published column. Its CASES variable has four values, produced by merging
the two lowest case-count bins (see ``CASE_BINS_MERGED``).

The model ships as a data file in the standard network format, so it can be
swapped for a refit produced by ``refit_metamodel`` on one's own results.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from importlib import resources

import numpy as np

from .evaluation import (
    ARC_BINS,
    CASE_BINS_MERGED,
    M1_BINS,
    M2_BINS,
    BinScheme,
    EvaluationRecord,
)
from .k2 import LearnerConfig, k2
from .netio import network_from_json
from .network import BeliefNetwork, infer
from .sampling import CaseDatabase

META_VARIABLES = ("VAR_NUM", "ARCS", "M_DIM", "CASES", "M1", "M2")

VARIABLE_COUNT_VALUES = (2, 10, 20, 30, 40, 50)
ORDINALITY_VALUES = (2, 3)

VALUE_LABELS: dict[str, tuple[str, ...]] = {
    "VAR_NUM": tuple(str(v) for v in VARIABLE_COUNT_VALUES),
    "ARCS": ARC_BINS.labels,
    "M_DIM": ("binary", "ternary"),
    "CASES": CASE_BINS_MERGED.labels,
    "M1": M1_BINS.labels,
    "M2": M2_BINS.labels,
}

# Ordinality of each column when refitting the meta-model from records.
_REFIT_ORDINALITIES = {name: len(labels) for name, labels in VALUE_LABELS.items()}


def load_metamodel() -> BeliefNetwork:
    """The bundled model, loaded fresh (callers may mutate nothing anyway)."""
    text = resources.files("k2bench").joinpath("data/metamodel.json").read_text("utf-8")
    return network_from_json(text)


def variables_value(count: int) -> int:
    """0-based VAR_NUM value for a raw variable count."""
    try:
        return VARIABLE_COUNT_VALUES.index(count)
    except ValueError:
        raise ValueError(
            f"variable count {count} is not one of {VARIABLE_COUNT_VALUES}"
        ) from None


def ordinality_value(ordinality: int) -> int:
    try:
        return ORDINALITY_VALUES.index(ordinality)
    except ValueError:
        raise ValueError(f"ordinality {ordinality} is not one of {ORDINALITY_VALUES}") from None


def discretize_record(
    record: EvaluationRecord, case_bins: BinScheme = CASE_BINS_MERGED
) -> dict[str, int]:
    """Map one evaluation record to 0-based meta-model values."""
    return {
        "VAR_NUM": variables_value(record.variables),
        "ARCS": ARC_BINS.index(record.arcs_gs),
        "M_DIM": ordinality_value(record.ordinality),
        "CASES": case_bins.index(record.cases),
        "M1": M1_BINS.index(record.m1),
        "M2": M2_BINS.index(record.m2),
    }


def _resolve_value(net: BeliefNetwork, name: str, raw: str | int) -> int:
    """Turn a label or 1-based published value index into a 0-based index."""
    node = net.nodes[net.node_index(name)]
    labels = VALUE_LABELS.get(name, ())[: node.ordinality]
    text = str(raw).strip()
    lowered = [lb.lower() for lb in labels]
    if text.lower() in lowered:
        return lowered.index(text.lower())
    try:
        index = int(text)
    except ValueError:
        index = None
    if index is not None and 1 <= index <= node.ordinality:
        return index - 1
    raise ValueError(
        f"unknown value {raw!r} for {name}; valid labels: {list(labels)} "
        f"or value numbers 1..{node.ordinality}"
    )


def _resolve_variable(net: BeliefNetwork, name: str) -> int:
    names = [n.name for n in net.nodes]
    if name not in names:
        raise ValueError(f"unknown variable {name!r}; valid variables: {names}")
    return names.index(name)


def predict(
    target: str,
    evidence: Mapping[str, str | int] | None = None,
    net: BeliefNetwork | None = None,
) -> list[tuple[str, float]]:
    """Posterior distribution of ``target`` given label-valued evidence.

    Evidence values may be labels from ``VALUE_LABELS`` or 1-based value
    numbers as printed in the published tables. Returns (label, probability)
    pairs in value order.
    """
    if net is None:
        net = load_metamodel()
    target_idx = _resolve_variable(net, target)
    resolved = {
        _resolve_variable(net, name): _resolve_value(net, name, value)
        for name, value in (evidence or {}).items()
    }
    if target_idx in resolved:
        raise ValueError(f"target {target} also appears in the evidence")
    distribution = infer(net, target_idx, resolved)
    labels = VALUE_LABELS.get(target, ())
    if len(labels) < distribution.size:
        labels = tuple(f"value {k + 1}" for k in range(distribution.size))
    return [(labels[k], float(p)) for k, p in enumerate(distribution)]


def refit_metamodel(
    records: Sequence[EvaluationRecord],
    max_parents: int = 10,
    case_bins: BinScheme = CASE_BINS_MERGED,
) -> BeliefNetwork:
    """Learn a fresh meta-model from discretized evaluation records.

    Runs the greedy learner over the discretized records with the fixed
    ordering ``META_VARIABLES``. Degenerate records are dropped: their metric
    values are conventions, not measurements. Unlike the bundled model, the
    result keeps all six M2 values (bins with no data get smoothed-uniform
    rows rather than being dropped).
    """
    usable = [r for r in records if not r.degenerate]
    if not usable:
        raise ValueError("refit needs at least one non-degenerate record")
    rows = np.array(
        [
            [discretize_record(r, case_bins)[name] for name in META_VARIABLES]
            for r in usable
        ],
        dtype=np.int64,
    )
    ordinalities = tuple(
        len(case_bins.labels) if name == "CASES" else _REFIT_ORDINALITIES[name]
        for name in META_VARIABLES
    )
    db = CaseDatabase(
        column_names=META_VARIABLES,
        ordinalities=ordinalities,
        rows=rows,
        source_network="evaluation-records",
    )
    net = k2(db, LearnerConfig(ordering=META_VARIABLES, max_parents=max_parents))
    return BeliefNetwork(name="accuracy-meta-refit", nodes=net.nodes, ordering=net.ordering)
