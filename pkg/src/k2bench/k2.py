"""Greedy structure induction from complete case data under a fixed ordering.

Each node's parent set is grown independently: starting empty, the single
eligible predecessor whose addition raises the family score the most is added,
and the search stops as soon as no addition gives a strictly positive
improvement (or the parent cap is reached).

The family score of child i with parent set pi is

    g(i, pi) = prod_j [ (r - 1)! / (N_j + r - 1)! * prod_k N_jk! ]

where r is the child's ordinality, j ranges over joint parent configurations,
N_jk counts cases with parent configuration j and child value k, and
N_j = sum_k N_jk. Scores are computed as log g via the log-gamma function;
parent configurations with no cases contribute exactly zero, so only observed
configurations are ever touched.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

from .network import BeliefNetwork, NodeSpec
from .sampling import CaseDatabase


@dataclass(frozen=True)
class LearnerConfig:
    """Search inputs: the variable ordering (by column name) and parent cap.

    No variable may become a parent of one earlier in the ordering.
    """

    ordering: tuple[str, ...]
    max_parents: int = 10

    def __post_init__(self) -> None:
        object.__setattr__(self, "ordering", tuple(self.ordering))
        if self.max_parents < 0:
            raise ValueError("max_parents must be >= 0")
        if len(set(self.ordering)) != len(self.ordering):
            raise ValueError("ordering contains duplicate names")


@dataclass(frozen=True, eq=False)
class FamilyCounts:
    """Sufficient statistics for one family: the [q x r] count matrix.

    q is the number of joint parent configurations (rows follow the
    leftmost-slowest convention over parents sorted by column index),
    r the child's ordinality.
    """

    r: int
    q: int
    n_jk: np.ndarray

    def __post_init__(self) -> None:
        n_jk = np.array(self.n_jk, dtype=np.int64).reshape(self.q, self.r)
        n_jk.flags.writeable = False
        object.__setattr__(self, "n_jk", n_jk)

    @property
    def n_j(self) -> np.ndarray:
        return self.n_jk.sum(axis=1)


def family_counts(db: CaseDatabase, child: int, parents: Iterable[int]) -> FamilyCounts:
    """Dense contingency table of child values by joint parent configuration."""
    parents = _checked_parents(db, child, parents)
    r = db.ordinalities[child]
    q = math.prod(db.ordinalities[p] for p in parents)
    codes = _parent_codes(db.rows, db.ordinalities, parents)
    n_jk = np.zeros((q, r), dtype=np.int64)
    np.add.at(n_jk, (codes, db.rows[:, child]), 1)
    return FamilyCounts(r=r, q=q, n_jk=n_jk)


def family_log_score(db: CaseDatabase, child: int, parents: Iterable[int]) -> float:
    """log g(child, parents) on the given database; 0.0 when it is empty."""
    parents = _checked_parents(db, child, parents)
    codes = _parent_codes(db.rows, db.ordinalities, parents)
    return _score_codes(codes, db.rows[:, child], db.ordinalities[child])


def _checked_parents(db: CaseDatabase, child: int, parents: Iterable[int]) -> tuple[int, ...]:
    parents = tuple(sorted(int(p) for p in parents))
    k = len(db.column_names)
    if not 0 <= child < k:
        raise ValueError(f"child index {child} out of range")
    for p in parents:
        if not 0 <= p < k:
            raise ValueError(f"parent index {p} out of range")
    if len(set(parents)) != len(parents):
        raise ValueError("duplicate parent indices")
    if child in parents:
        raise ValueError(f"child column {db.column_names[child]} is in its own parent set")
    return parents


def _parent_codes(rows: np.ndarray, ordinalities, parents) -> np.ndarray:
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for p in parents:
        codes = codes * ordinalities[p] + rows[:, p]
    return codes


def _score_codes(parent_codes: np.ndarray, child_col: np.ndarray, r: int) -> float:
    """Family log score from parent-configuration codes and child values.

    Groups cases by (parent code, child value) with one sort; unobserved
    parent configurations contribute zero and are never enumerated.
    """
    if parent_codes.size == 0:
        return 0.0
    cells, counts = np.unique(parent_codes * np.int64(r) + child_col, return_counts=True)
    config = cells // r
    starts = np.flatnonzero(np.r_[True, config[1:] != config[:-1]])
    n_j = np.add.reduceat(counts, starts)
    return float(
        starts.size * gammaln(r)
        - gammaln(n_j + r).sum()
        + gammaln(counts + 1).sum()
    )


def _greedy_family(
    rows: np.ndarray,
    ordinalities: tuple[int, ...],
    child: int,
    predecessors: list[int],
    max_parents: int,
) -> tuple[list[int], list[float]]:
    """Grow one node's parent set; returns parents in acceptance order plus
    the strictly increasing trace of accepted scores (empty set first)."""
    child_col = rows[:, child]
    r = ordinalities[child]
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    score = _score_codes(codes, child_col, r)
    parents: list[int] = []
    trace = [score]
    while len(parents) < max_parents:
        best_node = None
        best_codes = None
        best_score = score
        for z in predecessors:
            if z in parents:
                continue
            candidate = codes * ordinalities[z] + rows[:, z]
            s = _score_codes(candidate, child_col, r)
            # Strict comparison: ties keep the incumbent, so the earliest
            # predecessor in the ordering wins among equals.
            if s > best_score:
                best_node, best_codes, best_score = z, candidate, s
        if best_node is None:
            break
        parents.append(best_node)
        codes = best_codes
        score = best_score
        trace.append(score)
    return parents, trace


def _search_structures(db: CaseDatabase, cfg: LearnerConfig) -> list[tuple[list[int], list[float]]]:
    """Run the per-node greedy search; index into the result by column."""
    column_of = {name: i for i, name in enumerate(db.column_names)}
    if sorted(cfg.ordering) != sorted(column_of):
        raise ValueError(
            "ordering does not match the database columns: "
            f"{sorted(cfg.ordering)} vs {sorted(column_of)}"
        )
    order_idx = [column_of[name] for name in cfg.ordering]
    results: list[tuple[list[int], list[float]]] = [([], []) for _ in db.column_names]
    for position, child in enumerate(order_idx):
        predecessors = order_idx[:position]
        results[child] = _greedy_family(
            db.rows, db.ordinalities, child, predecessors, cfg.max_parents
        )
    return results


def k2(db: CaseDatabase, cfg: LearnerConfig) -> BeliefNetwork:
    """Induce a network structure from ``db`` under ``cfg``.

    Every arc in the result points from an earlier to a later variable in
    ``cfg.ordering``. The returned network carries smoothed CPT estimates so
    it is itself a valid, sampleable network; on an empty database it has no
    arcs and uniform CPTs.
    """
    searches = _search_structures(db, cfg)
    column_of = {name: i for i, name in enumerate(db.column_names)}
    order_idx = tuple(column_of[name] for name in cfg.ordering)
    skeleton = BeliefNetwork(
        name=_induced_name(db),
        nodes=tuple(
            NodeSpec(
                name=name,
                ordinality=db.ordinalities[i],
                parents=tuple(sorted(searches[i][0])),
            )
            for i, name in enumerate(db.column_names)
        ),
        ordering=order_idx,
    )
    return estimate_cpts(db, skeleton)


def _induced_name(db: CaseDatabase) -> str:
    return f"induced-from-{db.source_network}" if db.source_network else "induced"


def estimate_cpts(db: CaseDatabase, structure: BeliefNetwork) -> BeliefNetwork:
    """Fill CPTs with Laplace posterior means, (N_jk + 1) / (N_j + r).

    Rows with no observed cases come out uniform. Structure nodes are matched
    to database columns by name and must agree on ordinality; counting honors
    each node's declared parent order so CPT rows land in that node's own
    leftmost-slowest layout.
    """
    column_of = {name: i for i, name in enumerate(db.column_names)}
    nodes = []
    for node in structure.nodes:
        if node.name not in column_of:
            raise ValueError(f"structure node {node.name} has no database column")
        col = column_of[node.name]
        r = node.ordinality
        if db.ordinalities[col] != r:
            raise ValueError(
                f"node {node.name}: ordinality {r} != "
                f"database column's {db.ordinalities[col]}"
            )
        parent_cols = tuple(column_of[structure.nodes[p].name] for p in node.parents)
        q = math.prod(db.ordinalities[c] for c in parent_cols)
        counts = np.zeros((q, r), dtype=np.int64)
        codes = _parent_codes(db.rows, db.ordinalities, parent_cols)
        np.add.at(counts, (codes, db.rows[:, col]), 1)
        cpt = (counts + 1.0) / (counts.sum(axis=1, keepdims=True) + r)
        nodes.append(replace(node, cpt=cpt))
    return BeliefNetwork(name=structure.name, nodes=tuple(nodes), ordering=structure.ordering)
