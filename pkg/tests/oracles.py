"""Independent reference implementations used only by the tests.

Everything here recomputes results through a different code path than the
library: the joint table is assembled by axis broadcasting instead of
per-assignment products, the family score by exact big-integer factorial
ratios, and curve fits by brute-force grid search.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial, log

import numpy as np


def full_joint_table(net) -> np.ndarray:
    """Joint distribution as an ndarray with one axis per node."""
    shape = tuple(node.ordinality for node in net.nodes)
    n = len(shape)
    table = np.ones(shape)
    for i, node in enumerate(net.nodes):
        dims = [net.nodes[p].ordinality for p in node.parents] + [node.ordinality]
        factor = np.asarray(node.cpt).reshape(dims)
        axes = list(node.parents) + [i]
        arranged = np.transpose(factor, np.argsort(axes))
        involved = sorted(axes)
        expanded = arranged.reshape(
            [shape[a] if a in involved else 1 for a in range(n)]
        )
        table = table * expanded
    return table


def infer_from_table(net, target: int, evidence: dict[int, int]) -> np.ndarray:
    """Posterior of ``target`` by slicing and summing the full joint table."""
    table = full_joint_table(net)
    indexer = tuple(
        evidence[i] if i in evidence else slice(None) for i in range(len(net.nodes))
    )
    sub = table[indexer]
    kept = [i for i in range(len(net.nodes)) if i not in evidence]
    sum_axes = tuple(pos for pos, i in enumerate(kept) if i != target)
    dist = sub.sum(axis=sum_axes) if sum_axes else sub
    return dist / dist.sum()


def exact_family_score(db, child: int, parents) -> float:
    """log g(child, parents) via exact rational factorial arithmetic."""
    r = db.ordinalities[child]
    group_counts: Counter = Counter()
    cell_counts: Counter = Counter()
    for row in db.rows:
        key = tuple(int(row[p]) for p in parents)
        group_counts[key] += 1
        cell_counts[key + (int(row[child]),)] += 1
    g = Fraction(1)
    for n_j in group_counts.values():
        g *= Fraction(factorial(r - 1), factorial(n_j + r - 1))
    for n_jk in cell_counts.values():
        g *= factorial(n_jk)
    return float(log(g)) if g != 1 else 0.0


def grid_search_m1(cases, values, grid=None) -> float:
    """C1 minimizing the M1-model RSS over a dense grid."""
    if grid is None:
        grid = np.arange(0.001, 1.0 + 1e-12, 1e-4)
    cases = np.asarray(cases, dtype=float)
    values = np.asarray(values, dtype=float)
    predictions = 1.0 - np.exp(-np.outer(grid, np.sqrt(cases)))
    rss = ((values[None, :] - predictions) ** 2).sum(axis=1)
    return float(grid[np.argmin(rss)])


def grid_search_m2(cases, values, c2_grid=None, c3_grid=None) -> tuple[float, float]:
    """(C2, C3) minimizing the M2-model RSS over a dense 2-D grid."""
    if c2_grid is None:
        c2_grid = np.arange(0.05, 3.0 + 1e-12, 0.005)
    if c3_grid is None:
        c3_grid = np.arange(0.005, 0.5 + 1e-12, 0.001)
    cases = np.asarray(cases, dtype=float)
    values = np.asarray(values, dtype=float)
    decay = np.exp(-np.outer(c3_grid, np.sqrt(cases)))          # (n3, n)
    best = (np.inf, 0.0, 0.0)
    for i2, c2 in enumerate(c2_grid):
        rss = ((values[None, :] - c2 * decay) ** 2).sum(axis=1)  # (n3,)
        j = int(np.argmin(rss))
        if rss[j] < best[0]:
            best = (float(rss[j]), float(c2), float(c3_grid[j]))
    return best[1], best[2]
