"""Forward simulation of complete case databases (logic sampling).

Each case is drawn by visiting nodes in ancestral order and sampling every
node from the CPT row selected by its already-sampled parent values. There is
no evidence and therefore no rejection; databases never contain missing
values.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .network import BeliefNetwork, validate


@dataclass(frozen=True, eq=False)
class CaseDatabase:
    """Rectangular table of complete discrete observations.

    ``rows[c, i]`` is the value index of column i in case c. ``ordinalities``
    records each column's value count; a column may legitimately never show
    its highest value in a finite sample, so this cannot be inferred from the
    data alone.
    """

    column_names: tuple[str, ...]
    ordinalities: tuple[int, ...]
    rows: np.ndarray
    source_network: str = ""
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "ordinalities", tuple(int(r) for r in self.ordinalities))
        rows = np.array(self.rows, dtype=np.int64).reshape(-1, len(self.column_names))
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        if len(self.ordinalities) != len(self.column_names):
            raise ValueError("ordinalities and column_names differ in length")
        if rows.size:
            if rows.min() < 0:
                raise ValueError("case values must be non-negative")
            if np.any(rows.max(axis=0) >= np.array(self.ordinalities)):
                raise ValueError("case value exceeds its column ordinality")

    @property
    def num_cases(self) -> int:
        return self.rows.shape[0]


def draw_case_count(rng: np.random.Generator, bounds: tuple[int, int] = (0, 2000)) -> int:
    """Uniform integer from the inclusive range ``bounds``."""
    lo, hi = bounds
    if lo < 0 or hi < lo:
        raise ValueError(f"bad case-count bounds {bounds!r}")
    return int(rng.integers(lo, hi + 1))


def sample(
    net: BeliefNetwork,
    n: int,
    rng: np.random.Generator,
    seed: int | None = None,
) -> CaseDatabase:
    """Draw ``n`` complete cases from ``net`` by logic sampling.

    One uniform variate is consumed per node per case, cases outermost and
    nodes in ancestral order within a case (a single (n, nodes) uniform
    matrix). Each value is found by inverting the cumulative CPT row, so
    zero-probability values are never produced. ``seed`` is carried as
    metadata only.
    """
    if n < 0:
        raise ValueError("case count must be >= 0")
    report = validate(net)
    if not report.ok:
        raise ValueError("refusing to sample an invalid network: " + "; ".join(report.violations))

    k = net.num_nodes
    u = rng.random((n, k))
    values = np.zeros((n, k), dtype=np.int64)
    for position, i in enumerate(net.ordering):
        node = net.nodes[i]
        codes = np.zeros(n, dtype=np.int64)
        for p in node.parents:
            codes = codes * net.nodes[p].ordinality + values[:, p]
        cumulative = np.cumsum(node.cpt[codes], axis=1)
        cumulative /= cumulative[:, -1:]
        values[:, i] = (u[:, position, None] < cumulative).argmax(axis=1)

    return CaseDatabase(
        column_names=tuple(node.name for node in net.nodes),
        ordinalities=tuple(node.ordinality for node in net.nodes),
        rows=values,
        source_network=net.name,
        seed=seed,
    )


def cases_to_csv(db: CaseDatabase) -> str:
    """Render as CSV: `#` comment header, column names, then value rows."""
    out = io.StringIO()
    if db.source_network:
        out.write(f"# source_network: {db.source_network}\n")
    if db.seed is not None:
        out.write(f"# seed: {db.seed}\n")
    out.write("# ordinalities: " + ",".join(str(r) for r in db.ordinalities) + "\n")
    out.write(",".join(db.column_names) + "\n")
    for row in db.rows:
        out.write(",".join(str(int(v)) for v in row) + "\n")
    return out.getvalue()


def cases_from_csv(text: str) -> CaseDatabase:
    source = ""
    seed = None
    ordinalities: tuple[int, ...] | None = None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    body: list[str] = []
    for ln in lines:
        if ln.startswith("#"):
            key, _, value = ln[1:].partition(":")
            key = key.strip()
            value = value.strip()
            if key == "source_network":
                source = value
            elif key == "seed":
                seed = int(value)
            elif key == "ordinalities":
                ordinalities = tuple(int(x) for x in value.split(","))
        else:
            body.append(ln)
    if not body:
        raise ValueError("case file has no column header")
    columns = tuple(name.strip() for name in body[0].split(","))
    rows = np.array(
        [[int(v) for v in ln.split(",")] for ln in body[1:]], dtype=np.int64
    ).reshape(-1, len(columns))
    if ordinalities is None:
        # Fallback for hand-made files: at least binary, at least what is seen.
        observed = rows.max(axis=0) + 1 if rows.size else np.ones(len(columns), dtype=np.int64)
        ordinalities = tuple(int(max(2, r)) for r in observed)
    return CaseDatabase(
        column_names=columns,
        ordinalities=ordinalities,
        rows=rows,
        source_network=source,
        seed=seed,
    )


def save_cases(db: CaseDatabase, path: str | Path) -> None:
    Path(path).write_text(cases_to_csv(db), encoding="utf-8")


def load_cases(path: str | Path) -> CaseDatabase:
    return cases_from_csv(Path(path).read_text(encoding="utf-8"))
