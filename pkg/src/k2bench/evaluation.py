"""Edge-recovery metrics, discretization schemes, and descriptive summaries.

For a gold network G and induced network I over the same variables:

    m1 = |arcs(G) intersect arcs(I)| / |arcs(G)|   (recovered fraction)
    m2 = |arcs(I) minus arcs(G)|     / |arcs(G)|   (extraneous ratio)

Arcs are directed name pairs. A gold network with no arcs leaves both
denominators undefined; such records are flagged degenerate, carry the
conventions m1 = 1 (iff the induced network is also empty, else 0) and
m2 = 0, and are excluded from every aggregate.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left
from collections.abc import Sequence
from dataclasses import dataclass

from .network import BeliefNetwork


@dataclass(frozen=True)
class EvaluationRecord:
    """Attributes and metrics for one gold/induced pair."""

    variables: int
    arcs_gs: int
    ordinality: int
    cases: int
    m1: float
    m2: float
    degenerate: bool
    pair: int = 0


@dataclass(frozen=True)
class BinScheme:
    """Labelled partition of a metric's range.

    ``upper_bounds`` are inclusive upper edges for all but the last bin,
    which is unbounded; ``labels`` has one more entry than ``upper_bounds``.
    """

    metric: str
    upper_bounds: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.upper_bounds) + 1:
            raise ValueError(f"{self.metric}: need one more label than bound")
        if list(self.upper_bounds) != sorted(self.upper_bounds):
            raise ValueError(f"{self.metric}: bounds must be increasing")

    def index(self, value: float) -> int:
        if value < 0:
            raise ValueError(f"{self.metric}: negative value {value}")
        return bisect_left(self.upper_bounds, value)

    def label(self, value: float) -> str:
        return self.labels[self.index(value)]


ARC_BINS = BinScheme("arcs", (20, 60, 100), ("0-20", "21-60", "61-100", ">100"))
CASE_BINS = BinScheme(
    "cases",
    (200, 500, 1000, 1500),
    ("0-200", "201-500", "501-1000", "1001-1500", ">1500"),
)
# Four-bin variant used by the bundled accuracy meta-model, whose CASES
# variable has four values; the two lowest bins above are merged (the exact
# coarsening used for that model is not published, this one is an assumption).
CASE_BINS_MERGED = BinScheme(
    "cases", (500, 1000, 1500), ("0-500", "501-1000", "1001-1500", ">1500")
)
M1_BINS = BinScheme(
    "m1",
    (0.50, 0.70, 0.90, 0.95, 0.98),
    ("0-50%", "51-70%", "71-90%", "91-95%", "96-98%", ">98%"),
)
M2_BINS = BinScheme(
    "m2",
    (0.02, 0.05, 0.10, 0.30, 0.50),
    ("0-2%", "3-5%", "6-10%", "11-30%", "31-50%", ">50%"),
)


def compare(
    gold: BeliefNetwork,
    induced: BeliefNetwork,
    cases: int = 0,
    pair: int = 0,
) -> EvaluationRecord:
    """Score an induced network against its gold standard.

    Requires identical node-name sets. ``cases`` is carried through as an
    attribute of the pair (the metrics themselves do not depend on it).
    """
    gold_names = {n.name for n in gold.nodes}
    induced_names = {n.name for n in induced.nodes}
    if gold_names != induced_names:
        raise ValueError(
            "node sets differ: "
            f"only in gold {sorted(gold_names - induced_names)}, "
            f"only in induced {sorted(induced_names - gold_names)}"
        )
    ordinalities = {n.ordinality for n in gold.nodes}
    if len(ordinalities) != 1:
        raise ValueError("gold network mixes ordinalities; records carry a single value")

    gold_arcs = gold.arc_names()
    induced_arcs = induced.arc_names()
    if gold_arcs:
        m1 = len(gold_arcs & induced_arcs) / len(gold_arcs)
        m2 = len(induced_arcs - gold_arcs) / len(gold_arcs)
        degenerate = False
    else:
        m1 = 1.0 if not induced_arcs else 0.0
        m2 = 0.0
        degenerate = True
    return EvaluationRecord(
        variables=gold.num_nodes,
        arcs_gs=len(gold_arcs),
        ordinality=next(iter(ordinalities)),
        cases=cases,
        m1=m1,
        m2=m2,
        degenerate=degenerate,
        pair=pair,
    )


def stratify(records: Sequence[EvaluationRecord]) -> dict[str, list[EvaluationRecord]]:
    """Non-degenerate records pooled and split by ordinality."""
    usable = [r for r in records if not r.degenerate]
    return {
        "all": usable,
        "ord2": [r for r in usable if r.ordinality == 2],
        "ord3": [r for r in usable if r.ordinality == 3],
    }


def describe(records: Sequence[EvaluationRecord]) -> dict:
    """Means, sample standard deviations, and binned frequency tables.

    Attribute tables cover every record; metric tables cover only the
    non-degenerate ones. Requires at least one non-degenerate record.
    Frequencies are percentages.
    """
    records = list(records)
    usable = [r for r in records if not r.degenerate]
    if not usable:
        raise ValueError("describe needs at least one non-degenerate record")

    def freq(values, keys):
        n = len(values)
        return {k: 100.0 * sum(v == k for v in values) / n for k in keys}

    def bin_freq(values, scheme: BinScheme):
        n = len(values)
        out = {label: 0.0 for label in scheme.labels}
        for v in values:
            out[scheme.label(v)] += 100.0 / n
        return out

    variables = [r.variables for r in records]
    arcs = [r.arcs_gs for r in records]
    case_counts = [r.cases for r in records]
    m1 = [r.m1 for r in usable]
    m2 = [r.m2 for r in usable]

    return {
        "n_records": len(records),
        "n_degenerate": len(records) - len(usable),
        "variables_freq": freq(variables, sorted(set(variables))),
        "ordinality_freq": freq([r.ordinality for r in records], (2, 3)),
        "arcs_mean": _mean(arcs),
        "arcs_sd": _sample_sd(arcs),
        "cases_mean": _mean(case_counts),
        "cases_sd": _sample_sd(case_counts),
        "arcs_bins": bin_freq(arcs, ARC_BINS),
        "cases_bins": bin_freq(case_counts, CASE_BINS),
        "m1_mean": _mean(m1),
        "m1_sd": _sample_sd(m1),
        "m2_mean": _mean(m2),
        "m2_sd": _sample_sd(m2),
        "m1_bins": bin_freq(m1, M1_BINS),
        "m2_bins": bin_freq(m2, M2_BINS),
    }


def _mean(xs) -> float:
    return sum(xs) / len(xs)


def _sample_sd(xs) -> float:
    # ddof=1; defined as 0 for a single observation.
    n = len(xs)
    if n < 2:
        return 0.0
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))


def render_summary(summary: dict) -> str:
    """Aligned text rendering of the describe() tables."""
    lines = []
    lines.append(f"pairs: {summary['n_records']}  (degenerate, excluded from metrics: {summary['n_degenerate']})")
    lines.append("")
    lines.append("data attributes")
    lines.append(f"  {'variables':<12}{'value':>10}{'freq %':>10}")
    for value, pct in summary["variables_freq"].items():
        lines.append(f"  {'':<12}{value:>10}{pct:>10.1f}")
    lines.append(f"  {'ordinality':<12}{'value':>10}{'freq %':>10}")
    for value, pct in summary["ordinality_freq"].items():
        lines.append(f"  {'':<12}{value:>10}{pct:>10.1f}")
    lines.append(f"  {'arcs':<12}mean {summary['arcs_mean']:>9.2f}  s.d. {summary['arcs_sd']:.2f}")
    lines.append(f"  {'cases':<12}mean {summary['cases_mean']:>9.2f}  s.d. {summary['cases_sd']:.2f}")
    lines.append("")
    lines.append("discretized data attributes (freq %)")
    for key, scheme in (("arcs_bins", ARC_BINS), ("cases_bins", CASE_BINS)):
        lines.append(f"  {scheme.metric}")
        for label in scheme.labels:
            lines.append(f"    {label:<12}{summary[key][label]:>8.1f}")
    lines.append("")
    lines.append("evaluation metrics (percent)")
    lines.append(f"  M1  mean {100 * summary['m1_mean']:6.1f}  s.d. {100 * summary['m1_sd']:.1f}")
    lines.append(f"  M2  mean {100 * summary['m2_mean']:6.1f}  s.d. {100 * summary['m2_sd']:.1f}")
    lines.append("")
    lines.append("discretized evaluation metrics (freq %)")
    for key, scheme in (("m1_bins", M1_BINS), ("m2_bins", M2_BINS)):
        lines.append(f"  {scheme.metric.upper()}")
        for label in scheme.labels:
            lines.append(f"    {label:<12}{summary[key][label]:>8.1f}")
    return "\n".join(lines) + "\n"


def summary_to_csv(summary: dict) -> str:
    """Flat CSV rendering: section,item,value."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["section", "item", "value"])
    writer.writerow(["counts", "records", summary["n_records"]])
    writer.writerow(["counts", "degenerate", summary["n_degenerate"]])
    for value, pct in summary["variables_freq"].items():
        writer.writerow(["variables_freq", value, repr(pct)])
    for value, pct in summary["ordinality_freq"].items():
        writer.writerow(["ordinality_freq", value, repr(pct)])
    for key in ("arcs_mean", "arcs_sd", "cases_mean", "cases_sd",
                "m1_mean", "m1_sd", "m2_mean", "m2_sd"):
        writer.writerow(["moments", key, repr(summary[key])])
    for key in ("arcs_bins", "cases_bins", "m1_bins", "m2_bins"):
        for label, pct in summary[key].items():
            writer.writerow([key, label, repr(pct)])
    return out.getvalue()


def records_to_csv(records: Sequence[EvaluationRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["pair", "variables", "arcs_gs", "ordinality", "cases", "m1", "m2", "degenerate"])
    for r in records:
        writer.writerow(
            [r.pair, r.variables, r.arcs_gs, r.ordinality, r.cases, repr(r.m1), repr(r.m2), int(r.degenerate)]
        )
    return out.getvalue()


def records_from_csv(text: str) -> list[EvaluationRecord]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append(
            EvaluationRecord(
                pair=int(row["pair"]),
                variables=int(row["variables"]),
                arcs_gs=int(row["arcs_gs"]),
                ordinality=int(row["ordinality"]),
                cases=int(row["cases"]),
                m1=float(row["m1"]),
                m2=float(row["m2"]),
                degenerate=bool(int(row["degenerate"])),
            )
        )
    return records
