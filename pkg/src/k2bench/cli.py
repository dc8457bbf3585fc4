"""Command-line workbench.

Subcommands cover the whole experiment loop plus one-off use of each stage:

    generate          draw one random gold-standard network
    sample            simulate a case database from a network file
    learn             induce a network from a case database
    evaluate          score an induced network against its gold standard
    fit               fit the accuracy models to an evaluation records CSV
    predict           query the bundled (or a refit) accuracy meta-model
    run-experiment    the full batch loop with manifest and reports
    refit-metamodel   rebuild the meta-model from an evaluation records CSV

Every subcommand accepts --seed; run-experiment refuses to run without one.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import metamodel, pipeline
from .evaluation import compare, records_from_csv, records_to_csv
from .generate import GenerationConfig, generate_network
from .k2 import LearnerConfig, k2
from .netio import NetworkFormatError, load_network, save_network
from .regression import RegressionError, fit_records, regression_to_csv, render_regression
from .sampling import draw_case_count, load_cases, sample, save_cases


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_tuple(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k2bench",
        description="Belief-network structure-recovery workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw one random gold-standard network")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (omit for OS entropy)")
    p.add_argument("--variables", type=_int_tuple, default=(2, 10, 20, 30, 40, 50),
                   help="comma-separated node-count choices (one drawn uniformly)")
    p.add_argument("--max-in-degree", type=int, default=4)
    p.add_argument("--ordinalities", type=_int_tuple, default=(2, 3),
                   help="comma-separated ordinality choices (one drawn per network)")
    p.add_argument("--name", default=None, help="network label (default: output stem)")
    p.add_argument("-o", "--output", required=True, type=Path)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="simulate cases from a network by forward sampling")
    p.add_argument("--network", required=True, type=Path)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cases", type=int, help="exact number of cases")
    group.add_argument("--draw-cases", action="store_true",
                       help="draw the case count uniformly from --bounds first")
    p.add_argument("--bounds", type=_int_tuple, default=(0, 2000),
                   help="inclusive case-count bounds for --draw-cases")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True, type=Path)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("learn", help="induce a network from a case database")
    p.add_argument("--cases", required=True, type=Path, help="case CSV file")
    p.add_argument("--ordering", type=_name_tuple, default=None,
                   help="comma-separated variable ordering (default: column order)")
    p.add_argument("--max-parents", type=int, default=10)
    p.add_argument("--seed", type=int, default=None,
                   help="accepted for uniformity; learning is deterministic")
    p.add_argument("-o", "--output", required=True, type=Path)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("evaluate", help="score an induced network against a gold standard")
    p.add_argument("--gold", required=True, type=Path)
    p.add_argument("--induced", required=True, type=Path)
    p.add_argument("--cases-file", type=Path, default=None,
                   help="case CSV whose row count fills the record's cases attribute")
    p.add_argument("--cases", type=int, default=0, help="case count attribute (alternative)")
    p.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    p.add_argument("-o", "--output", type=Path, default=None,
                   help="write a one-row records CSV here instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("fit", help="fit the accuracy models to evaluation records")
    p.add_argument("--records", required=True, type=Path, help="records CSV")
    p.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    p.add_argument("-o", "--outdir", type=Path, default=None,
                   help="also write regression.txt and regression.csv here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="query the accuracy meta-model")
    p.add_argument("--target", required=True, help="variable to predict, e.g. M1")
    p.add_argument("--evidence", action="append", default=[], metavar="NAME=VALUE",
                   help="evidence assignment; labels or published value numbers")
    p.add_argument("--model", type=Path, default=None,
                   help="network file to query (default: bundled meta-model)")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("run-experiment", help="run the full batch experiment")
    p.add_argument("--seed", type=int, required=True,
                   help="root seed; required, the run must be reproducible")
    p.add_argument("--pairs", type=int, default=67)
    p.add_argument("--outdir", required=True, type=Path)
    p.add_argument("--variables", type=_int_tuple, default=(2, 10, 20, 30, 40, 50))
    p.add_argument("--max-in-degree", type=int, default=4)
    p.add_argument("--ordinalities", type=_int_tuple, default=(2, 3))
    p.add_argument("--case-bounds", type=_int_tuple, default=(0, 2000))
    p.add_argument("--max-parents", type=int, default=10)
    p.set_defaults(func=cmd_run_experiment)

    p = sub.add_parser("refit-metamodel", help="rebuild the accuracy meta-model from records")
    p.add_argument("--records", required=True, type=Path)
    p.add_argument("--max-parents", type=int, default=10)
    p.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    p.add_argument("-o", "--output", required=True, type=Path)
    p.set_defaults(func=cmd_refit)

    return parser


def cmd_generate(args) -> int:
    cfg = GenerationConfig(
        variable_count_choices=args.variables,
        max_in_degree=args.max_in_degree,
        ordinality_choices=args.ordinalities,
        seed=args.seed,
    )
    name = args.name if args.name is not None else args.output.stem
    save_network(generate_network(cfg, name=name), args.output)
    return 0


def cmd_sample(args) -> int:
    net = load_network(args.network)
    rng = np.random.default_rng(args.seed)
    n = args.cases if args.cases is not None else draw_case_count(rng, tuple(args.bounds))
    save_cases(sample(net, n, rng, seed=args.seed), args.output)
    return 0


def cmd_learn(args) -> int:
    db = load_cases(args.cases)
    ordering = args.ordering if args.ordering else db.column_names
    net = k2(db, LearnerConfig(ordering=ordering, max_parents=args.max_parents))
    save_network(net, args.output)
    return 0


def cmd_evaluate(args) -> int:
    gold = load_network(args.gold)
    induced = load_network(args.induced)
    cases = args.cases
    if args.cases_file is not None:
        cases = load_cases(args.cases_file).num_cases
    record = compare(gold, induced, cases=cases)
    text = records_to_csv([record])
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_fit(args) -> int:
    records = records_from_csv(args.records.read_text(encoding="utf-8"))
    fits, failures = fit_records(records)
    if args.outdir is not None:
        args.outdir.mkdir(parents=True, exist_ok=True)
        (args.outdir / "regression.txt").write_text(render_regression(fits, failures), encoding="utf-8")
        (args.outdir / "regression.csv").write_text(regression_to_csv(fits, failures), encoding="utf-8")
    sys.stdout.write(render_regression(fits, failures))
    return 0


def cmd_predict(args) -> int:
    evidence = {}
    for item in args.evidence:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"evidence must look like NAME=VALUE, got {item!r}")
        evidence[name.strip()] = value.strip()
    net = load_network(args.model) if args.model is not None else None
    distribution = metamodel.predict(args.target, evidence, net=net)
    if args.json:
        sys.stdout.write(json.dumps(
            {"target": args.target, "evidence": evidence,
             "distribution": [{"value": lb, "p": p} for lb, p in distribution]},
            indent=2) + "\n")
    else:
        for label, p in distribution:
            sys.stdout.write(f"{label:<12} {p:.6f}\n")
    return 0


def cmd_run_experiment(args) -> int:
    cfg = pipeline.ExperimentConfig(
        seed=args.seed,
        output_dir=args.outdir,
        pair_count=args.pairs,
        generation=GenerationConfig(
            variable_count_choices=args.variables,
            max_in_degree=args.max_in_degree,
            ordinality_choices=args.ordinalities,
        ),
        case_bounds=tuple(args.case_bounds),
        max_parents=args.max_parents,
    )
    report = pipeline.run_experiment(cfg)
    usable = [r for r in report.records if not r.degenerate]
    if usable:
        mean_m1 = sum(r.m1 for r in usable) / len(usable)
        mean_m2 = sum(r.m2 for r in usable) / len(usable)
        print(f"pairs: {len(report.records)} ok, {len(report.failures)} failed; "
              f"mean M1 {mean_m1:.3f}, mean M2 {mean_m2:.3f}")
    else:
        print(f"pairs: {len(report.records)} ok, {len(report.failures)} failed")
    print(f"artifacts in {report.output_dir}")
    return 0 if report.ok else 1


def cmd_refit(args) -> int:
    records = records_from_csv(args.records.read_text(encoding="utf-8"))
    net = metamodel.refit_metamodel(records, max_parents=args.max_parents)
    save_network(net, args.output)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RegressionError, NetworkFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
