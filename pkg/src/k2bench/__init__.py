"""Workbench for benchmarking greedy Bayesian-network structure recovery.

The library covers the full loop: random gold-standard network generation,
forward (logic) sampling of case databases, greedy ordering-constrained
structure induction, edge-recovery metrics with descriptive statistics,
nonlinear accuracy-model fits, and exact inference over a bundled meta-model
that predicts recovery accuracy from dataset attributes.
"""

from .evaluation import (
    ARC_BINS,
    CASE_BINS,
    CASE_BINS_MERGED,
    M1_BINS,
    M2_BINS,
    BinScheme,
    EvaluationRecord,
    compare,
    describe,
    records_from_csv,
    records_to_csv,
    stratify,
)
from .generate import GenerationConfig, generate_network, generate_structure, parameterize
from .k2 import FamilyCounts, LearnerConfig, estimate_cpts, family_counts, family_log_score, k2
from .metamodel import discretize_record, load_metamodel, predict, refit_metamodel
from .netio import NetworkFormatError, load_network, network_from_json, network_to_json, save_network
from .network import (
    BeliefNetwork,
    NodeSpec,
    ValidationReport,
    ZeroProbabilityEvidence,
    infer,
    joint_probability,
    parent_config_index,
    validate,
)
from .pipeline import ExperimentConfig, ExperimentReport, run_experiment
from .regression import RegressionError, RegressionFit, fit_m1, fit_m2, fit_records
from .sampling import CaseDatabase, draw_case_count, load_cases, sample, save_cases

__version__ = "0.1.0"

__all__ = [
    "ARC_BINS",
    "CASE_BINS",
    "CASE_BINS_MERGED",
    "M1_BINS",
    "M2_BINS",
    "BeliefNetwork",
    "BinScheme",
    "CaseDatabase",
    "EvaluationRecord",
    "ExperimentConfig",
    "ExperimentReport",
    "FamilyCounts",
    "GenerationConfig",
    "LearnerConfig",
    "NetworkFormatError",
    "NodeSpec",
    "RegressionError",
    "RegressionFit",
    "ValidationReport",
    "ZeroProbabilityEvidence",
    "compare",
    "describe",
    "discretize_record",
    "draw_case_count",
    "estimate_cpts",
    "family_counts",
    "family_log_score",
    "fit_m1",
    "fit_m2",
    "fit_records",
    "generate_network",
    "generate_structure",
    "infer",
    "joint_probability",
    "k2",
    "load_cases",
    "load_metamodel",
    "load_network",
    "network_from_json",
    "network_to_json",
    "parameterize",
    "parent_config_index",
    "predict",
    "records_from_csv",
    "records_to_csv",
    "refit_metamodel",
    "run_experiment",
    "sample",
    "save_cases",
    "save_network",
    "stratify",
    "validate",
]
