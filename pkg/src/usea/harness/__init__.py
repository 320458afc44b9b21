from .demos import case_study_1d, offspring_distribution_demo, two_cluster_populations
from .experiment import (
    AlgorithmSpec,
    CellStats,
    ExperimentResult,
    ExperimentSpec,
    StatsSummary,
    load_summary_csv,
    load_traces_json,
    run_experiment,
    save_summary_csv,
    save_traces_json,
    stats_from_traces,
)
from .stats import improvement_metric, mean_rank, wilcoxon_rank_sum

__all__ = [
    "AlgorithmSpec",
    "CellStats",
    "ExperimentResult",
    "ExperimentSpec",
    "StatsSummary",
    "case_study_1d",
    "improvement_metric",
    "load_summary_csv",
    "load_traces_json",
    "mean_rank",
    "offspring_distribution_demo",
    "run_experiment",
    "save_summary_csv",
    "save_traces_json",
    "stats_from_traces",
    "two_cluster_populations",
    "wilcoxon_rank_sum",
]
