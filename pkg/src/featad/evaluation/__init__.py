"""Window-level AUC and cross-series comparison statistics."""

from featad.evaluation.cd_diagram import cliques, method_label, render_cd_diagram
from featad.evaluation.metrics import auc
from featad.evaluation.records import (
    RESULT_COLUMNS,
    ResultRecord,
    SkipRecord,
    read_results_csv,
    write_results_csv,
)
from featad.evaluation.stats import (
    friedman_test,
    nemenyi_cd,
    rank_methods,
    rank_rows,
    wilcoxon_signed_rank,
)

__all__ = [
    "RESULT_COLUMNS",
    "ResultRecord",
    "SkipRecord",
    "auc",
    "cliques",
    "friedman_test",
    "method_label",
    "nemenyi_cd",
    "rank_methods",
    "rank_rows",
    "read_results_csv",
    "render_cd_diagram",
    "wilcoxon_signed_rank",
    "write_results_csv",
]
