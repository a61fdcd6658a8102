from .analysis import Bucket, analysis_report, attention_dump, bucket_analysis, quantile_edges
from .evaluation import (
    Evaluator, MetricsReport, Scores, SplitInput, SplitMetrics, count_matches, f1_at_5, f1_at_k, f1_at_m, split_eval,
)

__all__ = [
    "analysis_report",
    "attention_dump",
    "Bucket",
    "bucket_analysis",
    "count_matches",
    "Evaluator",
    "f1_at_5",
    "f1_at_k",
    "f1_at_m",
    "MetricsReport",
    "quantile_edges",
    "Scores",
    "split_eval",
    "SplitInput",
    "SplitMetrics"
    ]
