from .alignment import AlignedPair, Op, align_entities
from .error_rates import EditCounts, ErrorRate, cer, edit_counts, wer
from .report import ReportRow, breakdown_table, error_rate_table, report_table
from .scoring import (
    CategoryBreakdown,
    DetectionScores,
    EvalReport,
    ScoreMode,
    f_measure,
    score,
)

__all__ = [
    # Alignment
    "Op",
    "AlignedPair",
    "align_entities",
    # Scoring
    "ScoreMode",
    "DetectionScores",
    "CategoryBreakdown",
    "EvalReport",
    "f_measure",
    "score",
    # Error rates
    "EditCounts",
    "ErrorRate",
    "edit_counts",
    "wer",
    "cer",
    # Tables
    "ReportRow",
    "report_table",
    "breakdown_table",
    "error_rate_table",
]
