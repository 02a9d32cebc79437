"""Text tables for evaluation reports (System / Corpus / Detection / P / R / F)."""

from collections.abc import Sequence
from typing import NamedTuple

from rich.table import Table

from .scoring import EvalReport, ScoreMode


class ReportRow(NamedTuple):
    system: str
    corpus: str
    report: EvalReport


def report_table(rows: Sequence[ReportRow], modes: Sequence[ScoreMode] = tuple(ScoreMode)) -> Table:
    table = Table(title="Named entity detection")
    table.add_column("System", style="cyan")
    table.add_column("Corpus", style="cyan")
    table.add_column("Detection")
    for header in ("P", "R", "F"):
        table.add_column(header, justify="right", style="magenta")
    for row in rows:
        for mode in modes:
            s = row.report.scores(mode)
            table.add_row(
                row.system,
                row.corpus,
                "cat+value" if mode is ScoreMode.CATVALUE else "category",
                f"{s.precision:.2f}",
                f"{s.recall:.2f}",
                f"{s.f:.2f}",
            )
    return table


def breakdown_table(report: EvalReport, mode: ScoreMode = ScoreMode.CATEGORY) -> Table:
    table = Table(title=f"Per-category ({mode.value})")
    table.add_column("Category", style="cyan")
    for header in ("Ref", "Hyp", "Hits", "P", "R", "F"):
        table.add_column(header, justify="right")
    for category, breakdown in report.per_category.items():
        s = breakdown.category if mode is ScoreMode.CATEGORY else breakdown.catvalue
        table.add_row(
            category.value,
            str(s.ref_total),
            str(s.hyp_total),
            str(s.hits),
            f"{s.precision:.2f}",
            f"{s.recall:.2f}",
            f"{s.f:.2f}",
        )
    return table


def error_rate_table(report: EvalReport) -> Table | None:
    if report.wer is None or report.cer is None:
        return None
    table = Table(title="Transcription errors")
    table.add_column("Metric", style="cyan")
    for header in ("Rate", "Sub", "Ins", "Del", "N"):
        table.add_column(header, justify="right")
    for name, rate in (("WER", report.wer), ("CER", report.cer)):
        table.add_row(
            name,
            f"{rate.rate:.2%}",
            str(rate.substitutions),
            str(rate.insertions),
            str(rate.deletions),
            str(rate.ref_length),
        )
    return table
