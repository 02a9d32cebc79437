"""
Transcript-level CLI commands: scoring, augmentation and format transforms.
"""

from pathlib import Path

import typer

from ..alphabet.codec import (
    RepairPolicy,
    canonicalize,
    star_transform,
    strip_markers,
    tagged_from_text,
)
from ..augment.annotator import augment_corpus
from ..augment.rules import RuleSet
from ..core.exceptions import TranscriptError
from ..corpus.manifest import Corpus
from ..corpus.schemas import Split
from ..evaluation.report import ReportRow, breakdown_table, error_rate_table, report_table
from ..evaluation.scoring import ScoreMode, score
from ..services.decoding_service import read_hypotheses
from .common import console, state


def eval_command(
    ref: Path = typer.Option(..., "--ref", help="Reference manifest or corpus dir"),
    hyp: Path = typer.Option(..., "--hyp", help="n-best JSONL or tagged manifest"),
    mode: ScoreMode = typer.Option(ScoreMode.CATEGORY, "--mode"),
    with_wer: bool = typer.Option(False, "--wer", help="Also report WER/CER"),
    split: Split | None = typer.Option(None, "--split", help="Score one split only"),
    out: Path | None = typer.Option(None, "--out", help="EvalReport JSON output"),
) -> None:
    """Score tagged hypotheses against reference transcripts."""
    corpus = Corpus.load(ref)
    utterances = corpus.split(split) if split is not None else list(corpus)
    refs = {u.id: u.tagged for u in utterances}
    report = score(refs, read_hypotheses(hyp), error_rates=with_wer)
    if out is not None:
        report.save(out)

    row = ReportRow(hyp.stem, split.value if split else "all", report)
    console.print(report_table([row], [mode]))
    console.print(breakdown_table(report, mode))
    errors = error_rate_table(report)
    if errors is not None:
        console.print(errors)
    console.print(f"value accuracy: {report.value_accuracy:.2f}")


def augment_command(
    ctx: typer.Context,
    manifest: Path = typer.Option(..., "--manifest", help="Corpus manifest or directory"),
    out: Path = typer.Option(..., "--out", help="Augmented manifest output"),
    rules_path: Path | None = typer.Option(
        None, "--rules", help="RuleSet JSON (default: derived from the corpus spec)"
    ),
    coverage: float = typer.Option(0.7, "--coverage", min=0.0, max=1.0),
) -> None:
    """Annotate the unannotated train utterances with the rule-based tagger."""
    corpus = Corpus.load(manifest)
    if rules_path is not None:
        rules = RuleSet.load(rules_path)
    else:
        spec = corpus.spec
        if spec is None:
            raise typer.BadParameter(
                "corpus has no stored spec; pass --rules", param_hint="--rules"
            )
        rules = RuleSet.from_corpus_spec(spec, coverage, state(ctx).seed_or())
    augmented = augment_corpus(corpus, rules, out)
    tagged = sum(1 for u in augmented if u.tagged != u.plain)
    console.print(
        f"[green]{len(augmented)} utterances augmented ({tagged} with entities) -> {out}[/green]"
    )


def transform_command(
    src: Path = typer.Option(..., "--in", help="Input text file, one transcript per line"),
    out: Path = typer.Option(..., "--out", help="Output text file"),
    encode: bool = typer.Option(False, "--encode", help="Canonical tagged form"),
    star: bool = typer.Option(False, "--star", help="Starred form"),
    plain: bool = typer.Option(False, "--plain", help="Remove every marker"),
) -> None:
    """Rewrite tagged transcripts line by line."""
    if sum((encode, star, plain)) != 1:
        raise typer.BadParameter("give exactly one of --encode, --star, --plain")

    def convert(line: str) -> str:
        if encode:
            return canonicalize(line, RepairPolicy.STRICT)
        if star:
            return star_transform(tagged_from_text(line)).text
        return strip_markers(line)

    lines = src.read_text(encoding="utf-8").splitlines()
    converted = []
    for lineno, line in enumerate(lines, start=1):
        try:
            converted.append(convert(line))
        except TranscriptError as e:
            raise TranscriptError(f"{src}:{lineno}: {e.message}", e.details)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join(c + "\n" for c in converted), encoding="utf-8")
    console.print(f"[green]{len(converted)} lines written to {out}[/green]")
