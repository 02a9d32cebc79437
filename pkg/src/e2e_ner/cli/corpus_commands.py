"""
Corpus CLI commands

Synthetic corpus generation, rule-set derivation and corpus statistics.
"""

from collections import Counter
from pathlib import Path

import typer
from rich.table import Table

from ..alphabet.codec import RepairPolicy, parse
from ..alphabet.tags import Category
from ..augment.rules import RuleSet
from ..core.exceptions import MissingInputError
from ..corpus.generator import generate_corpus
from ..corpus.manifest import Corpus, write_corpus
from ..corpus.schemas import CorpusSpec, Split
from .common import console, load_or_default, state

corpus_app = typer.Typer(help="Synthetic corpus commands")


def _counts_table(corpus: Corpus) -> Table:
    table = Table(title="Corpus")
    table.add_column("Split", style="cyan")
    table.add_column("Utterances", justify="right", style="magenta")
    table.add_column("Annotated", justify="right", style="magenta")
    for category in Category:
        table.add_column(category.value, justify="right")
    for split in Split:
        utterances = corpus.split(split)
        entities: Counter[Category] = Counter()
        for u in utterances:
            if u.annotated:
                entities.update(e.category for e in parse(u.tagged, RepairPolicy.STRICT).entities)
        table.add_row(
            split.value,
            str(len(utterances)),
            str(sum(u.annotated for u in utterances)),
            *(str(entities[c]) for c in Category),
        )
    return table


@corpus_app.command("gen")
def generate(
    ctx: typer.Context,
    out: Path = typer.Option(..., "--out", help="Corpus output directory"),
    spec_path: Path | None = typer.Option(None, "--spec", help="CorpusSpec JSON"),
    train: int | None = typer.Option(None, "--train", min=0, help="Override train count"),
    dev: int | None = typer.Option(None, "--dev", min=0, help="Override dev count"),
    test: int | None = typer.Option(None, "--test", min=0, help="Override test count"),
    asr_only: int | None = typer.Option(
        None, "--asr-only", min=0, help="Override the count of unannotated train utterances"
    ),
) -> None:
    """Generate a synthetic corpus (manifest, features, spec, alphabet)."""
    st = state(ctx)
    spec = load_or_default(CorpusSpec, spec_path)
    overrides = {
        k: v
        for k, v in {"train": train, "dev": dev, "test": test, "asr_only": asr_only}.items()
        if v is not None
    }
    spec = CorpusSpec.model_validate(
        spec.model_dump()
        | {
            "seed": st.seed_or(spec.seed),
            "counts": spec.counts.model_dump() | overrides,
        }
    )
    corpus = write_corpus(out, spec, generate_corpus(spec, st.threads))
    console.print(_counts_table(corpus))
    console.print(f"[green]Corpus written to {out}[/green]")


@corpus_app.command("rules")
def derive_rules(
    ctx: typer.Context,
    out: Path = typer.Option(..., "--out", help="RuleSet JSON output"),
    spec_path: Path | None = typer.Option(None, "--spec", help="CorpusSpec JSON"),
    corpus_dir: Path | None = typer.Option(
        None, "--corpus", help="Corpus directory (its stored spec is used)"
    ),
    coverage: float = typer.Option(0.7, "--coverage", min=0.0, max=1.0),
) -> None:
    """Derive a partial-coverage annotator rule set from a corpus spec."""
    if corpus_dir is not None:
        spec = Corpus.load(corpus_dir).spec
        if spec is None:
            raise MissingInputError(str(corpus_dir / "corpus_spec.json"), what="corpus spec")
    else:
        spec = load_or_default(CorpusSpec, spec_path)
    rules = RuleSet.from_corpus_spec(spec, coverage, state(ctx).seed_or())
    rules.save(out)

    table = Table(title="Rule set")
    table.add_column("Category", style="cyan")
    table.add_column("Phrases", justify="right", style="magenta")
    for category, phrases in rules.gazetteers.items():
        table.add_row(category.value, str(len(phrases)))
    console.print(table)


@corpus_app.command("stats")
def stats(manifest: Path = typer.Option(..., "--manifest", help="Manifest or corpus dir")) -> None:
    """Utterance and entity counts per split."""
    console.print(_counts_table(Corpus.load(manifest)))
