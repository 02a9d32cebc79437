"""
Language model CLI commands
"""

from pathlib import Path

import typer
from rich.table import Table

from ..core.exceptions import LanguageModelError
from ..corpus.manifest import Corpus
from ..corpus.schemas import Split
from ..lm.arpa import load_lm, save_lm
from ..lm.ngram import train_ngram
from ..lm.text import TextMode, lm_tokens
from .common import console

lm_app = typer.Typer(help="N-gram language model commands")


def _texts(manifests: list[Path], mode: TextMode, split: Split) -> list[str]:
    texts: list[str] = []
    for manifest in manifests:
        corpus = Corpus.load(manifest)
        for u in corpus.split(split, annotated_only=mode is not TextMode.PLAIN):
            texts.append(u.plain if mode is TextMode.PLAIN else u.tagged)
    return texts


@lm_app.command("train")
def train_lm(
    manifests: list[Path] = typer.Option(
        ..., "--manifest", help="Manifest(s); repeat to add augmented records"
    ),
    out: Path = typer.Option(..., "--out", help="ARPA output file"),
    order: int = typer.Option(3, "--order", min=1),
    tagged: bool = typer.Option(True, "--tagged/--plain", help="Keep entity markers as tokens"),
    starred: bool = typer.Option(False, "--starred", help="Star-transform tagged texts"),
) -> None:
    """Train a Witten-Bell n-gram model on train-split transcripts."""
    if starred and not tagged:
        raise typer.BadParameter("--starred needs --tagged", param_hint="--starred")
    mode = TextMode.STARRED if starred else TextMode.TAGGED if tagged else TextMode.PLAIN
    texts = _texts(manifests, mode, Split.TRAIN)
    if not texts:
        raise LanguageModelError("no train transcripts in the given manifests")
    lm = train_ngram([lm_tokens(t, mode) for t in texts], order, mode)
    save_lm(lm, out)
    console.print(f"[green]{lm!r} ({mode.value}) written to {out}[/green]")


@lm_app.command("score")
def score_lm(
    lm_path: Path = typer.Option(..., "--lm", help="ARPA file"),
    manifest: Path = typer.Option(..., "--manifest"),
    split: Split = typer.Option(Split.DEV, "--split"),
) -> None:
    """Perplexity of a split's transcripts under the model."""
    lm = load_lm(lm_path)
    sentences = [lm_tokens(t, lm.text_mode) for t in _texts([manifest], lm.text_mode, split)]
    if not sentences:
        raise LanguageModelError(f"no {split.value} transcripts in {manifest}")

    table = Table(title="Language model")
    table.add_column("Model", style="cyan")
    table.add_column("Mode", style="cyan")
    table.add_column("Split", style="cyan")
    table.add_column("Sentences", justify="right", style="magenta")
    table.add_column("Perplexity", justify="right", style="magenta")
    table.add_row(
        str(lm_path),
        lm.text_mode.value,
        split.value,
        str(len(sentences)),
        f"{lm.perplexity(sentences):.2f}",
    )
    console.print(table)
