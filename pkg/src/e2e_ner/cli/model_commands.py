"""
Acoustic model CLI commands: training, decoding, the pipeline baseline and
the comparison experiment.
"""

import json
from pathlib import Path

import typer
from rich.table import Table

from ..augment.annotator import annotate
from ..augment.rules import RuleSet
from ..core.exceptions import NetError
from ..core.logging_config import get_logger
from ..corpus.manifest import Corpus
from ..corpus.schemas import Split
from ..decoder.config import DecoderConfig
from ..evaluation.report import report_table
from ..lm.arpa import load_lm
from ..metrics.collector import TrainingStatsCollector
from ..net.checkpoint import load_checkpoint, save_checkpoint
from ..net.config import ExtensionMode, Phase
from ..net.model import AcousticModel, extend_output_layer, init_net
from ..net.trainer import asr_error_rates, train
from ..services.decoding_service import DecodingService, write_nbest
from ..services.experiment_service import ExperimentRunner
from ..services.pipeline_service import PipelineService
from ..services.run_config import RunConfig
from .common import console, load_or_default, sidecar, state

logger = get_logger(__name__)

_OPTIMIZATION_FIELDS = (
    "learning_rate",
    "momentum",
    "clip_norm",
    "epochs",
    "batch_size",
    "gain_range",
    "tempo_range",
    "seed",
)


def _epochs_table(collector: TrainingStatsCollector) -> Table:
    table = Table(title=f"Training ({collector.run_name})")
    table.add_column("Epoch", justify="right", style="cyan")
    table.add_column("Loss", justify="right", style="magenta")
    table.add_column("Skipped", justify="right")
    table.add_column("Dev CER", justify="right")
    table.add_column("Dev F", justify="right")
    for s in collector.epochs:
        table.add_row(
            str(s.epoch),
            f"{s.loss:.4f}",
            str(s.skipped),
            "-" if s.dev_cer is None else f"{s.dev_cer:.2%}",
            "-" if s.dev_f is None else f"{s.dev_f:.2f}",
        )
    return table


def _summary_line(collector: TrainingStatsCollector, phase: Phase) -> str:
    summary = collector.get_summary()
    line = (
        f"{summary['epochs']} epoch(s) in {summary['elapsed_seconds']:.1f}s, "
        f"{summary['total_skipped']} skipped sample(s)"
    )
    losses = collector.losses(phase.value)
    if len(losses) > 1:
        line += f", loss {losses[0]:.4f} -> {losses[-1]:.4f}"
    return line


def _ner_model(
    base: AcousticModel, starred: bool, mode: ExtensionMode, corpus: Corpus
) -> AcousticModel:
    wanted = base.alphabet.extended(star_enabled=starred, tag_set_enabled=True)
    if base.alphabet == wanted:
        return base
    if base.alphabet.tag_set_enabled:
        raise NetError(
            "checkpoint alphabet cannot be extended to the requested one",
            {"checkpoint_star": base.alphabet.star_enabled, "starred": starred},
        )
    model = extend_output_layer(base, wanted, mode)
    dev = corpus.split(Split.DEV)
    if dev:
        cer, _ = asr_error_rates(model, corpus, dev)
        logger.info("transfer_check", dev_cer=cer.rate)
    return model


def train_command(
    ctx: typer.Context,
    manifest: Path = typer.Option(..., "--manifest", help="Corpus manifest or directory"),
    out: Path = typer.Option(..., "--out", help="Checkpoint output"),
    phase: Phase = typer.Option(Phase.ASR, "--phase"),
    starred: bool = typer.Option(False, "--starred", help="Star-transformed ner targets"),
    augment: Path | None = typer.Option(None, "--augment", help="Augmented manifest"),
    augment_weight: float = typer.Option(
        1.0, "--augment-weight", min=0.0, help="Weight of augmented vs gold samples"
    ),
    from_ckpt: Path | None = typer.Option(None, "--from", help="Starting checkpoint"),
    reinit: ExtensionMode = typer.Option(ExtensionMode.WARM, "--reinit"),
    config_path: Path | None = typer.Option(None, "--config", help="RunConfig JSON"),
    epochs: int | None = typer.Option(None, "--epochs", min=0, help="Override epochs"),
) -> None:
    """Train one phase of the two-phase schedule."""
    st = state(ctx)
    if phase is Phase.NER and from_ckpt is None:
        raise typer.BadParameter("--phase ner requires --from CKPT", param_hint="--from")
    if phase is Phase.ASR and (starred or augment is not None):
        raise typer.BadParameter("--starred/--augment apply to --phase ner only")

    config = load_or_default(RunConfig, config_path).resolved(st.seed)
    phase_epochs = config.asr_epochs if phase is Phase.ASR else config.ner_epochs
    config = config.model_copy(
        update={
            "net": config.net.model_copy(
                update={"epochs": phase_epochs if epochs is None else epochs}
            ),
            "augment_weight": augment_weight,
            "extension": reinit,
        }
    )
    corpus = Corpus.load(manifest)

    if from_ckpt is None:
        alphabet = corpus.alphabet
        spec = corpus.spec
        feature_dim = spec.feature_dim if spec is not None else config.net.feature_dim
        model = init_net(
            config.net.model_copy(
                update={"output_size": alphabet.size, "feature_dim": feature_dim}
            ),
            alphabet,
        )
        net_cfg = model.config
    else:
        model = load_checkpoint(from_ckpt)
        if phase is Phase.NER:
            model = _ner_model(model, starred, reinit, corpus)
        # architecture comes from the checkpoint, optimization from the run config
        net_cfg = model.config.model_copy(
            update={f: getattr(config.net, f) for f in _OPTIMIZATION_FIELDS}
        )

    collector = TrainingStatsCollector(f"{phase.value}:{out.stem}", sidecar(out, ".stats.jsonl"))
    train(
        model,
        corpus,
        phase,
        starred=starred,
        augment=Corpus.load(augment) if augment is not None else None,
        augment_weight=augment_weight,
        cfg=net_cfg,
        threads=st.threads,
        collector=collector,
    )
    save_checkpoint(model, out)
    config.model_copy(update={"net": model.config}).save(sidecar(out, ".run_config.json"))
    console.print(_epochs_table(collector))
    console.print(_summary_line(collector, phase))
    console.print(f"[green]Checkpoint written to {out}[/green]")


def _decoder_config(
    config_path: Path | None,
    alpha: float | None,
    beta: float | None,
    beam: int | None,
    n_best: int | None,
    prune: float | None,
) -> DecoderConfig:
    cfg = load_or_default(RunConfig, config_path).decoder
    updates = {
        k: v
        for k, v in {
            "alpha": alpha,
            "beta": beta,
            "beam_width": beam,
            "n_best": n_best,
            "prune_threshold": prune,
        }.items()
        if v is not None
    }
    return DecoderConfig.model_validate(cfg.model_dump() | updates)


def decode_command(
    ctx: typer.Context,
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint"),
    manifest: Path = typer.Option(..., "--manifest", help="Corpus manifest or directory"),
    out: Path = typer.Option(..., "--out", help="n-best JSONL output"),
    lm_path: Path | None = typer.Option(None, "--lm", help="ARPA language model"),
    alpha: float | None = typer.Option(None, "--alpha"),
    beta: float | None = typer.Option(None, "--beta"),
    beam: int | None = typer.Option(None, "--beam", min=1),
    n_best: int | None = typer.Option(None, "--n-best", min=1),
    prune: float | None = typer.Option(None, "--prune", max=0.0),
    split: Split | None = typer.Option(None, "--split", help="Decode one split only"),
    mask_markers: bool = typer.Option(
        False, "--mask-markers", help="Forbid the star and entity markers"
    ),
    config_path: Path | None = typer.Option(None, "--config", help="RunConfig JSON"),
) -> None:
    """Beam-search decode a manifest into n-best JSONL."""
    model = load_checkpoint(ckpt)
    lm = load_lm(lm_path) if lm_path is not None else None
    cfg = _decoder_config(config_path, alpha, beta, beam, n_best, prune)
    if mask_markers:
        cfg = cfg.model_copy(update={"suppress_ids": model.alphabet.non_base_ids})

    corpus = Corpus.load(manifest)
    utterances = corpus.split(split) if split is not None else list(corpus)
    results = DecodingService(model, lm, cfg, state(ctx).threads).decode(corpus, utterances)
    write_nbest(out, results)
    cfg.save(sidecar(out, ".decoder.json"))
    console.print(f"[green]{len(results)} utterances decoded to {out}[/green]")


def pipeline_command(
    ctx: typer.Context,
    ckpt: Path = typer.Option(..., "--ckpt", help="ASR checkpoint"),
    manifest: Path = typer.Option(..., "--manifest", help="Corpus manifest or directory"),
    rules_path: Path = typer.Option(..., "--rules", help="RuleSet JSON"),
    out: Path = typer.Option(..., "--out", help="Tagged hypotheses JSONL"),
    lm_path: Path | None = typer.Option(None, "--lm", help="Plain-text ARPA model"),
    alpha: float | None = typer.Option(None, "--alpha"),
    beta: float | None = typer.Option(None, "--beta"),
    beam: int | None = typer.Option(None, "--beam", min=1),
    split: Split | None = typer.Option(None, "--split"),
    config_path: Path | None = typer.Option(None, "--config", help="RunConfig JSON"),
) -> None:
    """ASR decode with markers masked, then rule-based annotation."""
    model = load_checkpoint(ckpt)
    lm = load_lm(lm_path) if lm_path is not None else None
    cfg = _decoder_config(config_path, alpha, beta, beam, None, None)
    rules = RuleSet.load(rules_path)

    corpus = Corpus.load(manifest)
    utterances = corpus.split(split) if split is not None else list(corpus)
    service = PipelineService(model, rules, lm, cfg, state(ctx).threads)
    transcripts = service.transcribe(corpus, utterances)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        for utt_id, plain in transcripts.items():
            record = {"id": utt_id, "plain": plain, "tagged": annotate(plain, rules).text}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    cfg.save(sidecar(out, ".decoder.json"))
    console.print(f"[green]{len(transcripts)} pipeline hypotheses written to {out}[/green]")


def experiment_command(
    ctx: typer.Context,
    out: Path | None = typer.Option(
        None, "--out", help="Experiment output directory (default: E2E_NER_OUTPUT_DIR)"
    ),
    config_path: Path | None = typer.Option(None, "--config", help="RunConfig JSON"),
    corpus_dir: Path | None = typer.Option(
        None, "--corpus", help="Existing corpus (default: generate from the config)"
    ),
    systems: str | None = typer.Option(
        None, "--systems", help="Comma-separated subset of E2E,E2E*,E2E+,E2E+*,Pip"
    ),
    asr_epochs: int | None = typer.Option(None, "--asr-epochs", min=0),
    ner_epochs: int | None = typer.Option(None, "--ner-epochs", min=0),
) -> None:
    """Run the comparison grid and print the detection table."""
    st = state(ctx)
    config = load_or_default(RunConfig, config_path)
    out = out or Path(config.output_dir)
    updates: dict = {"output_dir": str(out)}
    if systems is not None:
        updates["systems"] = [s.strip() for s in systems.split(",") if s.strip()]
    if asr_epochs is not None:
        updates["asr_epochs"] = asr_epochs
    if ner_epochs is not None:
        updates["ner_epochs"] = ner_epochs
    config = RunConfig.model_validate(config.model_dump() | updates).resolved(st.seed)

    runner = ExperimentRunner(config, out, st.threads)
    result = runner.run(corpus_dir)
    console.print(report_table(runner.reports))
    if result.asr_dev_cer is not None:
        console.print(f"ASR dev CER: {result.asr_dev_cer:.2%}")
    for system, cer in result.transfer_cer.items():
        console.print(f"{system}: dev CER after output extension {cer:.2%}")
    console.print(f"[green]Results written to {out / 'results.json'}[/green]")
