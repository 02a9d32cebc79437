"""
Comparison grid: end-to-end systems against the two-stage pipeline.

    E2E     ner phase on the tagged transcripts
    E2E*    ner phase on star-transformed transcripts
    E2E+    E2E plus automatically annotated ASR-only utterances
    E2E+*   both
    Pip     ASR model, masked decode, then rule-based annotation

All end-to-end systems start from the same asr-phase model. Each is scored on
dev and test in both detection modes.
"""

import time
from pathlib import Path
from typing import NamedTuple

from pydantic import Field

from ..alphabet.alphabet import Alphabet
from ..augment.annotator import augment_corpus
from ..augment.rules import RuleSet
from ..core.base import BaseDocument, BaseSchema
from ..core.config import settings
from ..core.exceptions import EvaluationError
from ..core.logging_config import get_logger
from ..corpus.generator import generate_corpus
from ..corpus.manifest import MANIFEST_NAME, Corpus, write_corpus
from ..corpus.schemas import Split
from ..evaluation.report import ReportRow
from ..evaluation.scoring import DetectionScores, score
from ..lm.ngram import NgramLM, train_ngram
from ..lm.text import TextMode, lm_tokens
from ..metrics.collector import TrainingStatsCollector
from ..net.checkpoint import save_checkpoint
from ..net.config import Phase
from ..net.model import AcousticModel, extend_output_layer, init_net
from ..net.trainer import asr_error_rates, train
from .decoding_service import DecodingService
from .pipeline_service import PipelineService
from .run_config import RunConfig

logger = get_logger(__name__)

PIPELINE = "Pip"
EVAL_SPLITS = (Split.DEV, Split.TEST)


class SystemSpec(NamedTuple):
    name: str
    starred: bool
    augmented: bool

    @property
    def slug(self) -> str:
        return "e2e" + ("_plus" if self.augmented else "") + ("_star" if self.starred else "")


END_TO_END: dict[str, SystemSpec] = {
    s.name: s
    for s in (
        SystemSpec("E2E", False, False),
        SystemSpec("E2E*", True, False),
        SystemSpec("E2E+", False, True),
        SystemSpec("E2E+*", True, True),
    )
}


class ExperimentRow(BaseSchema):
    system: str
    corpus: str
    category: DetectionScores
    catvalue: DetectionScores
    value_accuracy: float


class ExperimentResult(BaseDocument):
    rows: list[ExperimentRow] = Field(default_factory=list)
    asr_dev_cer: float | None = None
    # dev CER right after the output layer is extended, markers masked
    transfer_cer: dict[str, float] = Field(default_factory=dict)
    seconds: float = 0.0


def lm_from_texts(texts: list[str], order: int, mode: TextMode) -> NgramLM:
    return train_ngram([lm_tokens(t, mode) for t in texts], order, mode)


class ExperimentRunner:
    """Runs the grid selected by ``config.systems`` under ``out_dir``."""

    def __init__(self, config: RunConfig, out_dir: str | Path, threads: int | None = None):
        self.config = config
        self.out_dir = Path(out_dir)
        self.threads = threads or settings.effective_threads
        self.reports: list[ReportRow] = []

    def _corpus(self, corpus_dir: str | Path | None) -> Corpus:
        if corpus_dir is not None:
            return Corpus.load(corpus_dir)
        generated = generate_corpus(self.config.corpus, self.threads)
        return write_corpus(self.out_dir / "corpus", self.config.corpus, generated)

    def _rules(self, corpus: Corpus) -> RuleSet:
        if self.config.rules is not None:
            return RuleSet.load(self.config.rules)
        spec = corpus.spec or self.config.corpus
        return RuleSet.from_corpus_spec(spec, self.config.rule_coverage, self.config.seed)

    def _train_asr(self, corpus: Corpus, alphabet: Alphabet) -> AcousticModel:
        cfg = self.config.net.model_copy(
            update={"output_size": alphabet.size, "epochs": self.config.asr_epochs}
        )
        model = init_net(cfg, alphabet)
        collector = TrainingStatsCollector("asr", self.out_dir / "asr.stats.jsonl")
        train(model, corpus, Phase.ASR, threads=self.threads, collector=collector)
        save_checkpoint(model, self.out_dir / "asr.ckpt")
        return model

    def _score(
        self, system: str, corpus: Corpus, hyps_by_split: dict[Split, dict[str, str]]
    ) -> None:
        for split, hyps in hyps_by_split.items():
            refs = {u.id: u.tagged for u in corpus.split(split)}
            report = score(refs, hyps)
            self.reports.append(ReportRow(system, split.value, report))

    def _run_end_to_end(
        self,
        system: SystemSpec,
        corpus: Corpus,
        asr_model: AcousticModel,
        augmented: Corpus | None,
    ) -> float:
        cfg = self.config
        alphabet = asr_model.alphabet.extended(star_enabled=system.starred, tag_set_enabled=True)
        model = extend_output_layer(asr_model, alphabet, cfg.extension)
        transfer, _ = asr_error_rates(model, corpus, corpus.split(Split.DEV))

        collector = TrainingStatsCollector(system.name, self.out_dir / f"{system.slug}.stats.jsonl")
        net_cfg = cfg.net.model_copy(update={"epochs": cfg.ner_epochs})
        train(
            model,
            corpus,
            Phase.NER,
            starred=system.starred,
            augment=augmented if system.augmented else None,
            augment_weight=cfg.augment_weight,
            cfg=net_cfg,
            threads=self.threads,
            collector=collector,
        )
        save_checkpoint(model, self.out_dir / f"{system.slug}.ckpt")

        mode = TextMode.STARRED if system.starred else TextMode.TAGGED
        texts = [u.tagged for u in corpus.split(Split.TRAIN, annotated_only=True)]
        if system.augmented and augmented is not None:
            texts += [u.tagged for u in augmented.split(Split.TRAIN)]
        lm = lm_from_texts(texts, cfg.lm_order, mode)

        decoder = DecodingService(model, lm, cfg.decoder, self.threads)
        self._score(
            system.name,
            corpus,
            {split: decoder.best(corpus, corpus.split(split)) for split in EVAL_SPLITS},
        )
        return transfer.rate

    def _run_pipeline(self, corpus: Corpus, asr_model: AcousticModel, rules: RuleSet) -> None:
        texts = [u.plain for u in corpus.split(Split.TRAIN)]
        lm = lm_from_texts(texts, self.config.lm_order, TextMode.PLAIN)
        pipeline = PipelineService(asr_model, rules, lm, self.config.decoder, self.threads)
        self._score(
            PIPELINE,
            corpus,
            {split: pipeline.run(corpus, corpus.split(split)) for split in EVAL_SPLITS},
        )

    def run(self, corpus_dir: str | Path | None = None) -> ExperimentResult:
        started = time.time()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.config.write_resolved(self.out_dir)
        self.reports = []

        corpus = self._corpus(corpus_dir)
        asr_model = self._train_asr(corpus, corpus.alphabet)
        asr_cer, _ = asr_error_rates(asr_model, corpus, corpus.split(Split.DEV))
        logger.info("asr_phase_complete", dev_cer=asr_cer.rate)

        rules = self._rules(corpus)
        augmented = None
        if any(END_TO_END[s].augmented for s in self.config.systems if s in END_TO_END):
            augmented = augment_corpus(corpus, rules, self.out_dir / "augmented" / MANIFEST_NAME)

        transfer: dict[str, float] = {}
        for name in self.config.systems:
            logger.info("system_started", system=name)
            if name == PIPELINE:
                self._run_pipeline(corpus, asr_model, rules)
            else:
                transfer[name] = self._run_end_to_end(
                    END_TO_END[name], corpus, asr_model, augmented
                )

        result = ExperimentResult(
            rows=[_row(r) for r in self.reports],
            asr_dev_cer=asr_cer.rate,
            transfer_cer=transfer,
            seconds=time.time() - started,
        )
        check_detection_order(result)
        result.save(self.out_dir / "results.json")
        logger.info("experiment_complete", rows=len(result.rows), seconds=result.seconds)
        return result


def _row(row: ReportRow) -> ExperimentRow:
    return ExperimentRow(
        system=row.system,
        corpus=row.corpus,
        category=row.report.category,
        catvalue=row.report.catvalue,
        value_accuracy=row.report.value_accuracy,
    )


def check_detection_order(result: ExperimentResult) -> None:
    """Cat+value F never exceeds category F."""
    for row in result.rows:
        if row.catvalue.f > row.category.f + 1e-12:
            raise EvaluationError(
                f"{row.system}/{row.corpus}: cat+value F {row.catvalue.f:.4f} "
                f"exceeds category F {row.category.f:.4f}"
            )
