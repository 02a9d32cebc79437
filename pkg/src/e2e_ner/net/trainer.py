"""
CTC training for both phases of the multi-task schedule.

Phase ``asr`` trains on the plain transcripts of every train utterance; phase
``ner`` trains on the tagged transcripts of annotated utterances (optionally
star-transformed) plus any augmented records. Features are re-perturbed every
epoch. Utterances run forward/backward concurrently; their gradients are
summed in batch order so results do not depend on the thread count.
"""

import math
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from ..alphabet.alphabet import Alphabet
from ..alphabet.codec import star_transform, strip_markers, tagged_from_text
from ..core.config import settings
from ..core.exceptions import AlphabetError, NetError, TrainingDivergedError
from ..core.logging_config import get_logger
from ..corpus.features import perturb
from ..corpus.manifest import Corpus
from ..corpus.schemas import Split, Utterance
from ..ctc.decode import greedy_decode
from ..evaluation.error_rates import ErrorRate, cer, wer
from ..evaluation.scoring import score
from ..metrics.collector import EpochStats, TrainingStatsCollector
from .config import NetConfig, Phase
from .layers import Params
from .model import AcousticModel
from .optim import MomentumSGD, global_norm

logger = get_logger(__name__)

# architecture fields a training config may not change
_ARCHITECTURE = (
    "feature_dim",
    "n_conv",
    "conv_channels",
    "conv_kernel",
    "conv_stride",
    "n_recurrent",
    "hidden_size",
)


class TrainingSample(NamedTuple):
    id: str
    features: np.ndarray
    target: list[int]
    weight: float = 1.0


class TrainResult(NamedTuple):
    model: AcousticModel
    history: list[EpochStats]


def target_text(utterance: Utterance, phase: Phase, starred: bool) -> str:
    if phase is Phase.ASR:
        return utterance.plain
    if starred:
        return star_transform(tagged_from_text(utterance.tagged)).text
    return utterance.tagged


def _encode_target(alphabet: Alphabet, text: str, utterance_id: str) -> list[int]:
    try:
        return alphabet.to_ids(text)
    except AlphabetError as e:
        raise NetError(
            f"utterance '{utterance_id}': target does not fit the alphabet ({e.message})",
            {"utterance_id": utterance_id},
        )


def build_samples(
    corpus: Corpus,
    alphabet: Alphabet,
    phase: Phase | str,
    starred: bool = False,
    augment: Corpus | None = None,
    augment_weight: float = 1.0,
) -> list[TrainingSample]:
    """Training samples of one phase, with targets already mapped to ids."""
    phase = Phase(phase)
    if phase is Phase.NER and not alphabet.tag_set_enabled:
        raise NetError("ner phase needs an alphabet with entity markers")
    if starred and not alphabet.star_enabled:
        raise NetError("starred training needs an alphabet with the star symbol")

    sources: list[tuple[Corpus, Utterance, float]] = [
        (corpus, u, 1.0) for u in corpus.split(Split.TRAIN, annotated_only=phase is Phase.NER)
    ]
    if augment is not None and phase is Phase.NER:
        sources += [(augment, u, augment_weight) for u in augment.split(Split.TRAIN)]

    samples = []
    for owner, utterance, weight in sources:
        text = target_text(utterance, phase, starred)
        samples.append(
            TrainingSample(
                utterance.id,
                owner.features(utterance),
                _encode_target(alphabet, text, utterance.id),
                weight,
            )
        )
    if not samples:
        raise NetError(f"no training utterances for phase '{phase.value}'")
    return samples


def apply_training_settings(model: AcousticModel, cfg: NetConfig) -> None:
    """Adopt optimization settings from ``cfg``; architecture must agree."""
    for name in _ARCHITECTURE:
        if getattr(cfg, name) != getattr(model.config, name):
            raise NetError(
                f"config field '{name}' = {getattr(cfg, name)} does not match "
                f"the model ({getattr(model.config, name)})"
            )
    model.config = cfg.model_copy(update={"output_size": model.config.output_size})


def transcribe(model: AcousticModel, features: np.ndarray, mask_non_base: bool) -> str:
    """Greedy transcription; ``mask_non_base`` forbids the star and markers."""
    suppress = model.alphabet.non_base_ids if mask_non_base else ()
    return model.alphabet.from_ids(greedy_decode(model.forward(features), suppress))


def asr_error_rates(
    model: AcousticModel,
    corpus: Corpus,
    utterances: Sequence[Utterance],
    pool: ThreadPoolExecutor | None = None,
) -> tuple[ErrorRate, ErrorRate]:
    """(CER, WER) of greedy transcripts with markers masked."""

    def run(u: Utterance) -> str:
        return transcribe(model, corpus.features(u), True)

    hyps = list(pool.map(run, utterances)) if pool else [run(u) for u in utterances]
    refs = [u.plain for u in utterances]
    return cer(refs, hyps), wer(refs, hyps)


def ner_dev_f(
    model: AcousticModel,
    corpus: Corpus,
    utterances: Sequence[Utterance],
    pool: ThreadPoolExecutor | None = None,
) -> tuple[float, float]:
    """(category F, CER of the marker-stripped output) from greedy decoding."""

    def run(u: Utterance) -> str:
        return transcribe(model, corpus.features(u), False)

    hyps = list(pool.map(run, utterances)) if pool else [run(u) for u in utterances]
    report = score(
        {u.id: u.tagged for u in utterances},
        {u.id: h for u, h in zip(utterances, hyps)},
    )
    char_errors = cer([u.plain for u in utterances], [strip_markers(h) for h in hyps])
    return report.category.f, char_errors.rate


def _accumulate(
    batch: list[tuple[TrainingSample, Params | None]], params: Params
) -> Params | None:
    total_weight = sum(s.weight for s, g in batch if g is not None)
    if total_weight == 0:
        return None
    summed = {k: np.zeros_like(v) for k, v in params.items()}
    for sample, grads in batch:
        if grads is None:
            continue
        for k in summed:
            summed[k] += sample.weight * grads[k]
    return {k: v / total_weight for k, v in summed.items()}


def train(
    model: AcousticModel,
    corpus: Corpus,
    phase: Phase | str,
    starred: bool = False,
    augment: Corpus | None = None,
    augment_weight: float = 1.0,
    cfg: NetConfig | None = None,
    threads: int | None = None,
    collector: TrainingStatsCollector | None = None,
    evaluate_dev: bool = True,
) -> TrainResult:
    """Mini-batch momentum SGD on CTC loss; the model is updated in place."""
    phase = Phase(phase)
    if cfg is not None:
        apply_training_settings(model, cfg)
    cfg = model.config
    threads = threads or settings.effective_threads

    samples = build_samples(corpus, model.alphabet, phase, starred, augment, augment_weight)
    if phase is Phase.ASR and not model.normalizer_fitted:
        model.fit_normalizer([s.features for s in samples])
    dev = corpus.split(Split.DEV, annotated_only=phase is Phase.NER) if evaluate_dev else []
    model.phase = phase

    optimizer = MomentumSGD(model.params, cfg.learning_rate, cfg.momentum, cfg.clip_norm)
    history: list[EpochStats] = []
    step = 0
    logger.info(
        "training_started",
        phase=phase.value,
        starred=starred,
        samples=len(samples),
        epochs=cfg.epochs,
        threads=threads,
        model=repr(model),
    )

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for epoch in range(cfg.epochs):
            started = time.time()
            order = np.random.default_rng([cfg.seed, 7, epoch]).permutation(len(samples))

            def run_one(index: int, epoch: int = epoch):
                sample = samples[index]
                feats = sample.features
                if cfg.perturbs:
                    feats = perturb(
                        feats, cfg.gain_range, cfg.tempo_range, [cfg.seed, epoch, index]
                    )
                return model.forward_backward(feats, sample.target)

            losses: list[float] = []
            skipped = 0
            norm = 0.0
            for lo in range(0, len(order), cfg.batch_size):
                indices = [int(i) for i in order[lo : lo + cfg.batch_size]]
                outcomes = list(pool.map(run_one, indices))
                batch = []
                for index, (result, grads) in zip(indices, outcomes):
                    sample = samples[index]
                    if not result.feasible:
                        skipped += 1
                        if collector is not None:
                            collector.record_skip(sample.id)
                        logger.warning(
                            "sample_skipped",
                            utterance_id=sample.id,
                            reason="infeasible target",
                            target_length=len(sample.target),
                        )
                        continue
                    sample_norm = global_norm(grads) if grads is not None else math.nan
                    if not (math.isfinite(result.loss) and math.isfinite(sample_norm)):
                        raise TrainingDivergedError(
                            sample.id, epoch, step, result.loss, cfg.learning_rate, sample_norm
                        )
                    losses.append(result.loss)
                    batch.append((sample, grads))
                mean_grads = _accumulate(batch, model.params)
                if mean_grads is not None:
                    norm = optimizer.step(mean_grads)
                step += 1

            stats = {
                "phase": phase.value,
                "epoch": epoch,
                "loss": float(np.mean(losses)) if losses else math.inf,
                "samples": len(losses),
                "skipped": skipped,
                "grad_norm": norm,
            }
            if dev:
                if phase is Phase.ASR:
                    dev_cer, dev_wer = asr_error_rates(model, corpus, dev, pool)
                    stats |= {"dev_cer": dev_cer.rate, "dev_wer": dev_wer.rate}
                else:
                    dev_f, dev_cer_rate = ner_dev_f(model, corpus, dev, pool)
                    stats |= {"dev_f": dev_f, "dev_cer": dev_cer_rate}
            epoch_stats = EpochStats(**stats, seconds=time.time() - started)
            history.append(epoch_stats)
            model.history.append(epoch_stats.model_dump(mode="json"))
            model.epoch += 1
            if collector is not None:
                collector.record_epoch(epoch_stats)
            logger.info("epoch_complete", **epoch_stats.model_dump(exclude_none=True))

    return TrainResult(model, history)


def overfit_steps(
    model: AcousticModel, features: np.ndarray, target: Sequence[int], steps: int
) -> list[float]:
    """Plain full-batch descent on a single utterance; returns the loss per step."""
    cfg = model.config
    optimizer = MomentumSGD(model.params, cfg.learning_rate, cfg.momentum, cfg.clip_norm)
    losses = []
    for _ in range(steps):
        result, grads = model.forward_backward(features, target)
        if not result.feasible:
            raise NetError("target is infeasible for this input length")
        if grads is None or not math.isfinite(result.loss):
            raise TrainingDivergedError(
                "<single>", 0, len(losses), result.loss, cfg.learning_rate, math.nan
            )
        losses.append(result.loss)
        optimizer.step(grads)
    return losses

