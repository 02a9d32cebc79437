"""
Deterministic synthetic corpus generator.

Each utterance is 1..max_clauses clauses; a clause carries an entity slot with
probability ``entity_rate``. Slot categories are drawn from a per-split pool
allocated from the category weights with the largest-remainder method, so the
realized category frequencies track the weights exactly up to rounding.

Seeds: the structure and wording of utterance ``g`` (global index) come from
``default_rng([seed, g])``; its features from ``default_rng([seed, g, 1])``.
"""

from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from ..alphabet.codec import encode
from ..alphabet.tags import Category, Entity
from ..core.exceptions import CorpusError, EmptyGazetteerError
from ..core.logging_config import get_logger
from .features import FeatureSequence, synthesize_features
from .schemas import CorpusSpec, Source, Split, Utterance

logger = get_logger(__name__)

_SPLIT_SALT = {Split.TRAIN: 11, Split.DEV: 13, Split.TEST: 17}
_ASR_ONLY_SALT = 19


class GeneratedUtterance(NamedTuple):
    utterance: Utterance
    frames: FeatureSequence
    entities: list[Entity]


class UtterancePlan(NamedTuple):
    """Slot layout of one utterance before categories are assigned."""

    index: int
    global_index: int
    split: Split
    annotated: bool
    slots: list[bool]
    rng: np.random.Generator


def allocate_counts(weights: dict[Category, float], total: int) -> dict[Category, int]:
    """Largest-remainder apportionment of ``total`` items to the weighted categories."""
    if total <= 0 or not weights:
        return {c: 0 for c in weights}
    mass = sum(weights.values())
    quotas = {c: total * w / mass for c, w in weights.items()}
    counts = {c: int(np.floor(q)) for c, q in quotas.items()}
    leftover = total - sum(counts.values())
    # ties broken by category declaration order
    order = sorted(
        weights,
        key=lambda c: (-(quotas[c] - counts[c]), list(Category).index(c)),
    )
    for category in order[:leftover]:
        counts[category] += 1
    return counts


def _check_spec(spec: CorpusSpec) -> None:
    for category in spec.category_weights:
        if not spec.gazetteers.get(category):
            raise EmptyGazetteerError(category.value)
    if not spec.templates_for(None) and not spec.vocabulary:
        raise CorpusError(
            "spec needs a slot-free template or a non-empty vocabulary for entity-free clauses"
        )


def _plans(spec: CorpusSpec) -> Iterator[UtterancePlan]:
    layout = [
        (Split.TRAIN, spec.counts.train, True),
        (Split.TRAIN, spec.counts.asr_only, False),
        (Split.DEV, spec.counts.dev, True),
        (Split.TEST, spec.counts.test, True),
    ]
    g = 0
    index_in_split = {s: 0 for s in Split}
    for split, count, annotated in layout:
        for _ in range(count):
            rng = np.random.default_rng([spec.seed, g])
            n_clauses = int(rng.integers(1, spec.max_clauses + 1))
            slots = [bool(rng.random() < spec.entity_rate) for _ in range(n_clauses)]
            yield UtterancePlan(index_in_split[split], g, split, annotated, slots, rng)
            index_in_split[split] += 1
            g += 1


def _category_pool(spec: CorpusSpec, plans: list[UtterancePlan], salt: int) -> list[Category]:
    total = sum(sum(p.slots) for p in plans)
    counts = allocate_counts(dict(spec.category_weights), total)
    pool = [c for c in Category if c in counts for _ in range(counts[c])]
    np.random.default_rng([spec.seed, salt]).shuffle(pool)
    return pool


def _filler_words(spec: CorpusSpec, rng: np.random.Generator) -> list[str]:
    if not spec.vocabulary or spec.max_filler_words == 0:
        return []
    n = int(rng.integers(0, spec.max_filler_words + 1))
    return [spec.vocabulary[int(rng.integers(len(spec.vocabulary)))] for _ in range(n)]


def _realize(
    spec: CorpusSpec, plan: UtterancePlan, categories: list[Category]
) -> tuple[list[str], list[Entity]]:
    rng = plan.rng
    fillers = spec.templates_for(None)
    words: list[str] = []
    entities: list[Entity] = []
    pending = iter(categories)

    for clause, has_slot in enumerate(plan.slots):
        if clause > 0:
            words.extend(_filler_words(spec, rng))
        if has_slot:
            category = next(pending)
            templates = spec.templates_for(category) or [f"{{{category.value}}}"]
            template = templates[int(rng.integers(len(templates)))]
            gazetteer = spec.gazetteers[category]
            value = gazetteer[int(rng.integers(len(gazetteer)))].split()
            for token in template.split():
                if token == f"{{{category.value}}}":
                    start = len(words)
                    words.extend(value)
                    entities.append(
                        Entity.from_span(category, words, start, len(words))
                    )
                else:
                    words.append(token)
        elif fillers:
            words.extend(fillers[int(rng.integers(len(fillers)))].split())
        else:
            words.extend(_filler_words(spec, rng) or [spec.vocabulary[0]])
    return words, entities


def _build(spec: CorpusSpec, plan: UtterancePlan, categories: list[Category]) -> GeneratedUtterance:
    words, entities = _realize(spec, plan, categories)
    plain = " ".join(words)
    tagged = encode(words, entities).text if plan.annotated else plain
    utt_id = f"{plan.split.value}-{plan.index:06d}"
    frames = synthesize_features(plain, spec, [spec.seed, plan.global_index, 1])
    utterance = Utterance(
        id=utt_id,
        features=f"features/{utt_id}.feat",
        plain=plain,
        tagged=tagged,
        split=plan.split,
        source=Source.GOLD,
        annotated=plan.annotated,
    )
    return GeneratedUtterance(utterance, frames, entities if plan.annotated else [])


def generate_transcripts(spec: CorpusSpec) -> list[tuple[UtterancePlan, list[Category]]]:
    """Slot plans plus the categories assigned to each plan's slots."""
    _check_spec(spec)
    plans = list(_plans(spec))

    groups: dict[tuple[Split, bool], list[UtterancePlan]] = {}
    for plan in plans:
        groups.setdefault((plan.split, plan.annotated), []).append(plan)

    assigned: dict[int, list[Category]] = {}
    for (split, annotated), members in groups.items():
        salt = _SPLIT_SALT[split] if annotated else _ASR_ONLY_SALT
        pool = iter(_category_pool(spec, members, salt))
        for plan in members:
            assigned[plan.global_index] = [next(pool) for _ in range(sum(plan.slots))]
    return [(plan, assigned[plan.global_index]) for plan in plans]


def generate_corpus(spec: CorpusSpec, threads: int | None = None) -> list[GeneratedUtterance]:
    """Generate every split; deterministic in ``spec`` (including its seed)."""
    planned = generate_transcripts(spec)
    logger.info(
        "generating_corpus",
        utterances=len(planned),
        seed=spec.seed,
        feature_dim=spec.feature_dim,
    )
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            generated = list(pool.map(lambda pc: _build(spec, *pc), planned))
    else:
        generated = [_build(spec, plan, cats) for plan, cats in planned]

    n_entities = sum(len(g.entities) for g in generated)
    logger.info("corpus_generated", utterances=len(generated), entities=n_entities)
    return generated
