"""
Rule-based text NER and corpus augmentation.

Candidates come from gazetteer phrases and two patterns:

- amount: a run of number words followed by a unit (``soixante dix sept ans``),
  or a run of at least two number words;
- time: a single time word.

Candidates strictly inside another candidate are discarded; the rest are
chosen greedily by (longer, earlier start, higher category priority) without
overlap.
"""

import os
from collections.abc import Sequence
from pathlib import Path
from typing import NamedTuple

from ..alphabet.codec import encode
from ..alphabet.tags import MARKER_SET, STAR, Category, Entity, TaggedTranscript
from ..core.exceptions import AugmentError
from ..core.logging_config import get_logger
from ..corpus.manifest import Corpus, write_manifest
from ..corpus.schemas import Source, Split, Utterance
from .rules import RuleSet

logger = get_logger(__name__)


class Candidate(NamedTuple):
    start: int
    end: int
    category: Category

    @property
    def length(self) -> int:
        return self.end - self.start


def _phrase_index(rules: RuleSet) -> dict[str, list[tuple[tuple[str, ...], Category]]]:
    index: dict[str, list[tuple[tuple[str, ...], Category]]] = {}
    for category, phrases in rules.gazetteers.items():
        for phrase in phrases:
            words = tuple(phrase.split())
            index.setdefault(words[0], []).append((words, category))
    return index


def _match_words(words: list[str], i: int, phrase: tuple[str, ...]) -> bool:
    return tuple(words[i : i + len(phrase)]) == phrase


def find_candidates(words: list[str], rules: RuleSet) -> list[Candidate]:
    found: set[Candidate] = set()
    index = _phrase_index(rules)
    for i, word in enumerate(words):
        for phrase, category in index.get(word, ()):
            if _match_words(words, i, phrase):
                found.add(Candidate(i, i + len(phrase), category))

    numbers = set(rules.number_words)
    units = [tuple(u.split()) for u in rules.unit_words]
    times = set(rules.time_words)
    i = 0
    while i < len(words):
        if words[i] in numbers:
            j = i
            while j < len(words) and words[j] in numbers:
                j += 1
            unit = max((u for u in units if _match_words(words, j, u)), key=len, default=None)
            if unit is not None:
                found.add(Candidate(i, j + len(unit), Category.AMOUNT))
            elif j - i >= 2:
                found.add(Candidate(i, j, Category.AMOUNT))
            i = j
        else:
            i += 1
    for i, word in enumerate(words):
        if word in times:
            found.add(Candidate(i, i + 1, Category.TIME))
    return sorted(found)


def resolve(candidates: Sequence[Candidate], rules: RuleSet) -> list[Candidate]:
    """Drop dominated candidates, then pick non-overlapping ones greedily."""
    maximal = [
        c
        for c in candidates
        if not any(
            o.start <= c.start and c.end <= o.end and o.length > c.length for o in candidates
        )
    ]
    ordered = sorted(maximal, key=lambda c: (-c.length, c.start, rules.rank(c.category)))
    taken: list[Candidate] = []
    for c in ordered:
        if all(c.end <= t.start or t.end <= c.start for t in taken):
            taken.append(c)
    return sorted(taken)


def annotate(plain: str, rules: RuleSet) -> TaggedTranscript:
    """Tag a plain transcript; removing the markers gives the input back."""
    for pos, ch in enumerate(plain):
        if ch in MARKER_SET or ch == STAR:
            raise AugmentError(
                f"marker character {ch!r} in a plain transcript", {"position": pos}
            )
    words = plain.split()
    chosen = resolve(find_candidates(words, rules), rules)
    entities = [Entity.from_span(c.category, words, c.start, c.end) for c in chosen]
    return encode(words, entities)


def augment_utterances(
    utterances: Sequence[Utterance], rules: RuleSet, features_root: str = ""
) -> list[Utterance]:
    """Re-emit each utterance with ``annotate`` output as its tagged field."""
    out = []
    for utterance in utterances:
        if utterance.source is Source.AUGMENTED or any(
            ch in MARKER_SET for ch in utterance.tagged
        ):
            raise AugmentError(
                f"utterance '{utterance.id}' is already annotated",
                {"utterance_id": utterance.id},
            )
        features = utterance.features
        if features_root:
            features = os.path.join(features_root, features)
        out.append(
            Utterance(
                id=utterance.id,
                features=Path(features).as_posix(),
                plain=utterance.plain,
                tagged=annotate(utterance.plain, rules).text,
                split=utterance.split,
                source=Source.AUGMENTED,
                annotated=True,
            )
        )
    return out


def augment_corpus(corpus: Corpus, rules: RuleSet, out_manifest: str | Path) -> Corpus:
    """Annotate the corpus's unannotated train utterances into a new manifest.

    Feature paths are rewritten relative to the new manifest's directory.
    """
    out_manifest = Path(out_manifest)
    out_dir = out_manifest.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    if any(u.source is Source.AUGMENTED for u in corpus):
        raise AugmentError("manifest already holds augmented records")
    selected = [u for u in corpus.split(Split.TRAIN) if not u.annotated]
    root = os.path.relpath(corpus.root.resolve(), out_dir.resolve())
    augmented = augment_utterances(selected, rules, "" if root == "." else root)
    write_manifest(out_manifest, augmented)
    tagged = sum(1 for u in augmented if u.tagged != u.plain)
    logger.info(
        "corpus_augmented",
        path=str(out_manifest),
        utterances=len(augmented),
        with_entities=tagged,
    )
    return Corpus(out_dir, augmented)
