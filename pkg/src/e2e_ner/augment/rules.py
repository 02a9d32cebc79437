"""Rule sets for the text annotator: gazetteers plus amount and time patterns."""

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..alphabet.tags import MARKER_SET, STAR, Category, normalize_value
from ..core.base import BaseDocument
from ..corpus.defaults import NUMBER_WORDS, TIME_WORDS, UNIT_WORDS
from ..corpus.schemas import CorpusSpec

DEFAULT_PRIORITY: list[Category] = [
    Category.PERS,
    Category.ORG,
    Category.LOC,
    Category.FUNC,
    Category.PROD,
    Category.EVENT,
    Category.AMOUNT,
    Category.TIME,
]


def _clean_phrase(phrase: str) -> str:
    if phrase != phrase.lower():
        raise ValueError(f"phrase {phrase!r} is not lowercase")
    phrase = normalize_value(phrase)
    if not phrase:
        raise ValueError("empty phrase")
    if any(ch in MARKER_SET or ch == STAR for ch in phrase):
        raise ValueError(f"phrase {phrase!r} contains a marker character")
    return phrase


class RuleSet(BaseDocument):
    """Gazetteers per category, pattern word lists, and the category priority."""

    gazetteers: dict[Category, list[str]] = Field(default_factory=dict)
    number_words: list[str] = Field(default_factory=lambda: list(NUMBER_WORDS))
    unit_words: list[str] = Field(default_factory=lambda: list(UNIT_WORDS))
    time_words: list[str] = Field(default_factory=lambda: list(TIME_WORDS))
    priority: list[Category] = Field(default_factory=lambda: list(DEFAULT_PRIORITY))

    @field_validator("gazetteers")
    @classmethod
    def _clean_gazetteers(cls, v: dict[Category, list[str]]) -> dict[Category, list[str]]:
        return {c: [_clean_phrase(p) for p in phrases] for c, phrases in v.items()}

    @field_validator("number_words", "unit_words", "time_words")
    @classmethod
    def _clean_words(cls, v: list[str]) -> list[str]:
        return [_clean_phrase(p) for p in v]

    @model_validator(mode="after")
    def _complete_priority(self) -> "RuleSet":
        if len(set(self.priority)) != len(self.priority):
            raise ValueError("duplicate category in priority")
        missing = [c for c in Category if c not in self.priority]
        if missing:
            raise ValueError(f"priority lacks {[c.value for c in missing]}")
        return self

    def rank(self, category: Category) -> int:
        return self.priority.index(category)

    @classmethod
    def from_corpus_spec(cls, spec: CorpusSpec, coverage: float = 0.7, seed: int = 0) -> "RuleSet":
        """A deterministic partial copy of the generator's gazetteers.

        Each category keeps ``round(coverage * n)`` of its phrases (at least
        one when coverage is positive), so the annotator misses some entities
        the way a real text tagger would.
        """
        if not 0.0 <= coverage <= 1.0:
            raise ValueError(f"coverage must be in [0, 1], got {coverage}")
        gazetteers: dict[Category, list[str]] = {}
        for category in Category:
            phrases = sorted(set(spec.gazetteers.get(category, [])))
            if not phrases or coverage == 0:
                continue
            keep = max(1, int(round(coverage * len(phrases))))
            rng = np.random.default_rng([seed, list(Category).index(category)])
            chosen = sorted(int(i) for i in rng.permutation(len(phrases))[:keep])
            gazetteers[category] = [phrases[i] for i in chosen]
        return cls(gazetteers=gazetteers)
