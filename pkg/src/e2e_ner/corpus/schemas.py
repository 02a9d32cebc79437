"""Corpus documents: generation spec and utterance records."""

import re
from enum import Enum

from pydantic import Field, field_validator, model_validator

from ..alphabet.alphabet import DEFAULT_BASE_CHARS
from ..alphabet.codec import RepairPolicy, parse
from ..alphabet.tags import Category, normalize_value
from ..core.base import BaseDocument, BaseSchema
from ..core.exceptions import TranscriptError
from .defaults import (
    DEFAULT_GAZETTEERS,
    DEFAULT_TEMPLATES,
    DEFAULT_VOCABULARY,
    DEFAULT_CATEGORY_WEIGHTS,
)

SLOT_PATTERN = re.compile(r"\{(\w+)\}")


class Split(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class Source(str, Enum):
    GOLD = "gold"
    AUGMENTED = "augmented"


class SplitCounts(BaseSchema):
    train: int = Field(default=2000, ge=0)
    dev: int = Field(default=200, ge=0)
    test: int = Field(default=200, ge=0)
    # extra train utterances whose entity annotation is withheld
    asr_only: int = Field(default=1000, ge=0)


class CorpusSpec(BaseDocument):
    """Everything the synthetic generator needs; a pure function of this + seed."""

    templates: list[str] = Field(default_factory=lambda: list(DEFAULT_TEMPLATES))
    gazetteers: dict[Category, list[str]] = Field(
        default_factory=lambda: {c: list(v) for c, v in DEFAULT_GAZETTEERS.items()}
    )
    category_weights: dict[Category, float] = Field(
        default_factory=lambda: dict(DEFAULT_CATEGORY_WEIGHTS)
    )
    vocabulary: list[str] = Field(default_factory=lambda: list(DEFAULT_VOCABULARY))
    counts: SplitCounts = Field(default_factory=SplitCounts)
    entity_rate: float = Field(default=0.7, ge=0.0, le=1.0)
    max_clauses: int = Field(default=3, ge=1)
    max_filler_words: int = Field(default=1, ge=0)
    base_chars: str = DEFAULT_BASE_CHARS
    feature_dim: int = Field(default=16, ge=1)
    noise: float = Field(default=0.3, ge=0.0)
    duration_range: tuple[int, int] = (2, 5)
    seed: int = 0

    @field_validator("category_weights")
    @classmethod
    def _positive_weights(cls, v: dict[Category, float]) -> dict[Category, float]:
        for category, weight in v.items():
            if weight <= 0:
                raise ValueError(f"weight of '{category.value}' must be positive")
        return v

    @field_validator("templates")
    @classmethod
    def _single_slot(cls, v: list[str]) -> list[str]:
        for template in v:
            slots = SLOT_PATTERN.findall(template)
            if len(slots) > 1:
                raise ValueError(f"template {template!r} has more than one slot")
            if slots and slots[0] not in Category._value2member_map_:
                raise ValueError(f"template {template!r} uses unknown slot {slots[0]}")
        return v

    @model_validator(mode="after")
    def _check_ranges(self) -> "CorpusSpec":
        low, high = self.duration_range
        if low < 1 or high < low:
            raise ValueError(f"invalid duration range {self.duration_range}")
        return self

    def templates_for(self, category: Category | None) -> list[str]:
        wanted = None if category is None else category.value
        out = []
        for template in self.templates:
            slots = SLOT_PATTERN.findall(template)
            if (slots[0] if slots else None) == wanted:
                out.append(template)
        return out


class Utterance(BaseSchema):
    """One manifest record; ``features`` is relative to the manifest directory."""

    id: str
    features: str
    plain: str
    tagged: str
    split: Split
    source: Source = Source.GOLD
    annotated: bool = True

    @model_validator(mode="after")
    def _consistent(self) -> "Utterance":
        try:
            result = parse(self.tagged, RepairPolicy.STRICT)
        except TranscriptError as e:
            raise ValueError(f"utterance '{self.id}': {e.message}")
        if result.plain != normalize_value(self.plain) or self.plain != result.plain:
            raise ValueError(f"utterance '{self.id}': plain does not match tagged")
        return self
