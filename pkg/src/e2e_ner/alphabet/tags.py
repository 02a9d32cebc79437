"""Entity categories, the marker-character map and transcript value types."""

from enum import Enum

from pydantic import Field, field_validator, model_validator

from ..core.base import BaseSchema
from ..core.exceptions import AlphabetError


class Category(str, Enum):
    """The eight named entity categories."""

    PERS = "pers"
    FUNC = "func"
    ORG = "org"
    LOC = "loc"
    PROD = "prod"
    AMOUNT = "amount"
    TIME = "time"
    EVENT = "event"


# category -> open marker; a single closer ends every category
OPEN_MARKERS: dict[Category, str] = {
    Category.PERS: "[",
    Category.FUNC: "(",
    Category.ORG: "{",
    Category.LOC: "$",
    Category.PROD: "&",
    Category.AMOUNT: "%",
    Category.TIME: "#",
    Category.EVENT: ")",
}
CLOSE_MARKER = "]"
STAR = "*"

MARKER_TO_CATEGORY: dict[str, Category] = {m: c for c, m in OPEN_MARKERS.items()}
MARKERS: tuple[str, ...] = (*OPEN_MARKERS.values(), CLOSE_MARKER)
MARKER_SET = frozenset(MARKERS)


def check_tag_map() -> None:
    """Assert the category/end -> marker map is a bijection onto nine characters."""
    if len(OPEN_MARKERS) != len(Category):
        raise AlphabetError("every category needs exactly one open marker")
    if len(MARKER_SET) != 9 or len(MARKERS) != 9:
        raise AlphabetError("marker characters must be nine distinct symbols")
    if any(len(m) != 1 for m in MARKERS):
        raise AlphabetError("markers must be single characters")
    if CLOSE_MARKER in MARKER_TO_CATEGORY or STAR in MARKER_SET:
        raise AlphabetError("closer and star must not double as open markers")


check_tag_map()


def normalize_value(text: str) -> str:
    """Lowercase and collapse whitespace."""
    return " ".join(text.lower().split())


class Entity(BaseSchema):
    """A categorized word span of a plain transcript."""

    category: Category
    value: str = Field(min_length=1)
    start: int = Field(ge=0)
    end: int

    @field_validator("value")
    @classmethod
    def _normalized(cls, v: str) -> str:
        v = normalize_value(v)
        if not v:
            raise ValueError("entity value must be non-empty")
        return v

    @model_validator(mode="after")
    def _span_order(self) -> "Entity":
        if self.end <= self.start:
            raise ValueError(f"empty or inverted span ({self.start}, {self.end})")
        return self

    @property
    def word_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @classmethod
    def from_span(
        cls, category: Category | str, words: list[str], start: int, end: int
    ) -> "Entity":
        return cls(
            category=Category(category),
            value=" ".join(words[start:end]),
            start=start,
            end=end,
        )


class TaggedTranscript(BaseSchema):
    """A transcript whose entity markers are standalone tokens."""

    tokens: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __str__(self) -> str:
        return self.text

    @property
    def words(self) -> list[str]:
        return [t for t in self.tokens if t not in MARKER_SET and t != STAR]
