"""
Tagged transcript grammar.

Canonical form: word and marker tokens joined by single spaces, every open
marker followed by at least one word and then ``]`` before any other open
marker. Decoder output is not always canonical, so ``parse`` also has a repair
policy:

- an open marker left open at the end is closed at the utterance end;
- a ``]`` with no open marker is dropped;
- an open marker inside an open entity closes the previous entity first;
- an entity left with no words is dropped.
"""

from enum import Enum
from typing import NamedTuple

from ..core.exceptions import InvalidSpanError, MalformedTranscriptError
from .tags import (
    CLOSE_MARKER,
    MARKER_SET,
    MARKER_TO_CATEGORY,
    OPEN_MARKERS,
    STAR,
    Category,
    Entity,
    TaggedTranscript,
    normalize_value,
)

_SPECIAL = MARKER_SET | {STAR}


class RepairPolicy(str, Enum):
    STRICT = "strict"
    REPAIR = "repair"


class ParseResult(NamedTuple):
    words: list[str]
    entities: list[Entity]

    @property
    def plain(self) -> str:
        return " ".join(self.words)


def tokenize(text: str, strict: bool = False) -> list[str]:
    """Split on whitespace; markers and star glued to words become their own tokens."""
    tokens: list[str] = []
    for raw in text.split():
        if raw in _SPECIAL or not any(ch in _SPECIAL for ch in raw):
            tokens.append(raw)
            continue
        if strict:
            raise MalformedTranscriptError(f"marker glued to a word in {raw!r}", text)
        buf = ""
        for ch in raw:
            if ch in _SPECIAL:
                if buf:
                    tokens.append(buf)
                    buf = ""
                tokens.append(ch)
            else:
                buf += ch
        if buf:
            tokens.append(buf)
    return tokens


def parse(text: str, policy: RepairPolicy | str = RepairPolicy.STRICT) -> ParseResult:
    """Split a tagged string into plain words and entities (stars are dropped)."""
    strict = RepairPolicy(policy) is RepairPolicy.STRICT
    tokens = tokenize(text, strict=strict)

    words: list[str] = []
    entities: list[Entity] = []
    open_category: Category | None = None
    open_start = 0

    def close() -> None:
        nonlocal open_category
        assert open_category is not None
        if len(words) > open_start:
            entities.append(
                Entity.from_span(open_category, words, open_start, len(words))
            )
        elif strict:
            raise MalformedTranscriptError("entity without words", text)
        open_category = None

    for token in tokens:
        if token == STAR:
            if strict and open_category is not None:
                raise MalformedTranscriptError("star inside an entity", text)
        elif token in MARKER_TO_CATEGORY:
            if open_category is not None:
                if strict:
                    raise MalformedTranscriptError(
                        f"nested open marker {token!r}", text
                    )
                close()
            open_category = MARKER_TO_CATEGORY[token]
            open_start = len(words)
        elif token == CLOSE_MARKER:
            if open_category is None:
                if strict:
                    raise MalformedTranscriptError("closing marker without opener", text)
                continue
            close()
        else:
            words.append(token)

    if open_category is not None:
        if strict:
            raise MalformedTranscriptError("unclosed entity at end", text)
        close()

    return ParseResult(words, entities)


def _check_word(word: str) -> None:
    if not word or any(ch.isspace() or ch in _SPECIAL for ch in word):
        raise MalformedTranscriptError(f"invalid word token {word!r}")


def encode(words: list[str], entities: list[Entity]) -> TaggedTranscript:
    """Insert an open marker before and ``]`` after each entity span."""
    for word in words:
        _check_word(word)

    starts: dict[int, Entity] = {}
    ends: set[int] = set()
    previous_end = 0
    for entity in entities:
        span = entity.word_span
        if entity.end > len(words):
            raise InvalidSpanError(f"out of bounds for {len(words)} words", span)
        if entity.start < previous_end:
            raise InvalidSpanError("overlapping, nested or unordered spans", span)
        if normalize_value(" ".join(words[entity.start : entity.end])) != entity.value:
            raise InvalidSpanError(f"value {entity.value!r} does not match words", span)
        starts[entity.start] = entity
        ends.add(entity.end - 1)
        previous_end = entity.end

    tokens: list[str] = []
    for i, word in enumerate(words):
        if i in starts:
            tokens.append(OPEN_MARKERS[starts[i].category])
        tokens.append(word)
        if i in ends:
            tokens.append(CLOSE_MARKER)
    return TaggedTranscript(tokens=tuple(tokens))


def tagged_from_text(text: str) -> TaggedTranscript:
    """Validate a canonical tagged (possibly starred) string."""
    parse(text, RepairPolicy.STRICT)
    return TaggedTranscript(tokens=tuple(text.split()))


def canonicalize(text: str, policy: RepairPolicy | str = RepairPolicy.REPAIR) -> str:
    return encode(*parse(text, policy)).text


def strip_markers(text: str) -> str:
    return parse(text, RepairPolicy.REPAIR).plain


def star_transform(tagged: TaggedTranscript) -> TaggedTranscript:
    """Replace every maximal out-of-entity word run by a single ``*``."""
    tagged_from_text(tagged.text)

    out: list[str] = []
    inside = False
    pending = False
    for token in tagged.tokens:
        if token in MARKER_TO_CATEGORY:
            if pending:
                out.append(STAR)
                pending = False
            out.append(token)
            inside = True
        elif token == CLOSE_MARKER:
            out.append(token)
            inside = False
        elif inside:
            out.append(token)
        else:
            pending = True
    if pending:
        out.append(STAR)
    return TaggedTranscript(tokens=tuple(out))
