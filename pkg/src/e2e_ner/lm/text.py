"""How transcripts become LM token sequences."""

from enum import Enum

from ..alphabet.codec import RepairPolicy, parse, star_transform, tagged_from_text, tokenize


class TextMode(str, Enum):
    PLAIN = "plain"
    TAGGED = "tagged"
    STARRED = "starred"


def lm_tokens(text: str, mode: TextMode | str = TextMode.TAGGED) -> list[str]:
    """Word tokens, with markers (and stars) as ordinary tokens unless ``plain``."""
    mode = TextMode(mode)
    if mode is TextMode.PLAIN:
        return parse(text, RepairPolicy.REPAIR).words
    if mode is TextMode.STARRED:
        return list(star_transform(tagged_from_text(text)).tokens)
    return tokenize(text)
