from .alphabet import (
    BLANK_SYMBOL,
    DEFAULT_BASE_CHARS,
    Alphabet,
    build_alphabet,
    from_ids,
    to_ids,
)
from .codec import (
    ParseResult,
    RepairPolicy,
    canonicalize,
    encode,
    parse,
    star_transform,
    strip_markers,
    tagged_from_text,
    tokenize,
)
from .tags import (
    CLOSE_MARKER,
    MARKER_SET,
    MARKER_TO_CATEGORY,
    MARKERS,
    OPEN_MARKERS,
    STAR,
    Category,
    Entity,
    TaggedTranscript,
    normalize_value,
)

__all__ = [
    # Alphabet
    "Alphabet",
    "BLANK_SYMBOL",
    "DEFAULT_BASE_CHARS",
    "build_alphabet",
    "to_ids",
    "from_ids",
    # Tags
    "Category",
    "Entity",
    "TaggedTranscript",
    "OPEN_MARKERS",
    "CLOSE_MARKER",
    "MARKERS",
    "MARKER_SET",
    "MARKER_TO_CATEGORY",
    "STAR",
    "normalize_value",
    # Codec
    "RepairPolicy",
    "ParseResult",
    "encode",
    "parse",
    "star_transform",
    "tokenize",
    "tagged_from_text",
    "canonicalize",
    "strip_markers",
]
