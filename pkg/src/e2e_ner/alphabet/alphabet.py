"""Emission alphabet: blank, base characters, optional star, optional markers."""

from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import ClassVar

from pydantic import PrivateAttr, model_validator

from ..core.base import BaseSchema
from ..core.exceptions import AlphabetError, UnknownSymbolError
from .tags import MARKER_SET, MARKERS, STAR

BLANK_SYMBOL = "<blank>"
SPACE = " "
DEFAULT_BASE_CHARS = " abcdefghijklmnopqrstuvwxyzàâçéèêëîïôùûüÿœæ"

ALPHABET_FILE_VERSION = 1
_FILE_MAGIC = "#e2e-ner-alphabet"
_FILE_ESCAPES = {BLANK_SYMBOL: BLANK_SYMBOL, SPACE: "<space>"}


class Alphabet(BaseSchema):
    """Ordered symbol table; the index of a symbol is its emission id."""

    blank_id: ClassVar[int] = 0

    symbols: tuple[str, ...]
    space_char: str = SPACE
    star_enabled: bool = False
    tag_set_enabled: bool = False

    _index: dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_invariants(self) -> "Alphabet":
        if not self.symbols or self.symbols[0] != BLANK_SYMBOL:
            raise ValueError("symbol 0 must be the blank")
        rest = self.symbols[1:]
        if any(len(s) != 1 for s in rest):
            raise ValueError("non-blank symbols must be single characters")
        if len(set(rest)) != len(rest):
            raise ValueError("duplicate symbols")
        if rest.count(self.space_char) != 1:
            raise ValueError("space must be present exactly once")
        if (STAR in rest) != self.star_enabled:
            raise ValueError("star present iff star_enabled")
        present = [m for m in MARKERS if m in rest]
        if self.tag_set_enabled and len(present) != len(MARKERS):
            raise ValueError("all nine marker characters are required")
        if not self.tag_set_enabled and present:
            raise ValueError(f"marker {present[0]!r} in an alphabet without tags")
        return self

    def model_post_init(self, __context) -> None:
        self._index = {s: i for i, s in enumerate(self.symbols)}

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def base_chars(self) -> tuple[str, ...]:
        return tuple(
            s for s in self.symbols[1:] if s != STAR and s not in MARKER_SET
        )

    @property
    def marker_ids(self) -> tuple[int, ...]:
        return tuple(self._index[m] for m in MARKERS if m in self._index)

    @property
    def star_id(self) -> int | None:
        return self._index.get(STAR)

    @property
    def space_id(self) -> int:
        return self._index[self.space_char]

    @property
    def non_base_ids(self) -> tuple[int, ...]:
        """Ids of the star and marker symbols (masked for plain ASR decoding)."""
        star = () if self.star_id is None else (self.star_id,)
        return star + self.marker_ids

    def index(self, char: str) -> int:
        try:
            return self._index[char]
        except KeyError:
            raise UnknownSymbolError(char)

    def __contains__(self, char: object) -> bool:
        return char in self._index and char != BLANK_SYMBOL

    def to_ids(self, text: str) -> list[int]:
        ids = []
        for pos, ch in enumerate(text):
            i = self._index.get(ch)
            if i is None or i == self.blank_id:
                raise UnknownSymbolError(ch, pos)
            ids.append(i)
        return ids

    def from_ids(self, ids: Iterable[int]) -> str:
        chars = []
        for i in ids:
            i = int(i)
            if i == self.blank_id:
                raise AlphabetError("blank id in a label sequence", {"id": i})
            if not 0 < i < len(self.symbols):
                raise AlphabetError(f"id {i} out of range", {"id": i})
            chars.append(self.symbols[i])
        return "".join(chars)

    def extended(self, star_enabled: bool, tag_set_enabled: bool) -> "Alphabet":
        return build_alphabet(self.base_chars, star_enabled, tag_set_enabled)

    def is_extension_of(self, other: "Alphabet") -> bool:
        """True when ``other``'s symbols are a prefix of ours."""
        return self.symbols[: other.size] == other.symbols

    def save(self, path: str | Path) -> None:
        lines = [
            f"{_FILE_MAGIC} v{ALPHABET_FILE_VERSION} "
            f"star={int(self.star_enabled)} tags={int(self.tag_set_enabled)}"
        ]
        lines += [_FILE_ESCAPES.get(s, s) for s in self.symbols]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Alphabet":
        lines = Path(path).read_text(encoding="utf-8").split("\n")
        header = lines[0].split()
        if len(header) != 4 or header[0] != _FILE_MAGIC:
            raise AlphabetError(f"{path}: not an alphabet file")
        if header[1] != f"v{ALPHABET_FILE_VERSION}":
            raise AlphabetError(f"{path}: unsupported version {header[1]}")
        unescape = {v: k for k, v in _FILE_ESCAPES.items()}
        symbols = [unescape.get(s, s) for s in lines[1:] if s != ""]
        return cls(
            symbols=tuple(symbols),
            star_enabled=header[2] == "star=1",
            tag_set_enabled=header[3] == "tags=1",
        )


def build_alphabet(
    base_chars: Sequence[str] | str = DEFAULT_BASE_CHARS,
    star_enabled: bool = False,
    tag_set_enabled: bool = False,
) -> Alphabet:
    """Blank at 0, then base characters, then the star, then the nine markers."""
    base = list(base_chars)
    seen: set[str] = set()
    for ch in base:
        if len(ch) != 1:
            raise AlphabetError(f"base symbol {ch!r} is not a single character")
        if ch in MARKER_SET:
            raise AlphabetError(f"marker character {ch!r} in the base set", {"char": ch})
        if ch == STAR:
            raise AlphabetError("star character in the base set", {"char": ch})
        if ch in seen:
            raise AlphabetError(f"duplicate character {ch!r}", {"char": ch})
        seen.add(ch)
    if SPACE not in seen:
        raise AlphabetError("base set must contain the space character")

    symbols = [BLANK_SYMBOL, *base]
    if star_enabled:
        symbols.append(STAR)
    if tag_set_enabled:
        symbols.extend(MARKERS)
    return Alphabet(
        symbols=tuple(symbols),
        star_enabled=star_enabled,
        tag_set_enabled=tag_set_enabled,
    )


def to_ids(text: str, alphabet: Alphabet) -> list[int]:
    return alphabet.to_ids(text)


def from_ids(ids: Iterable[int], alphabet: Alphabet) -> str:
    return alphabet.from_ids(ids)
