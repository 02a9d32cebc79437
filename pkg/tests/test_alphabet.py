"""Alphabet construction and the tagged-transcript codec."""

import hypothesis
import hypothesis.strategies as st
import pytest
from pydantic import ValidationError

from e2e_ner.alphabet import (
    BLANK_SYMBOL,
    DEFAULT_BASE_CHARS,
    MARKERS,
    STAR,
    Alphabet,
    Category,
    Entity,
    RepairPolicy,
    build_alphabet,
    canonicalize,
    encode,
    parse,
    star_transform,
    strip_markers,
    tagged_from_text,
    tokenize,
)
from e2e_ner.core.exceptions import (
    AlphabetError,
    InvalidSpanError,
    MalformedTranscriptError,
    UnknownSymbolError,
)

OBITUARY = (
    "selon [ césar ] il est parti # hier ] il habite à $ paris ] "
    "à l âge de % soixante dix sept ans ]"
)
OBITUARY_STARRED = "* [ césar ] * # hier ] * $ paris ] * % soixante dix sept ans ]"
VOCABULARY = ["le", "maire", "de", "paris", "a", "dit", "cent", "ans", "été"]


@st.composite
def tagged_words(draw):
    words = draw(st.lists(st.sampled_from(VOCABULARY), min_size=1, max_size=8))
    entities = []
    i = 0
    while i < len(words):
        if draw(st.booleans()):
            end = draw(st.integers(i + 1, len(words)))
            category = draw(st.sampled_from(list(Category)))
            entities.append(Entity.from_span(category, words, i, end))
            i = end
        else:
            i += 1
    return words, entities


class TestAlphabet:
    def test_layout(self):
        alphabet = build_alphabet(star_enabled=True, tag_set_enabled=True)
        n_base = len(DEFAULT_BASE_CHARS)
        assert alphabet.symbols[0] == BLANK_SYMBOL
        assert alphabet.size == 1 + n_base + 1 + len(MARKERS)
        assert alphabet.symbols[1 + n_base] == STAR
        assert alphabet.symbols[2 + n_base :] == MARKERS
        assert alphabet.base_chars == tuple(DEFAULT_BASE_CHARS)

    def test_plain_alphabet_has_no_extras(self, base_alphabet):
        assert base_alphabet.star_id is None
        assert base_alphabet.marker_ids == ()
        assert base_alphabet.non_base_ids == ()

    def test_non_base_ids(self):
        alphabet = build_alphabet(star_enabled=True, tag_set_enabled=True)
        assert alphabet.non_base_ids[0] == alphabet.star_id
        assert len(alphabet.non_base_ids) == 10

    @pytest.mark.parametrize("base", [" aa", " a[", " a*", "ab"])
    def test_invalid_base_set(self, base):
        with pytest.raises(AlphabetError):
            build_alphabet(base)

    def test_marker_without_tag_set_is_rejected(self):
        with pytest.raises(ValidationError):
            Alphabet(symbols=(BLANK_SYMBOL, " ", "a", "$"))

    def test_ids_round_trip(self, tagged_alphabet):
        text = "[ césar ] est à $ paris ]"
        ids = tagged_alphabet.to_ids(text)
        assert all(i != 0 for i in ids)
        assert tagged_alphabet.from_ids(ids) == text

    def test_unknown_symbol(self, base_alphabet):
        with pytest.raises(UnknownSymbolError) as exc:
            base_alphabet.to_ids("ab$")
        assert exc.value.details == {"char": "$", "position": 2}

    def test_blank_in_label_sequence(self, base_alphabet):
        with pytest.raises(AlphabetError):
            base_alphabet.from_ids([1, 0, 2])

    def test_extension(self, base_alphabet):
        extended = base_alphabet.extended(star_enabled=True, tag_set_enabled=True)
        assert extended.is_extension_of(base_alphabet)
        assert not base_alphabet.is_extension_of(extended)
        assert extended.base_chars == base_alphabet.base_chars

    def test_save_load(self, tmp_path):
        alphabet = build_alphabet(star_enabled=True, tag_set_enabled=True)
        path = tmp_path / "alphabet.txt"
        alphabet.save(path)
        assert Alphabet.load(path) == alphabet

    def test_load_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "alphabet.txt"
        path.write_text("hello\nworld\n", encoding="utf-8")
        with pytest.raises(AlphabetError):
            Alphabet.load(path)


class TestCodec:
    def test_encode(self):
        words = "césar est né à rome".split()
        entities = [
            Entity.from_span(Category.PERS, words, 0, 1),
            Entity.from_span(Category.LOC, words, 4, 5),
        ]
        assert encode(words, entities).text == "[ césar ] est né à $ rome ]"

    def test_parse(self):
        result = parse(OBITUARY)
        assert [(e.category, e.value) for e in result.entities] == [
            (Category.PERS, "césar"),
            (Category.TIME, "hier"),
            (Category.LOC, "paris"),
            (Category.AMOUNT, "soixante dix sept ans"),
        ]
        assert result.plain.startswith("selon césar il est parti hier")

    def test_encode_rejects_overlap(self):
        words = ["a", "b", "c"]
        entities = [
            Entity(category=Category.PERS, value="a b", start=0, end=2),
            Entity(category=Category.LOC, value="b c", start=1, end=3),
        ]
        with pytest.raises(InvalidSpanError):
            encode(words, entities)

    def test_encode_rejects_out_of_bounds(self):
        with pytest.raises(InvalidSpanError):
            encode(["a"], [Entity(category=Category.PERS, value="a b", start=0, end=2)])

    def test_encode_rejects_marker_in_word(self):
        with pytest.raises(MalformedTranscriptError):
            encode(["a$"], [])

    @pytest.mark.parametrize(
        "text",
        [
            "[ a ( b ] ]",
            "[ a",
            "a ] b",
            "[ ] a",
            "a [b ]",
            "[ a * b ]",
        ],
    )
    def test_strict_rejects(self, text):
        with pytest.raises(MalformedTranscriptError):
            parse(text, RepairPolicy.STRICT)

    def test_repair_closes_before_nested_open(self):
        result = parse("[ a ( b ]", RepairPolicy.REPAIR)
        assert [(e.category, e.value) for e in result.entities] == [
            (Category.PERS, "a"),
            (Category.FUNC, "b"),
        ]

    def test_repair_drops_orphans(self):
        result = parse("] a [ b", RepairPolicy.REPAIR)
        assert result.words == ["a", "b"]
        assert [(e.category, e.value, e.word_span) for e in result.entities] == [
            (Category.PERS, "b", (1, 2))
        ]

    def test_repair_drops_empty_entity(self):
        result = parse("[ ] a", RepairPolicy.REPAIR)
        assert result.words == ["a"]
        assert result.entities == []

    def test_tokenize_splits_glued_markers(self):
        assert tokenize("à $paris]") == ["à", "$", "paris", "]"]
        assert canonicalize("il habite à $paris]") == "il habite à $ paris ]"

    def test_strip_markers(self):
        assert strip_markers("[ césar ] est à $ paris ]") == "césar est à paris"

    def test_star_transform(self):
        assert star_transform(tagged_from_text(OBITUARY)).text == OBITUARY_STARRED

    def test_star_transform_keeps_entities(self):
        starred = star_transform(tagged_from_text(OBITUARY)).text
        original = [(e.category, e.value) for e in parse(OBITUARY).entities]
        assert [(e.category, e.value) for e in parse(starred).entities] == original

    def test_star_transform_without_entities(self):
        assert star_transform(tagged_from_text("il pleut")).text == "*"

    @pytest.mark.parametrize("text", [OBITUARY, "il pleut", "[ césar ]", "a $ b ] c # d ] e"])
    def test_star_transform_is_idempotent(self, text):
        once = star_transform(tagged_from_text(text))
        assert star_transform(once) == once

    @hypothesis.settings(max_examples=300, deadline=None)
    @hypothesis.given(tagged_words())
    def test_parse_encode_identity(self, case):
        words, entities = case
        result = parse(encode(words, entities).text)
        assert result.words == words
        assert result.entities == entities

    @hypothesis.given(tagged_words())
    def test_star_transform_is_idempotent_on_any_transcript(self, case):
        once = star_transform(encode(*case))
        assert star_transform(once) == once
