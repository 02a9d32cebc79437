"""Levenshtein-based WER and CER with substitution / insertion / deletion counts."""

from collections.abc import Sequence

from kaldialign import edit_distance
from pydantic import Field

from ..core.base import BaseSchema
from ..core.exceptions import EvaluationError


class EditCounts(BaseSchema):
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    ref_length: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    def __add__(self, other: "EditCounts") -> "EditCounts":
        return EditCounts(
            substitutions=self.substitutions + other.substitutions,
            insertions=self.insertions + other.insertions,
            deletions=self.deletions + other.deletions,
            ref_length=self.ref_length + other.ref_length,
        )


class ErrorRate(EditCounts):
    rate: float = Field(ge=0.0)

    @classmethod
    def from_counts(cls, counts: EditCounts) -> "ErrorRate":
        return cls(**counts.model_dump(), rate=counts.errors / max(counts.ref_length, 1))


def edit_counts(ref: Sequence[str], hyp: Sequence[str]) -> EditCounts:
    """Substitutions, insertions and deletions of a minimum-distance alignment."""
    info = edit_distance(list(ref), list(hyp))
    return EditCounts(
        substitutions=info["sub"],
        insertions=info["ins"],
        deletions=info["del"],
        ref_length=len(ref),
    )


def _corpus_rate(refs: Sequence[Sequence[str]], hyps: Sequence[Sequence[str]]) -> ErrorRate:
    if len(refs) != len(hyps):
        raise EvaluationError(f"{len(refs)} references but {len(hyps)} hypotheses")
    total = EditCounts()
    for ref, hyp in zip(refs, hyps):
        total = total + edit_counts(ref, hyp)
    return ErrorRate.from_counts(total)


def wer(refs: Sequence[str], hyps: Sequence[str]) -> ErrorRate:
    """Word errors summed over the corpus divided by reference words."""
    return _corpus_rate([r.split() for r in refs], [h.split() for h in hyps])


def cer(refs: Sequence[str], hyps: Sequence[str]) -> ErrorRate:
    """Character errors (spaces included) over whitespace-normalized strings."""
    return _corpus_rate(
        [" ".join(r.split()) for r in refs], [" ".join(h.split()) for h in hyps]
    )
