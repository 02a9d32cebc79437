"""Entity-level precision / recall / F-measure, micro-averaged over a corpus."""

from collections.abc import Mapping
from enum import Enum

from pydantic import Field

from ..alphabet.codec import RepairPolicy, parse
from ..alphabet.tags import Category
from ..core.base import BaseDocument, BaseSchema
from ..core.exceptions import EvaluationError
from .alignment import align_entities
from .error_rates import ErrorRate, cer, wer


class ScoreMode(str, Enum):
    CATEGORY = "category"
    CATVALUE = "catvalue"


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _ratio(hits: int, total: int) -> float:
    return hits / total if total else 0.0


class DetectionScores(BaseSchema):
    hits: int = Field(ge=0)
    hyp_total: int = Field(ge=0)
    ref_total: int = Field(ge=0)
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f: float = Field(ge=0.0, le=1.0)

    @classmethod
    def from_counts(cls, hits: int, hyp_total: int, ref_total: int) -> "DetectionScores":
        p = _ratio(hits, hyp_total)
        r = _ratio(hits, ref_total)
        return cls(
            hits=hits,
            hyp_total=hyp_total,
            ref_total=ref_total,
            precision=p,
            recall=r,
            f=f_measure(p, r),
        )


class CategoryBreakdown(BaseSchema):
    category: DetectionScores
    catvalue: DetectionScores


class EvalReport(BaseDocument):
    """Both scoring modes, value accuracy, per-category counts, optional WER/CER."""

    n_utterances: int
    category: DetectionScores
    catvalue: DetectionScores
    value_accuracy: float = Field(ge=0.0, le=1.0)
    per_category: dict[Category, CategoryBreakdown] = Field(default_factory=dict)
    wer: ErrorRate | None = None
    cer: ErrorRate | None = None

    def scores(self, mode: ScoreMode | str) -> DetectionScores:
        return self.category if ScoreMode(mode) is ScoreMode.CATEGORY else self.catvalue


class _Tally:
    def __init__(self) -> None:
        self.hits = 0
        self.value_hits = 0
        self.hyp = 0
        self.ref = 0


def score(
    refs: Mapping[str, str],
    hyps: Mapping[str, str],
    error_rates: bool = False,
) -> EvalReport:
    """Score hypothesis tagged strings against references, keyed by utterance id.

    References must parse strictly; hypotheses are parsed with repair.
    """
    if set(refs) != set(hyps):
        missing = sorted(set(refs) - set(hyps))[:5]
        extra = sorted(set(hyps) - set(refs))[:5]
        raise EvaluationError(
            "reference and hypothesis ids differ",
            {"missing_hypotheses": missing, "unknown_hypotheses": extra},
        )

    total = _Tally()
    by_category: dict[Category, _Tally] = {}
    ref_plain: list[str] = []
    hyp_plain: list[str] = []

    def tally(category: Category) -> _Tally:
        return by_category.setdefault(category, _Tally())

    for utt_id in sorted(refs):
        ref = parse(refs[utt_id], RepairPolicy.STRICT)
        hyp = parse(hyps[utt_id], RepairPolicy.REPAIR)
        ref_plain.append(ref.plain)
        hyp_plain.append(hyp.plain)
        total.ref += len(ref.entities)
        total.hyp += len(hyp.entities)
        for entity in ref.entities:
            tally(entity.category).ref += 1
        for entity in hyp.entities:
            tally(entity.category).hyp += 1
        for pair in align_entities(ref.entities, hyp.entities):
            if pair.category_hit:
                total.hits += 1
                tally(pair.ref.category).hits += 1
                if pair.value_hit:
                    total.value_hits += 1
                    tally(pair.ref.category).value_hits += 1

    per_category = {
        category: CategoryBreakdown(
            category=DetectionScores.from_counts(t.hits, t.hyp, t.ref),
            catvalue=DetectionScores.from_counts(t.value_hits, t.hyp, t.ref),
        )
        for category, t in sorted(by_category.items(), key=lambda kv: list(Category).index(kv[0]))
    }
    return EvalReport(
        n_utterances=len(refs),
        category=DetectionScores.from_counts(total.hits, total.hyp, total.ref),
        catvalue=DetectionScores.from_counts(total.value_hits, total.hyp, total.ref),
        value_accuracy=_ratio(total.value_hits, total.hits),
        per_category=per_category,
        wer=wer(ref_plain, hyp_plain) if error_rates else None,
        cer=cer(ref_plain, hyp_plain) if error_rates else None,
    )
