from .annotator import (
    Candidate,
    annotate,
    augment_corpus,
    augment_utterances,
    find_candidates,
    resolve,
)
from .rules import DEFAULT_PRIORITY, RuleSet

__all__ = [
    "RuleSet",
    "DEFAULT_PRIORITY",
    "Candidate",
    "find_candidates",
    "resolve",
    "annotate",
    "augment_utterances",
    "augment_corpus",
]
