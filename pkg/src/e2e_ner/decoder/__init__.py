from .beam_search import Hypothesis, beam_search
from .config import DecoderConfig
from .fusion import FusionScorer, lm_logp, score_Q, word_count
from .oracle import ORACLE_LIMIT, exhaustive_oracle, rank_label_sequences

__all__ = [
    "DecoderConfig",
    "Hypothesis",
    "beam_search",
    "score_Q",
    "word_count",
    "lm_logp",
    "FusionScorer",
    "exhaustive_oracle",
    "rank_label_sequences",
    "ORACLE_LIMIT",
]
