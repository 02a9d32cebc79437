"""
Word-level shallow fusion.

A character prefix is turned into LM tokens incrementally: a space completes
the pending word, a marker or star completes the pending word and is then a
token of its own, and the end of the utterance completes the pending word and
scores ``</s>``. Only word tokens count towards ``wc``. The same rules applied
to a whole string give ``tokenize`` of that string, so the search and
``score_Q`` agree exactly.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from ..alphabet.alphabet import Alphabet
from ..alphabet.codec import tokenize
from ..alphabet.tags import MARKER_SET, STAR
from ..core.exceptions import DecoderError
from ..ctc.loss import ctc_loss
from ..lm.ngram import LmState, NgramLM
from ..lm.text import TextMode
from .config import DecoderConfig

_SPECIAL = MARKER_SET | {STAR}


@dataclass(frozen=True, slots=True)
class TextState:
    """LM-side bookkeeping for one prefix."""

    text: str = ""
    lm_logp: float = 0.0
    wc: int = 0
    lm_state: LmState = ()
    pending: str = ""


class FusionScorer:
    """Applies LM tokens as characters are appended; ``lm=None`` disables the LM."""

    def __init__(self, lm: NgramLM | None):
        self.lm = lm
        self._score_markers = lm is not None and lm.text_mode is not TextMode.PLAIN

    def initial(self) -> TextState:
        return TextState(lm_state=self.lm.begin_state() if self.lm else ())

    def _emit(self, state: TextState, token: str, is_word: bool) -> TextState:
        lm_logp, lm_state = state.lm_logp, state.lm_state
        if self.lm is not None and (is_word or self._score_markers):
            logp, lm_state = self.lm.advance(lm_state, token)
            lm_logp += logp
        return replace(
            state, lm_logp=lm_logp, lm_state=lm_state, wc=state.wc + int(is_word)
        )

    def _flush(self, state: TextState) -> TextState:
        if not state.pending:
            return state
        return replace(self._emit(state, state.pending, True), pending="")

    def append(self, state: TextState, char: str) -> TextState:
        if char.isspace():
            out = self._flush(state)
        elif char in _SPECIAL:
            out = self._emit(self._flush(state), char, False)
        else:
            out = replace(state, pending=state.pending + char)
        return replace(out, text=state.text + char)

    def finish(self, state: TextState) -> TextState:
        out = self._flush(state)
        if self.lm is not None:
            out = replace(out, lm_logp=out.lm_logp + self.lm.end_score(out.lm_state))
        return out


def word_count(text: str) -> int:
    """Word tokens only; markers and star are excluded."""
    return sum(1 for token in tokenize(text) if token not in _SPECIAL)


def lm_logp(text: str, lm: NgramLM | None) -> float:
    if lm is None:
        return 0.0
    tokens = tokenize(text)
    if lm.text_mode is TextMode.PLAIN:
        tokens = [t for t in tokens if t not in _SPECIAL]
    return lm.score(tokens)


def fused_q(ctc_logp: float, lm_score: float, wc: int, alpha: float, beta: float) -> float:
    if not math.isfinite(ctc_logp):
        return -math.inf
    lm_term = alpha * lm_score if alpha != 0 else 0.0
    return ctc_logp + lm_term + beta * wc


def score_Q(
    text: str,
    lattice: np.ndarray,
    lm: NgramLM | None,
    alphabet: Alphabet,
    cfg: DecoderConfig,
) -> float:
    """Q = log p_CTC(text) + alpha * log p_LM(tokens) + beta * wc; -inf if infeasible."""
    lattice = np.asarray(lattice, dtype=np.float64)
    if lattice.ndim != 2 or lattice.shape[1] != alphabet.size:
        raise DecoderError(
            f"lattice width {lattice.shape[-1]} does not match alphabet size {alphabet.size}"
        )
    result = ctc_loss(lattice, alphabet.to_ids(text))
    if not result.feasible:
        return -math.inf
    return fused_q(-result.loss, lm_logp(text, lm), word_count(text), cfg.alpha, cfg.beta)
