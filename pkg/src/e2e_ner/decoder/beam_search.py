"""
CTC prefix beam search with word-level shallow fusion.

Each prefix keeps two CTC log masses: paths ending in blank and paths ending
in a non-blank. The LM and word bonus are a function of the prefix alone
(``FusionScorer``), so they enter the ranking score

    Q = log(p_b + p_nb) + alpha * log p_LM + beta * wc

without touching the CTC masses. Beams are pruned on the partial Q (pending
word not yet scored); the end-of-utterance completion is applied before the
final ranking. Ties are broken by the decoded string.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..alphabet.alphabet import Alphabet
from ..core.exceptions import DecoderError
from ..ctc.decode import mask_symbols
from ..ctc.loss import BLANK, log_softmax
from ..lm.ngram import NgramLM
from .config import DecoderConfig
from .fusion import FusionScorer, TextState, fused_q

NEG_INF = -math.inf

Prefix = tuple[int, ...]


@dataclass(frozen=True)
class Hypothesis:
    text: str
    q: float
    ctc_logp: float
    lm_logp: float
    wc: int
    prefix: Prefix = ()

    def as_record(self) -> dict:
        return {
            "tagged": self.text,
            "Q": self.q,
            "ctc_logp": self.ctc_logp,
            "lm_logp": self.lm_logp,
            "wc": self.wc,
        }


def _lae(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


class _Masses:
    __slots__ = ("blank", "non_blank")

    def __init__(self) -> None:
        self.blank = NEG_INF
        self.non_blank = NEG_INF

    @property
    def total(self) -> float:
        return _lae(self.blank, self.non_blank)


def _candidates(row: np.ndarray, threshold: float | None) -> list[int]:
    ids = np.flatnonzero(np.isfinite(row))
    if threshold is not None:
        ids = ids[row[ids] >= threshold]
    return [int(k) for k in ids if k != BLANK]


def beam_search(
    lattice: np.ndarray,
    lm: NgramLM | None,
    alphabet: Alphabet,
    cfg: DecoderConfig | None = None,
) -> list[Hypothesis]:
    """The ``cfg.n_best`` best prefixes by Q, best first."""
    cfg = cfg or DecoderConfig()
    lattice = np.asarray(lattice, dtype=np.float64)
    if lattice.ndim != 2 or lattice.shape[1] != alphabet.size:
        raise DecoderError(
            f"lattice shape {lattice.shape} does not match alphabet size {alphabet.size}",
            {"shape": list(lattice.shape), "alphabet_size": alphabet.size},
        )
    if lattice.shape[0] == 0:
        raise DecoderError("empty lattice")

    logp = mask_symbols(log_softmax(lattice), cfg.suppress_ids)
    scorer = FusionScorer(lm)
    symbols = alphabet.symbols
    states: dict[Prefix, TextState] = {(): scorer.initial()}

    def text_state(prefix: Prefix) -> TextState:
        state = states.get(prefix)
        if state is None:
            state = scorer.append(text_state(prefix[:-1]), symbols[prefix[-1]])
            states[prefix] = state
        return state

    beams: dict[Prefix, _Masses] = {(): _Masses()}
    beams[()].blank = 0.0

    for t in range(lattice.shape[0]):
        row = logp[t]
        p_blank = row[BLANK]
        candidates = _candidates(row, cfg.prune_threshold)
        nxt: dict[Prefix, _Masses] = {}

        def slot(prefix: Prefix) -> _Masses:
            masses = nxt.get(prefix)
            if masses is None:
                masses = nxt[prefix] = _Masses()
            return masses

        for prefix, masses in beams.items():
            total = masses.total
            stay = slot(prefix)
            stay.blank = _lae(stay.blank, total + p_blank)
            last = prefix[-1] if prefix else None
            for k in candidates:
                p = float(row[k])
                if k == last:
                    # a repeat collapses unless separated by a blank
                    stay.non_blank = _lae(stay.non_blank, masses.non_blank + p)
                    grown = slot(prefix + (k,))
                    grown.non_blank = _lae(grown.non_blank, masses.blank + p)
                else:
                    grown = slot(prefix + (k,))
                    grown.non_blank = _lae(grown.non_blank, total + p)

        ranked = []
        for prefix, masses in nxt.items():
            total = masses.total
            if total == NEG_INF:
                continue
            state = text_state(prefix)
            q = fused_q(total, state.lm_logp, state.wc, cfg.alpha, cfg.beta)
            ranked.append((-q, state.text, prefix))
        ranked.sort()
        beams = {prefix: nxt[prefix] for _, _, prefix in ranked[: cfg.beam_width]}

    finals = []
    for prefix, masses in beams.items():
        done = scorer.finish(text_state(prefix))
        ctc_logp = masses.total
        q = fused_q(ctc_logp, done.lm_logp, done.wc, cfg.alpha, cfg.beta)
        finals.append(Hypothesis(done.text, q, ctc_logp, done.lm_logp, done.wc, prefix))
    finals.sort(key=lambda h: (-h.q, h.text))
    return finals[: cfg.n_best]
