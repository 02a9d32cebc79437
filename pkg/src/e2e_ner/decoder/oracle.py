"""Exhaustive Q maximization over every path of a tiny lattice."""

import itertools
import math
from collections import defaultdict

import numpy as np

from ..alphabet.alphabet import Alphabet
from ..core.exceptions import DecoderError, SearchSpaceTooLargeError
from ..ctc.loss import collapse_path, log_softmax, log_sum_exp
from ..lm.ngram import NgramLM
from .beam_search import Hypothesis
from .fusion import fused_q, lm_logp, word_count

ORACLE_LIMIT = 10**6


def rank_label_sequences(
    lattice: np.ndarray,
    lm: NgramLM | None,
    alphabet: Alphabet,
    alpha: float,
    beta: float,
    limit: int = ORACLE_LIMIT,
) -> list[Hypothesis]:
    """Every reachable label sequence with its exact Q, best first."""
    lattice = np.asarray(lattice, dtype=np.float64)
    if lattice.ndim != 2 or lattice.shape[1] != alphabet.size:
        raise DecoderError(
            f"lattice shape {lattice.shape} does not match alphabet size {alphabet.size}"
        )
    n_frames, n_symbols = lattice.shape
    size = n_symbols**n_frames
    if size > limit:
        raise SearchSpaceTooLargeError(size, limit)

    logp = log_softmax(lattice)
    frames = np.arange(n_frames)
    classes: dict[tuple[int, ...], list[float]] = defaultdict(list)
    for path in itertools.product(range(n_symbols), repeat=n_frames):
        classes[collapse_path(path)].append(float(logp[frames, list(path)].sum()))

    ranked = []
    for labels, terms in classes.items():
        ctc_logp = float(log_sum_exp(np.array(terms)))
        text = alphabet.from_ids(labels)
        lm_score = lm_logp(text, lm)
        wc = word_count(text)
        q = fused_q(ctc_logp, lm_score, wc, alpha, beta)
        ranked.append(Hypothesis(text, q, ctc_logp, lm_score, wc, labels))
    ranked.sort(key=lambda h: (-h.q, h.text))
    return ranked


def exhaustive_oracle(
    lattice: np.ndarray,
    lm: NgramLM | None,
    alphabet: Alphabet,
    alpha: float,
    beta: float,
    limit: int = ORACLE_LIMIT,
) -> tuple[str, float]:
    best = rank_label_sequences(lattice, lm, alphabet, alpha, beta, limit)[0]
    if not math.isfinite(best.q):
        raise DecoderError("no label sequence has non-zero probability")
    return best.text, best.q
