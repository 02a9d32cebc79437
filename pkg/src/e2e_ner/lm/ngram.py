"""
Word-token n-gram model with Witten-Bell interpolation.

For a context ``h`` seen ``c(h)`` times with ``N1+(h)`` distinct successors::

    p(w | h) = (c(h, w) + N1+(h) * p(w | h')) / (c(h) + N1+(h))

where ``h'`` drops the oldest token; an unseen context falls through to
``p(w | h')``, and below order 1 sits the uniform ``1 / |V|``. The vocabulary
``V`` holds every training token plus ``</s>`` and ``<unk>``; ``<s>`` only pads
contexts and is never predicted.

After training the model is kept in backoff form (explicit probabilities for
seen n-grams, backoff weights ``N1+(h) / (c(h) + N1+(h))`` for seen contexts),
which is exactly what an ARPA file stores, so a trained model and its reloaded
copy score identically. All log probabilities are natural logs.
"""

import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence

from ..core.exceptions import LanguageModelError
from ..core.logging_config import get_logger
from .text import TextMode

logger = get_logger(__name__)

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# ARPA convention for the never-predicted sentence-start entries
NEVER_LOG10 = -99.0

LmState = tuple[str, ...]
Ngram = tuple[str, ...]


class NgramLM:
    """Immutable backoff n-gram model; safe to share across threads."""

    def __init__(
        self,
        order: int,
        vocabulary: Iterable[str],
        logprobs: dict[Ngram, float],
        backoffs: dict[Ngram, float],
        text_mode: TextMode | str = TextMode.TAGGED,
    ):
        if order < 1:
            raise LanguageModelError(f"order must be >= 1, got {order}")
        self.order = order
        self.vocabulary = frozenset(vocabulary)
        self.text_mode = TextMode(text_mode)
        self._logprobs = logprobs
        self._backoffs = backoffs
        for word in (EOS, UNK):
            if (word,) not in logprobs:
                raise LanguageModelError(f"unigram table lacks {word}")

    @property
    def logprobs(self) -> dict[Ngram, float]:
        return dict(self._logprobs)

    @property
    def backoffs(self) -> dict[Ngram, float]:
        return dict(self._backoffs)

    def map_token(self, token: str) -> str:
        return token if token in self.vocabulary else UNK

    def logprob(self, context: Sequence[str], token: str) -> float:
        """log p(token | last order-1 context tokens)."""
        word = self.map_token(token)
        history = tuple(context)[-(self.order - 1) :] if self.order > 1 else ()
        acc = 0.0
        for start in range(len(history) + 1):
            h = history[start:]
            value = self._logprobs.get(h + (word,))
            if value is not None:
                return acc + value
            acc += self._backoffs.get(h, 0.0)
        raise LanguageModelError(f"no unigram entry for {word!r}")

    def begin_state(self) -> LmState:
        return (BOS,) * (self.order - 1)

    def advance(self, state: LmState, token: str) -> tuple[float, LmState]:
        """Score ``token`` after ``state``; returns (log prob, next state)."""
        logp = self.logprob(state, token)
        if self.order == 1:
            return logp, ()
        return logp, (state + (self.map_token(token),))[1:]

    def end_score(self, state: LmState) -> float:
        return self.logprob(state, EOS)

    def score(self, tokens: Sequence[str]) -> float:
        """Sentence log probability including the end-of-sentence event."""
        state = self.begin_state()
        total = 0.0
        for token in tokens:
            logp, state = self.advance(state, token)
            total += logp
        return total + self.end_score(state)

    def perplexity(self, sentences: Sequence[Sequence[str]]) -> float:
        n_events = sum(len(s) + 1 for s in sentences)
        if n_events == 0:
            raise LanguageModelError("perplexity of an empty set")
        return math.exp(-sum(self.score(s) for s in sentences) / n_events)

    def __repr__(self) -> str:
        sizes = Counter(len(k) for k in self._logprobs)
        return f"NgramLM(order={self.order}, ngrams={dict(sorted(sizes.items()))})"


class _WittenBell:
    """Count tables and the interpolated estimate used while training."""

    def __init__(self, order: int, sentences: Sequence[Sequence[str]]):
        self.order = order
        self.counts: dict[Ngram, Counter[str]] = defaultdict(Counter)
        for sentence in sentences:
            padded = [BOS] * (order - 1) + list(sentence) + [EOS]
            for i in range(order - 1, len(padded)):
                word = padded[i]
                for k in range(1, order + 1):
                    self.counts[tuple(padded[i - k + 1 : i])][word] += 1
        self.vocabulary = sorted(self.counts[()].keys() | {EOS, UNK})
        self.context_total = {h: sum(c.values()) for h, c in self.counts.items()}
        self._cache: dict[Ngram, float] = {}

    def prob(self, h: Ngram, word: str) -> float:
        key = h + (word,)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        lower = self.prob(h[1:], word) if h else 1.0 / len(self.vocabulary)
        successors = self.counts.get(h)
        if successors:
            types = len(successors)
            value = (successors[word] + types * lower) / (self.context_total[h] + types)
        else:
            value = lower
        self._cache[key] = value
        return value

    def backoff(self, h: Ngram) -> float:
        types = len(self.counts[h])
        return types / (self.context_total[h] + types)


def train_ngram(
    texts: Iterable[Sequence[str] | str],
    order: int = 3,
    text_mode: TextMode | str = TextMode.TAGGED,
) -> NgramLM:
    """Count with boundary padding and freeze the Witten-Bell estimates.

    ``texts`` are token sequences; plain strings are split on whitespace.
    """
    if order < 1:
        raise LanguageModelError(f"order must be >= 1, got {order}")
    sentences = [t.split() if isinstance(t, str) else list(t) for t in texts]
    if not sentences:
        raise LanguageModelError("cannot train on an empty corpus")
    for sentence in sentences:
        if BOS in sentence or EOS in sentence:
            raise LanguageModelError("sentence boundary tokens in training text")

    wb = _WittenBell(order, sentences)
    logprobs: dict[Ngram, float] = {}
    backoffs: dict[Ngram, float] = {}

    for word in wb.vocabulary:
        logprobs[(word,)] = math.log(wb.prob((), word))
    for h, successors in wb.counts.items():
        if h:
            for word in successors:
                logprobs[h + (word,)] = math.log(wb.prob(h, word))
            backoffs[h] = math.log(wb.backoff(h))
    # contexts made only of <s> are never predicted but carry backoff weights
    for k in range(1, order):
        pads = (BOS,) * k
        logprobs.setdefault(pads, NEVER_LOG10 * math.log(10))

    lm = NgramLM(order, wb.vocabulary, logprobs, backoffs, text_mode)
    logger.info(
        "lm_trained",
        order=order,
        sentences=len(sentences),
        vocabulary=len(wb.vocabulary),
        text_mode=lm.text_mode.value,
    )
    return lm
