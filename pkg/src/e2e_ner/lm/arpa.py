"""
ARPA-style text files.

Layout::

    # e2e-ner text_mode=tagged        (optional; anything before \\data\\ is ignored)
    \\data\\
    ngram 1=<count>
    ...
    ngram n=<count>

    \\1-grams:
    <log10 prob>\\t<w1>[\\t<log10 backoff>]
    ...
    \\n-grams:
    <log10 prob>\\t<w1 ... wn>

    \\end\\

Probabilities and backoff weights are base-10 logs written with full float
precision; entries are sorted so the file is deterministic.
"""

import math
from pathlib import Path

from ..core.exceptions import ArpaFormatError, LanguageModelError, MissingInputError
from ..core.logging_config import get_logger
from .ngram import BOS, Ngram, NgramLM
from .text import TextMode

logger = get_logger(__name__)

_LN10 = math.log(10)


def save_lm(lm: NgramLM, path: str | Path) -> None:
    logprobs = lm.logprobs
    backoffs = lm.backoffs
    by_order: dict[int, list[Ngram]] = {k: [] for k in range(1, lm.order + 1)}
    for ngram in logprobs:
        by_order[len(ngram)].append(ngram)

    lines = [f"# e2e-ner text_mode={lm.text_mode.value}", "\\data\\"]
    lines += [f"ngram {k}={len(by_order[k])}" for k in by_order]
    for k, ngrams in by_order.items():
        lines += ["", f"\\{k}-grams:"]
        for ngram in sorted(ngrams):
            fields = [repr(logprobs[ngram] / _LN10), " ".join(ngram)]
            if ngram in backoffs:
                fields.append(repr(backoffs[ngram] / _LN10))
            lines.append("\t".join(fields))
    lines += ["", "\\end\\", ""]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines), encoding="utf-8")
    logger.info("lm_saved", path=str(path), order=lm.order, ngrams=len(logprobs))


def _float(text: str, path: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ArpaFormatError(f"not a number: {text!r}", path, line)


def load_lm(path: str | Path) -> NgramLM:
    path = Path(path)
    if not path.exists():
        raise MissingInputError(str(path), what="language model")
    where = str(path)
    lines = path.read_text(encoding="utf-8").split("\n")

    text_mode = TextMode.TAGGED
    i = 0
    while i < len(lines) and lines[i].strip() != "\\data\\":
        head = lines[i].strip()
        if head.startswith("# e2e-ner") and "text_mode=" in head:
            text_mode = TextMode(head.split("text_mode=", 1)[1].split()[0])
        i += 1
    if i == len(lines):
        raise ArpaFormatError("missing \\data\\ header", where)
    i += 1

    declared: dict[int, int] = {}
    while i < len(lines) and lines[i].startswith("ngram "):
        key, _, value = lines[i][len("ngram ") :].partition("=")
        try:
            declared[int(key)] = int(value)
        except ValueError:
            raise ArpaFormatError(f"bad count line {lines[i]!r}", where, i + 1)
        i += 1
    if not declared or sorted(declared) != list(range(1, max(declared) + 1)):
        raise ArpaFormatError("n-gram counts missing or not contiguous", where, i + 1)
    order = max(declared)

    logprobs: dict[Ngram, float] = {}
    backoffs: dict[Ngram, float] = {}
    current: int | None = None
    seen: dict[int, int] = {k: 0 for k in declared}
    ended = False
    for lineno in range(i, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        if line == "\\end\\":
            ended = True
            break
        if line.startswith("\\") and line.endswith("-grams:"):
            try:
                current = int(line[1 : -len("-grams:")])
            except ValueError:
                raise ArpaFormatError(f"bad section {line!r}", where, lineno + 1)
            if current not in declared:
                raise ArpaFormatError(f"undeclared section {line!r}", where, lineno + 1)
            continue
        if current is None:
            raise ArpaFormatError("entry outside an n-gram section", where, lineno + 1)
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ArpaFormatError(f"expected 2 or 3 fields, got {len(fields)}", where, lineno + 1)
        ngram = tuple(fields[1].split(" "))
        if len(ngram) != current:
            raise ArpaFormatError(f"{len(ngram)} words in a {current}-gram", where, lineno + 1)
        logprobs[ngram] = _float(fields[0], where, lineno + 1) * _LN10
        if len(fields) == 3:
            backoffs[ngram] = _float(fields[2], where, lineno + 1) * _LN10
        seen[current] += 1
    if not ended:
        raise ArpaFormatError("missing \\end\\ marker", where)
    for k, count in declared.items():
        if seen[k] != count:
            raise ArpaFormatError(f"header declares {count} {k}-grams, found {seen[k]}", where)

    vocabulary = [ngram[0] for ngram in logprobs if len(ngram) == 1 and ngram[0] != BOS]
    try:
        return NgramLM(order, vocabulary, logprobs, backoffs, text_mode)
    except LanguageModelError as e:
        raise ArpaFormatError(e.message, where)
