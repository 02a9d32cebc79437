"""
Corpus decoding: acoustic model forward pass plus prefix beam search.

Results are written as n-best JSONL, one line per utterance:

    {"id": "test-000003", "n-best": [{"tagged": ..., "Q": ..., "ctc_logp": ...,
                                      "lm_logp": ..., "wc": ...}, ...]}
"""

import json
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..core.config import settings
from ..core.exceptions import ManifestError, MissingInputError
from ..core.logging_config import get_logger
from ..corpus.manifest import Corpus
from ..corpus.schemas import Utterance
from ..decoder.beam_search import Hypothesis, beam_search
from ..decoder.config import DecoderConfig
from ..lm.ngram import NgramLM
from ..net.model import AcousticModel

logger = get_logger(__name__)

NBEST_KEY = "n-best"


class DecodingService:
    """Decode utterances of a corpus with one model, LM and decoder config."""

    def __init__(
        self,
        model: AcousticModel,
        lm: NgramLM | None = None,
        cfg: DecoderConfig | None = None,
        threads: int | None = None,
    ):
        self.model = model
        self.lm = lm
        self.cfg = cfg or DecoderConfig()
        self.threads = threads or settings.effective_threads

    def decode_one(self, corpus: Corpus, utterance: Utterance) -> list[Hypothesis]:
        lattice = self.model.forward(corpus.features(utterance))
        return beam_search(lattice, self.lm, self.model.alphabet, self.cfg)

    def decode(
        self, corpus: Corpus, utterances: Sequence[Utterance] | None = None
    ) -> dict[str, list[Hypothesis]]:
        """n-best lists keyed by utterance id, in manifest order."""
        utterances = list(corpus) if utterances is None else list(utterances)
        logger.info(
            "decoding_started",
            utterances=len(utterances),
            beam_width=self.cfg.beam_width,
            alpha=self.cfg.alpha,
            beta=self.cfg.beta,
            threads=self.threads,
        )
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            nbest = list(pool.map(lambda u: self.decode_one(corpus, u), utterances))
        return {u.id: hyps for u, hyps in zip(utterances, nbest)}

    def best(
        self, corpus: Corpus, utterances: Sequence[Utterance] | None = None
    ) -> dict[str, str]:
        return {k: v[0].text for k, v in self.decode(corpus, utterances).items()}


def write_nbest(path: str | Path, results: Mapping[str, Sequence[Hypothesis]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for utt_id, hyps in results.items():
            record = {"id": utt_id, NBEST_KEY: [h.as_record() for h in hyps]}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_hypotheses(path: str | Path) -> dict[str, str]:
    """1-best tagged strings from n-best JSONL or from a corpus manifest."""
    path = Path(path)
    if not path.exists():
        raise MissingInputError(str(path), what="hypothesis file")
    hyps: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                utt_id = record["id"]
                if NBEST_KEY in record:
                    text = record[NBEST_KEY][0]["tagged"]
                else:
                    text = record["tagged"]
            except json.JSONDecodeError as e:
                raise ManifestError(f"invalid JSON ({e.msg})", str(path), lineno)
            except (KeyError, IndexError, TypeError):
                raise ManifestError(
                    f"record needs 'id' and '{NBEST_KEY}' or 'tagged'", str(path), lineno
                )
            if utt_id in hyps:
                raise ManifestError(f"duplicate id '{utt_id}'", str(path), lineno)
            hyps[utt_id] = text
    return hyps
