"""Two-stage baseline: ASR decode with markers masked, then text annotation."""

from collections.abc import Sequence

from ..augment.annotator import annotate
from ..augment.rules import RuleSet
from ..core.exceptions import LanguageModelError
from ..core.logging_config import get_logger
from ..corpus.manifest import Corpus
from ..corpus.schemas import Utterance
from ..decoder.config import DecoderConfig
from ..lm.ngram import NgramLM
from ..lm.text import TextMode
from ..net.model import AcousticModel
from .decoding_service import DecodingService

logger = get_logger(__name__)


class PipelineService:
    """ASR transcript of each utterance, tagged by ``annotate``."""

    def __init__(
        self,
        model: AcousticModel,
        rules: RuleSet,
        lm: NgramLM | None = None,
        cfg: DecoderConfig | None = None,
        threads: int | None = None,
    ):
        if lm is not None and lm.text_mode is not TextMode.PLAIN:
            raise LanguageModelError(
                f"the pipeline ASR stage needs a plain-text LM, got '{lm.text_mode.value}'"
            )
        cfg = cfg or DecoderConfig()
        suppress = tuple(sorted(set(cfg.suppress_ids) | set(model.alphabet.non_base_ids)))
        self.decoder = DecodingService(
            model, lm, cfg.model_copy(update={"suppress_ids": suppress}), threads
        )
        self.rules = rules

    def transcribe(
        self, corpus: Corpus, utterances: Sequence[Utterance] | None = None
    ) -> dict[str, str]:
        return self.decoder.best(corpus, utterances)

    def run(
        self, corpus: Corpus, utterances: Sequence[Utterance] | None = None
    ) -> dict[str, str]:
        """Tagged hypotheses keyed by utterance id."""
        transcripts = self.transcribe(corpus, utterances)
        tagged = {k: annotate(text, self.rules).text for k, text in transcripts.items()}
        logger.info("pipeline_complete", utterances=len(tagged))
        return tagged
